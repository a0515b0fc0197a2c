// The skew-orthogonal polynomial construction: the antisymmetric Gram
// matrices W_m (beta = 4, modified product) and V_m (beta = 1) built from the
// orthogonal-basis tables, expansion coefficients and norms as Pfaffian
// ratios, and the quadrature / iterative verification helpers.
#pragma once

#include "moments.hpp"
#include "nm_basis.hpp"
#include "pfaffian.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace rmtedge {

// w_{j,k} = delta_{j+1,k} h_k + sigma_j sigma_k,
// sigma_j = p_j(y,y) e^{-y^2/2} / sqrt(2)   (zero at infinite cutoff)
class WMatrixBuilder {
  public:
    explicit WMatrixBuilder(const OrthoBasis& basis) : basis_(&basis) {
        int n = basis.n_max();
        sigma_.resize(static_cast<std::size_t>(n) + 1, real(0));
        if (basis.cutoff().finite) {
            const real& y = basis.cutoff().value;
            real w = exp(-y * y / 2) / sqrt(real(2));
            for (int j = 0; j <= n; ++j) sigma_[static_cast<std::size_t>(j)] = basis.p_at_cutoff(j) * w;
        }
    }

    const OrthoBasis& basis() const { return *basis_; }

    // upper-triangle generator, valid for any 0 <= j < k <= n_max
    real entry(int j, int k) const {
        real v = sigma_[static_cast<std::size_t>(j)] * sigma_[static_cast<std::size_t>(k)];
        if (k == j + 1) v += basis_->h(k);
        return v;
    }

    SkewMatrix matrix(int m) const {
        return SkewMatrix::from_upper(m + 1, [this](int j, int k) { return entry(j, k); });
    }

    // Pf W_m with the convention Pf W_{-1} = 1
    real pf_leading(int m) const {
        if (m < 0) return real(1);
        auto it = pf_cache_.find(m);
        if (it != pf_cache_.end()) return it->second;
        real v = pf(matrix(m));
        pf_cache_.emplace(m, v);
        return v;
    }

    // structured decomposition W = T + sigma sigma^T for the expansion identity
    std::vector<real> superdiagonal(int m) const {
        std::vector<real> u;
        for (int j = 0; j < m; ++j) u.push_back(basis_->h(j + 1));
        return u;
    }
    std::vector<real> rank_one_factor(int m) const {
        return std::vector<real>(sigma_.begin(), sigma_.begin() + m + 1);
    }

  private:
    const OrthoBasis* basis_;
    std::vector<real> sigma_;
    mutable std::map<int, real> pf_cache_;
};

// v_{j,j+1} = h_j - X_{j,j+1} - Phi_{j,j+1},  v_{j,k} = X_{k,j} + Phi_{k,j} (k > j+1)
// X_{j,k} = (1/2) [int_{-inf}^y p_j e^{-x^2/2} erf(x/sqrt 2)] P_k(inf,y)
// Phi_{j,k} = (1/2) [int_{-inf}^y e^{-x^2/2} p_j] [int_y^inf e^{-x^2/2} p_k]
class VMatrixBuilder {
  public:
    VMatrixBuilder(const OrthoBasis& basis, const PrecisionContext& ctx) : basis_(&basis) {
        int n = basis.n_max();
        auto E = erf_moment_table(basis.cutoff(), n, ctx);
        MomentTable half_y = MomentTable::build(real(1) / 2, basis.cutoff(), n, ctx);
        for (int j = 0; j <= n; ++j) {
            const poly& c = basis.coeffs(j);
            real ep = 0, pl = 0;
            for (std::size_t t = 0; t < c.size(); ++t) {
                ep += c[t] * E[t];
                pl += c[t] * half_y.m[t];
            }
            erf_int_.push_back(ep);
            left_int_.push_back(pl);
            full_int_.push_back(basis.capital_P_inf(j));
        }
    }

    const OrthoBasis& basis() const { return *basis_; }

    real X(int j, int k) const {
        return erf_int_[static_cast<std::size_t>(j)] * full_int_[static_cast<std::size_t>(k)] / 2;
    }
    real Phi(int j, int k) const {
        return left_int_[static_cast<std::size_t>(j)] *
               (full_int_[static_cast<std::size_t>(k)] - left_int_[static_cast<std::size_t>(k)]) / 2;
    }

    real entry(int j, int k) const {
        if (k == j + 1) return basis_->h(j) - X(j, k) - Phi(j, k);
        return X(k, j) + Phi(k, j);
    }

    SkewMatrix matrix(int m) const {
        return SkewMatrix::from_upper(m + 1, [this](int j, int k) { return entry(j, k); });
    }

    real pf_leading(int m) const {
        if (m < 0) return real(1);
        auto it = pf_cache_.find(m);
        if (it != pf_cache_.end()) return it->second;
        real v = pf(matrix(m));
        pf_cache_.emplace(m, v);
        return v;
    }

  private:
    const OrthoBasis* basis_;
    std::vector<real> erf_int_;  // int_{-inf}^y p_j e^{-x^2/2} erf(x/sqrt 2)
    std::vector<real> left_int_; // int_{-inf}^y e^{-x^2/2} p_j
    std::vector<real> full_int_; // P_j(inf, y)
    mutable std::map<int, real> pf_cache_;
};

namespace detail {

template <class Builder>
real pf_ratio_or_die(const Builder& b, int num_dim, int from, int to, int den_m,
                     const char* what) {
    real den = b.pf_leading(den_m);
    if (den == 0 || !(den > 0 || den < 0))
        throw precision_error(std::string(what) + ": degenerate Pfaffian denominator");
    auto entry = [&b](int j, int k) { return b.entry(j, k); };
    real num = pf_index_subst(num_dim, entry, from, to);
    return -num / den;
}

// Proposition coefficients: gauge alpha_{j,j} = 1, alpha_{2j+1,2j} = 0,
// otherwise -Pf M_{j-1}^{(k -> j)} / Pf M_{j-1} (j even) or with j-2 (j odd).
template <class Builder>
real skew_alpha(const Builder& b, int j, int k) {
    if (k > j || k < 0 || j < 0) throw std::out_of_range("skew_alpha: need 0 <= k <= j");
    if (k == j) return real(1);
    if (j % 2 == 1 && k == j - 1) return real(0);
    if (j % 2 == 0) return pf_ratio_or_die(b, j, k, j, j - 1, "skew_alpha");
    return pf_ratio_or_die(b, j - 1, k, j, j - 2, "skew_alpha");
}

// Appendix-E inverse coefficients (cross-check only):
// beta_{j,k} = Pf M_{k+1}^{(k -> j)} / Pf M_{k+1} (k even), Pf M_k^{(k -> j)} / Pf M_k (k odd)
template <class Builder>
real skew_beta(const Builder& b, int j, int k) {
    if (k > j || k < 0) throw std::out_of_range("skew_beta: need 0 <= k <= j");
    if (k == j) return real(1);
    int m = (k % 2 == 0) ? k + 1 : k;
    return -pf_ratio_or_die(b, m + 1, k, j, m, "skew_beta");
}

template <class Builder>
real skew_norm(const Builder& b, int j) {
    real den = b.pf_leading(2 * j - 1);
    if (den == 0 || !(den > 0 || den < 0))
        throw precision_error("skew_norm: degenerate Pfaffian denominator");
    return b.pf_leading(2 * j + 1) / den;
}

} // namespace detail

// --- beta = 4 (modified product, cutoff already rescaled by the caller) ---

inline real alpha_beta4(const WMatrixBuilder& w, int j, int k) {
    return detail::skew_alpha(w, j, k);
}
inline real norm_q_tilde(const WMatrixBuilder& w, int j) { return detail::skew_norm(w, j); }

// --- beta = 1 ---

inline real alpha_beta1(const VMatrixBuilder& v, int j, int k) {
    return detail::skew_alpha(v, j, k);
}
inline real norm_r(const VMatrixBuilder& v, int j) { return detail::skew_norm(v, j); }

namespace detail {

// eta_j = sum_k alpha_{j,k} p_k, then the e:oddsymm shift to the zero
// lambda^{j-1}-coefficient representative for odd j (even polynomials and all
// norms are gauge invariant).
template <class Builder>
poly assemble_in_p_basis(const Builder& b, int j) {
    const OrthoBasis& basis = b.basis();
    poly out(static_cast<std::size_t>(j) + 1, real(0));
    for (int k = 0; k <= j; ++k) {
        real a = skew_alpha(b, j, k);
        if (a == 0) continue;
        const poly& pk = basis.coeffs(k);
        for (std::size_t t = 0; t < pk.size(); ++t) out[t] += a * pk[t];
    }
    if (j % 2 == 1 && j >= 1) {
        real c = out[static_cast<std::size_t>(j - 1)];
        if (c != 0) {
            poly lower = assemble_in_p_basis(b, j - 1);
            for (std::size_t t = 0; t < lower.size(); ++t) out[t] -= c * lower[t];
        }
    }
    return out;
}

} // namespace detail

// Monic skew-orthogonal polynomial of degree j in the monomial basis.
// beta = 4: Q_j(x, y) = 2^{-j/2} Qt_j(sqrt(2) x) with Qt built at cutoff sqrt(2) y.
inline poly assemble_sop(int beta, int j, const real& y, const PrecisionContext& ctx) {
    if (beta == 1) {
        auto basis = OrthoBasis::build(Cutoff::at(y), j, ctx);
        VMatrixBuilder v(basis, ctx);
        return detail::assemble_in_p_basis(v, j);
    }
    if (beta == 4) {
        real s2 = sqrt(real(2));
        auto basis = OrthoBasis::build(Cutoff::at(s2 * y), j, ctx);
        WMatrixBuilder w(basis);
        poly qt = detail::assemble_in_p_basis(w, j);
        poly q = poly_stretch(qt, s2);
        return poly_scale(q, pow(s2, -j));
    }
    throw std::invalid_argument("assemble_sop: beta must be 1 or 4");
}

// --- quadrature oracles for the skew inner products ---

// <f,g>_4^y = (1/2) int_{-inf}^y e^{-2x^2} (f g' - g f')
inline real skew_inner_quad4(const poly& f, const poly& g, const real& y,
                             const PrecisionContext& ctx) {
    poly fp = poly_derivative(f), gp = poly_derivative(g);
    real tol = ctx.eps;
    real L = gaussian_tail_cut(2.0, tol);
    return tanh_sinh(
               [&](const real& x) {
                   return exp(-2 * x * x) *
                          (poly_eval(f, x) * poly_eval(gp, x) - poly_eval(g, x) * poly_eval(fp, x));
               },
               -L, y, tol, 12) /
           2;
}

// <<f,g>>_4^y: the modified product with weight e^{-x^2}
inline real skew_inner_quad4_modified(const poly& f, const poly& g, const real& y,
                                      const PrecisionContext& ctx) {
    poly fp = poly_derivative(f), gp = poly_derivative(g);
    real tol = ctx.eps;
    real L = gaussian_tail_cut(1.0, tol);
    return tanh_sinh(
               [&](const real& x) {
                   return exp(-x * x) *
                          (poly_eval(f, x) * poly_eval(gp, x) - poly_eval(g, x) * poly_eval(fp, x));
               },
               -L, y, tol, 12) /
           2;
}

// <f,g>_1^y as the iterated double integral with the sgn split
inline real skew_inner_quad1(const poly& f, const poly& g, const real& y,
                             const PrecisionContext& ctx, const real& tol_override = real(0)) {
    real tol = tol_override > 0 ? tol_override : sqrt(ctx.eps);
    real L = gaussian_tail_cut(0.5, tol);
    auto inner = [&](const real& x) {
        real right = tanh_sinh(
            [&](const real& z) { return exp(-z * z / 2) * poly_eval(g, z); }, x, y, tol / 16, 10);
        real left = tanh_sinh(
            [&](const real& z) { return exp(-z * z / 2) * poly_eval(g, z); }, -L, x, tol / 16, 10);
        return exp(-x * x / 2) * poly_eval(f, x) * (right - left);
    };
    return tanh_sinh(inner, -L, y, tol, 10) / 2;
}

inline real skew_inner_quad(int beta, const poly& f, const poly& g, const real& y,
                            const PrecisionContext& ctx) {
    if (beta == 4) return skew_inner_quad4(f, g, y, ctx);
    if (beta == 1) return skew_inner_quad1(f, g, y, ctx);
    throw std::invalid_argument("skew_inner_quad: beta must be 1 or 4");
}

// --- the A operator pair (verification helpers) ---

// A f[x] = e^{x^2/2} d/dx (e^{-x^2/2} f) = f'(x) - x f(x)
inline real apply_A(const poly& f, const real& x) {
    return poly_eval(poly_derivative(f), x) - x * poly_eval(f, x);
}

// A^{-1} f[x] = (e^{x^2/2}/2) int sgn(x-z) e^{-z^2/2} f(z) dz, by quadrature
inline real apply_A_inv(const poly& f, const real& x, const PrecisionContext& ctx) {
    real tol = ctx.eps;
    real L = gaussian_tail_cut(0.5, tol);
    real left = tanh_sinh([&](const real& z) { return exp(-z * z / 2) * poly_eval(f, z); }, -L, x,
                          tol, 12);
    real right = tanh_sinh([&](const real& z) { return exp(-z * z / 2) * poly_eval(f, z); }, x, L,
                           tol, 12);
    return exp(x * x / 2) / 2 * (left - right);
}

// Omega(f, g; y) = e^{-y^2} f(y) g(y)
inline real boundary_omega(const poly& f, const poly& g, const real& y) {
    return exp(-y * y) * poly_eval(f, y) * poly_eval(g, y);
}

// --- closed-form skew inner products of monomials (for the iterative oracle) ---

namespace detail {

// <x^a, x^b>_beta^y from the moment tables; independent of the Pfaffian path.
class MonomialSkewTable {
  public:
    MonomialSkewTable(int beta, int max_deg, const real& y, const PrecisionContext& ctx)
        : beta_(beta) {
        int k = 2 * max_deg + 2;
        if (beta == 4) {
            m2_ = MomentTable::build(real(2), Cutoff::at(y), k, ctx).m;
            return;
        }
        // beta = 1 pieces
        auto half_y = MomentTable::build(real(1) / 2, Cutoff::at(y), k, ctx);
        auto half_inf = MomentTable::build(real(1) / 2, Cutoff::infinity(), k, ctx);
        auto one_y = MomentTable::build(real(1), Cutoff::at(y), k, ctx);
        E_ = erf_moment_table(Cutoff::at(y), k, ctx);
        mh_y_ = half_y.m;
        mh_inf_ = half_inf.m;
        m1_y_ = one_y.m;
    }

    real operator()(int a, int b) const {
        if (beta_ == 4) // ((b - a)/2) m^{(2)}_{a+b-1}(y)
            return (a + b >= 1) ? real(b - a) / 2 * m2_[static_cast<std::size_t>(a + b - 1)]
                                : real(0);
        return inner1(a, b);
    }

  private:
    int beta_;
    std::vector<real> m2_;
    std::vector<real> E_, mh_y_, mh_inf_, m1_y_;

    // M_b(x) = A_b sqrt(2 pi)(1+erf(x/sqrt 2))/2 + e^{-x^2/2} q_b(x) with
    // q_b = (b-1) q_{b-2} - x^{b-1}, A_{2t} = (2t-1)!!, A_odd = 0
    static void half_moment_closed_form(int b, real& A, poly& q) {
        poly q0{};            // q_0 = 0
        poly q1{real(-1)};    // q_1 = -1
        real A0 = 1, A1 = 0;
        if (b == 0) { A = A0; q = q0; return; }
        if (b == 1) { A = A1; q = q1; return; }
        poly qm2 = q0, qm1 = q1;
        real Am2 = A0, Am1 = A1;
        for (int k = 2; k <= b; ++k) {
            poly qk(static_cast<std::size_t>(k), real(0));
            for (std::size_t t = 0; t < qm2.size(); ++t) qk[t] += real(k - 1) * qm2[t];
            qk[static_cast<std::size_t>(k - 1)] -= 1;
            real Ak = real(k - 1) * Am2;
            qm2 = qm1; qm1 = qk;
            Am2 = Am1; Am1 = Ak;
        }
        A = Am1;
        q = qm1;
    }

    // <x^a, x^b>_1^y = -(x^a, A^{-1} x^b)_2^y - Phi(x^a, x^b)
    real inner1(int a, int b) const {
        real A;
        poly q;
        half_moment_closed_form(b, A, q);
        real s2pi = sqrt(2 * pi_value());
        // G = int_{-inf}^y e^{-x^2/2} x^a M_b(x) dx
        real G = A * s2pi / 2 *
                 (mh_y_[static_cast<std::size_t>(a)] + E_[static_cast<std::size_t>(a)]);
        for (std::size_t t = 0; t < q.size(); ++t)
            G += q[t] * m1_y_[static_cast<std::size_t>(a) + t];
        real Mb_inf = A * s2pi;
        real inner2 = G - Mb_inf / 2 * mh_y_[static_cast<std::size_t>(a)];
        real phi = mh_y_[static_cast<std::size_t>(a)] *
                   (mh_inf_[static_cast<std::size_t>(b)] - mh_y_[static_cast<std::size_t>(b)]) / 2;
        return -inner2 - phi;
    }
};

} // namespace detail

// Appendix-D style iterative construction (degrees 0..3): solve the defining
// skew-orthogonality conditions directly in the monomial basis with the zero
// lambda^{j-1}-coefficient gauge for odd degrees.
namespace detail {

// solve <x^2 + a x + b, 1> = 0, <x^2 + a x + b, x> = 0
template <class S>
poly solve_degree2(S&& s) {
    real a11 = s(1, 0), a12 = s(0, 0);
    real a21 = s(1, 1), a22 = s(0, 1);
    real r1 = -s(2, 0), r2 = -s(2, 1);
    real det = a11 * a22 - a12 * a21;
    real a = (r1 * a22 - a12 * r2) / det;
    real b = (a11 * r2 - r1 * a21) / det;
    return poly{b, a, real(1)};
}

// solve <x^3 + c x + d, 1> = 0, <x^3 + c x + d, x> = 0 (zero x^2 gauge)
template <class S>
poly solve_degree3(S&& s) {
    real a11 = s(1, 0), a12 = s(0, 0);
    real a21 = s(1, 1), a22 = s(0, 1);
    real r1 = -s(3, 0), r2 = -s(3, 1);
    real det = a11 * a22 - a12 * a21;
    real c = (r1 * a22 - a12 * r2) / det;
    real d = (a11 * r2 - r1 * a21) / det;
    return poly{d, c, real(0), real(1)};
}

} // namespace detail

inline poly iterative_sop(int beta, int degree, const real& y, const PrecisionContext& ctx) {
    if (beta != 1 && beta != 4) throw std::invalid_argument("iterative_sop: beta must be 1 or 4");
    if (degree < 0 || degree > 3)
        throw std::invalid_argument("iterative_sop: only degrees <= 3 supported");
    if (degree == 0) return poly{real(1)};
    if (degree == 1) return poly{real(0), real(1)};

    // beta = 4 works in the rescaled (modified-product) variables throughout:
    // solve for Qt at cutoff sqrt(2) y with the weight e^{-x^2}, then map back.
    if (beta == 4) {
        real s2 = sqrt(real(2));
        // modified product of monomials: ((b-a)/2) m^{(1)}_{a+b-1}(ytilde)
        auto m1 = MomentTable::build(real(1), Cutoff::at(s2 * y), 2 * degree + 2, ctx);
        auto s = [&](int a, int b) {
            return (a + b >= 1) ? real(b - a) / 2 * m1[a + b - 1] : real(0);
        };
        poly qt = (degree == 2) ? detail::solve_degree2(s) : detail::solve_degree3(s);
        return poly_scale(poly_stretch(qt, s2), pow(s2, -degree));
    }
    detail::MonomialSkewTable s1(1, degree, y, ctx);
    auto s = [&](int a, int b) { return s1(a, b); };
    return (degree == 2) ? detail::solve_degree2(s) : detail::solve_degree3(s);
}

} // namespace rmtedge
