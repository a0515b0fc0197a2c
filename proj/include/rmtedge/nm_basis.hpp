// The monic polynomial family orthogonal under (f,g) = int_{-inf}^y e^{-x^2} f g,
// its norms h_j(y), recurrence coefficients, wave functions and the integrals
// P_j, Psi_j needed by the beta = 1 matrix entries.
//
// At y = +infinity the family reduces to monic Hermite polynomials and all
// quantities have closed forms; that limit is a separate exact code path.
#pragma once

#include "moments.hpp"
#include "polynomial.hpp"
#include "precision.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rmtedge {

class OrthoBasis {
  public:
    // Gram-Schmidt on monomials with one re-orthogonalization pass.  Working
    // precision uses the budget max(ctx.bits, 64 + 12 n_max), validated by the
    // post-hoc orthogonality residual and escalated x2 on failure.
    static OrthoBasis build(const Cutoff& y, int n_max, const PrecisionContext& ctx) {
        if (n_max < 0) throw std::invalid_argument("OrthoBasis: n_max must be >= 0");
        unsigned budget = ctx.bits;
        unsigned heuristic = 64 + 12 * static_cast<unsigned>(n_max);
        if (heuristic > budget) budget = heuristic;

        for (int attempt = 0; attempt < 4; ++attempt) {
            try {
                return build_at_bits(y, n_max, ctx, budget);
            } catch (const precision_error&) {
                // escalate
            }
            budget *= 2;
        }
        throw precision_error("OrthoBasis: precision exhausted at n_max = " +
                              std::to_string(n_max) + " (n_max too large for bits)");
    }

    // single attempt at a fixed working precision, no escalation
    static OrthoBasis build_at_bits(const Cutoff& y, int n_max, const PrecisionContext& ctx,
                                    unsigned bits) {
        ScopedBits guard(bits);
        OrthoBasis b = build_at_current_precision(y, n_max, ctx);
        if (y.finite) {
            real residual = b.orthogonality_residual(ctx);
            if (!(residual < 1000 * ctx.eps))
                throw precision_error("OrthoBasis: orthogonality residual too large at " +
                                      std::to_string(bits) + " bits");
        }
        return b;
    }

    int n_max() const { return n_; }
    const Cutoff& cutoff() const { return y_; }

    const poly& coeffs(int j) const {
        check_index(j);
        return c_[static_cast<std::size_t>(j)];
    }
    const real& h(int j) const {
        check_index(j);
        return h_[static_cast<std::size_t>(j)];
    }
    const real& S(int j) const {
        check_index(j);
        return S_[static_cast<std::size_t>(j)];
    }
    // three-term ratio h_j / h_{j-1}
    real Rr(int j) const {
        if (j < 1) throw std::out_of_range("OrthoBasis::Rr: j must be >= 1");
        check_index(j);
        return h_[static_cast<std::size_t>(j)] / h_[static_cast<std::size_t>(j - 1)];
    }

    real eval_p(int j, const real& x) const { return poly_eval(coeffs(j), x); }

    // psi_j(x, y) = p_j(x, y) e^{-x^2/2} / sqrt(h_j)
    real eval_psi(int j, const real& x) const {
        return eval_p(j, x) * exp(-x * x / 2) / sqrt(h(j));
    }

    // p_j(y, y); only meaningful at a finite cutoff
    real p_at_cutoff(int j) const {
        if (!y_.finite) throw std::domain_error("p_at_cutoff: cutoff is infinite");
        return eval_p(j, y_.value);
    }

    // P_j(x, y) = int_{-inf}^x e^{-z^2/2} p_j(z, y) dz
    real capital_P(int j, const Cutoff& x, const PrecisionContext& ctx) const {
        check_index(j);
        MomentTable half = MomentTable::build(real(1) / 2, x, j, ctx);
        return dot_moments(coeffs(j), half.m);
    }

    real capital_P_inf(int j) const {
        check_index(j);
        return dot_moments(coeffs(j), half_moments_inf_);
    }

    // Psi_j(inf, y) = P_j(inf, y) / sqrt(h_j)
    real capital_Psi_inf(int j) const { return capital_P_inf(j) / sqrt(h(j)); }

    // max_{j != k} |(p_j, p_k)| / sqrt(h_j h_k) recomputed from the moments
    real orthogonality_residual(const PrecisionContext& ctx) const {
        real worst = 0;
        for (int j = 0; j <= n_; ++j)
            for (int k = 0; k < j; ++k) {
                real ip = inner(j, k);
                real scaled = abs(ip) / sqrt(h(j) * h(k));
                if (scaled > worst) worst = scaled;
            }
        (void)ctx;
        return worst;
    }

    // (p_j, p_k) under the truncated weight, from the moment table
    real inner(int j, int k) const {
        const poly& pj = coeffs(j);
        const poly& pk = coeffs(k);
        real acc = 0;
        for (std::size_t s = 0; s < pj.size(); ++s) {
            if (pj[s] == 0) continue;
            real row = 0;
            for (std::size_t t = 0; t < pk.size(); ++t)
                row += pk[t] * moments_.m[s + t];
            acc += pj[s] * row;
        }
        return acc;
    }

  private:
    Cutoff y_{true, real(0)};
    int n_ = 0;
    std::vector<poly> c_;
    std::vector<real> h_;
    std::vector<real> S_;
    MomentTable moments_;              // weight e^{-x^2} at the cutoff
    std::vector<real> half_moments_inf_; // int x^k e^{-x^2/2} over the whole line

    void check_index(int j) const {
        if (j < 0 || j > n_) throw std::out_of_range("OrthoBasis: index beyond n_max");
    }

    static real dot_moments(const poly& p, const std::vector<real>& m) {
        real acc = 0;
        for (std::size_t t = 0; t < p.size(); ++t) acc += p[t] * m[t];
        return acc;
    }

    static OrthoBasis build_at_current_precision(const Cutoff& y, int n_max,
                                                 const PrecisionContext& ctx) {
        OrthoBasis b;
        b.y_ = y;
        b.n_ = n_max;
        b.c_.resize(static_cast<std::size_t>(n_max) + 1);
        b.h_.resize(static_cast<std::size_t>(n_max) + 1);
        b.S_.resize(static_cast<std::size_t>(n_max) + 1);

        unsigned cur_bits = static_cast<unsigned>(working_digits10() * 3.3219) + 1;
        PrecisionContext inner_ctx = PrecisionContext{cur_bits, ctx.eps};
        b.moments_ = MomentTable::build(real(1), y, 2 * n_max + 2, inner_ctx);
        MomentTable half_inf =
            MomentTable::build(real(1) / 2, Cutoff::infinity(), n_max, inner_ctx);
        b.half_moments_inf_ = half_inf.m;

        if (!y.finite) {
            // monic Hermite: p_{j+1} = x p_j - (j/2) p_{j-1}
            b.c_[0] = poly{real(1)};
            if (n_max >= 1) b.c_[1] = poly{real(0), real(1)};
            for (int j = 1; j < n_max; ++j) {
                poly next(static_cast<std::size_t>(j) + 2, real(0));
                const poly& pj = b.c_[static_cast<std::size_t>(j)];
                for (std::size_t t = 0; t < pj.size(); ++t) next[t + 1] = pj[t];
                const poly& pm = b.c_[static_cast<std::size_t>(j - 1)];
                for (std::size_t t = 0; t < pm.size(); ++t) next[t] -= real(j) / 2 * pm[t];
                b.c_[static_cast<std::size_t>(j + 1)] = next;
            }
            for (int j = 0; j <= n_max; ++j) {
                b.h_[static_cast<std::size_t>(j)] = sqrt_pi() * factorial(j) / ldexp(real(1), j);
                b.S_[static_cast<std::size_t>(j)] = 0;
            }
            return b;
        }

        for (int j = 0; j <= n_max; ++j) {
            poly p(static_cast<std::size_t>(j) + 1, real(0));
            p[static_cast<std::size_t>(j)] = 1;
            for (int pass = 0; pass < 2; ++pass) {
                for (int k = 0; k < j; ++k) {
                    real coeff = b.project(p, k);
                    const poly& pk = b.c_[static_cast<std::size_t>(k)];
                    for (std::size_t t = 0; t < pk.size(); ++t) p[t] -= coeff * pk[t];
                }
            }
            b.c_[static_cast<std::size_t>(j)] = p;
            real hj = b.inner_with(p, p);
            if (!(hj > 0) || !isfinite(hj))
                throw precision_error("OrthoBasis: norm h_" + std::to_string(j) +
                                      " lost all significant bits");
            b.h_[static_cast<std::size_t>(j)] = hj;
            // S_j = (x p_j, p_j) / h_j
            poly xp(p.size() + 1, real(0));
            for (std::size_t t = 0; t < p.size(); ++t) xp[t + 1] = p[t];
            b.S_[static_cast<std::size_t>(j)] = b.inner_with(xp, p) / hj;
        }
        return b;
    }

    real project(const poly& p, int k) const {
        return inner_with(p, c_[static_cast<std::size_t>(k)]) / h_[static_cast<std::size_t>(k)];
    }

    real inner_with(const poly& pa, const poly& pb) const {
        real acc = 0;
        for (std::size_t s = 0; s < pa.size(); ++s) {
            if (pa[s] == 0) continue;
            real row = 0;
            for (std::size_t t = 0; t < pb.size(); ++t) row += pb[t] * moments_.m[s + t];
            acc += pa[s] * row;
        }
        return acc;
    }
};

} // namespace rmtedge
