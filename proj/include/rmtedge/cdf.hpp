// Largest-eigenvalue CDFs F_{beta,N}(y) for the three Gaussian ensembles via
// the orthogonal/skew-orthogonal polynomial norms, plus the structured
// Pfaffian expansion evaluators and the edge-scaling map.
#pragma once

#include "nm_basis.hpp"
#include "pfaffian.hpp"
#include "skew_poly.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rmtedge {

// classical norms (y -> infinity limits)
inline real h_inf(int j) { return sqrt_pi() * factorial(j) / ldexp(real(1), j); }
inline real q_inf(int j) {
    return sqrt_pi() * factorial(2 * j + 1) / (ldexp(real(1), 4 * j + 1) * sqrt(real(2)));
}
inline real r_inf(int j) { return sqrt_pi() * factorial(2 * j) / ldexp(real(1), 2 * j); }

enum class CdfMethod { direct, expansion };

// F_{2,N}(y) = prod_{j<N} h_j(y)/h_j(inf)
inline real f2(int n, const real& y, const PrecisionContext& ctx) {
    if (n < 1) throw std::invalid_argument("f2: N must be >= 1");
    auto basis = OrthoBasis::build(Cutoff::at(y), n - 1, ctx);
    real prod = 1;
    for (int j = 0; j < n; ++j) prod *= basis.h(j) / h_inf(j);
    return prod;
}

// Pf W_{2N-1}(y) via the expansion identity
// (prod h_{2j+1}) (1 + sum over nested families of products of M terms)
inline real pf_w_via_expansion(int n, const real& y, const PrecisionContext& ctx) {
    if (n < 1) throw std::invalid_argument("pf_w_via_expansion: N must be >= 1");
    auto basis = OrthoBasis::build(Cutoff::at(y), 2 * n - 1, ctx);
    WMatrixBuilder w(basis);
    auto u = w.superdiagonal(2 * n - 1);
    auto sig = w.rank_one_factor(2 * n - 1);
    real prefactor = 1;
    for (int j = 0; j < n; ++j) prefactor *= basis.h(2 * j + 1);
    return prefactor * detail::structured_sum(u, sig, sig);
}

// F_{4,N}(y): everything is evaluated at the rescaled cutoff sqrt(2) y.
// direct:    prod_j 2^{-2j-1/2} qt_j(sqrt2 y) / q_j(inf)   (Pfaffian ratios)
// expansion: prod_j [h_{2j+1}(sqrt2 y)/h_{2j+1}(inf)] * (1 + sum of M products)
inline real f4(int n, const real& y, const PrecisionContext& ctx,
               CdfMethod method = CdfMethod::direct) {
    if (n < 1) throw std::invalid_argument("f4: N must be >= 1");
    real yt = sqrt(real(2)) * y;
    auto basis = OrthoBasis::build(Cutoff::at(yt), 2 * n - 1, ctx);
    WMatrixBuilder w(basis);

    if (method == CdfMethod::expansion) {
        auto u = w.superdiagonal(2 * n - 1);
        auto sig = w.rank_one_factor(2 * n - 1);
        real prod = 1;
        for (int j = 0; j < n; ++j) prod *= basis.h(2 * j + 1) / h_inf(2 * j + 1);
        return prod * detail::structured_sum(u, sig, sig);
    }
    real prod = 1;
    for (int j = 0; j < n; ++j) {
        real qt = w.pf_leading(2 * j + 1) / w.pf_leading(2 * j - 1);
        prod *= qt / (ldexp(real(1), 2 * j) * sqrt(real(2)) * q_inf(j));
    }
    return prod;
}

// the single-Pfaffian accumulation of the same formula (two-path check)
inline real f4_via_single_pfaffian(int n, const real& y, const PrecisionContext& ctx) {
    if (n < 1) throw std::invalid_argument("f4: N must be >= 1");
    real yt = sqrt(real(2)) * y;
    auto basis = OrthoBasis::build(Cutoff::at(yt), 2 * n - 1, ctx);
    WMatrixBuilder w(basis);
    real denom = 1;
    for (int j = 0; j < n; ++j) denom *= h_inf(2 * j + 1);
    return w.pf_leading(2 * n - 1) / denom;
}

// F_{1,N}(y) = prod_{j<N/2} r_j(y)/r_j(inf); N even by construction
inline real f1(int n, const real& y, const PrecisionContext& ctx) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument(
            "f1: N must be even and >= 2 (the formula is restricted to even N)");
    auto basis = OrthoBasis::build(Cutoff::at(y), n - 1, ctx);
    VMatrixBuilder v(basis, ctx);
    real prod = 1;
    for (int j = 0; j < n / 2; ++j)
        prod *= (v.pf_leading(2 * j + 1) / v.pf_leading(2 * j - 1)) / r_inf(j);
    return prod;
}

inline real f1_via_single_pfaffian(int n, const real& y, const PrecisionContext& ctx) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument(
            "f1: N must be even and >= 2 (the formula is restricted to even N)");
    auto basis = OrthoBasis::build(Cutoff::at(y), n - 1, ctx);
    VMatrixBuilder v(basis, ctx);
    real denom = 1;
    for (int j = 0; j < n / 2; ++j) denom *= r_inf(j);
    return v.pf_leading(n - 1) / denom;
}

// Large-y asymptotic form of F_{1,N}: the V matrix collapses to the
// rank-one-plus-superdiagonal structure with
// T_{i1,i2} = -(1/2) (prod h_{2m+1} / prod h_{2m}) P_{2i1}(inf,y) p_{2i2}(y,y) e^{-y^2/2}.
// Approximation only; the exact path is always the Pfaffian of V.
inline real f1_large_y_expansion(int n, const real& y, const PrecisionContext& ctx) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("f1_large_y_expansion: N must be even and >= 2");
    auto basis = OrthoBasis::build(Cutoff::at(y), n - 1, ctx);

    std::vector<real> u, fv, gv;
    for (int i = 0; i < n - 1; ++i) u.push_back(basis.h(i));
    real half_weight = exp(-y * y / 2) / 2;
    for (int j = 0; j < n; ++j) {
        fv.push_back(-half_weight * basis.capital_P_inf(j));
        gv.push_back(j == 0 ? real(0) : basis.p_at_cutoff(j - 1));
    }
    real prod = 1;
    for (int j = 0; j < n / 2; ++j) prod *= basis.h(2 * j) / h_inf(2 * j);
    return prod * detail::structured_sum(u, fv, gv);
}

// edge scaling y(beta, N, s); the beta=4 map carries the corrected 2^{-7/6}
inline real scaled_cutoff(int beta, int n, const real& s) {
    if (n < 1) throw std::invalid_argument("scaled_cutoff: N must be >= 1");
    real root = sqrt(real(2) * n);
    real n16 = pow(real(n), real(1) / 6);
    switch (beta) {
        case 1:
        case 2:
            return root + s / (sqrt(real(2)) * n16);
        case 4:
            return root + s * pow(real(2), -real(7) / 6) / n16;
        default:
            throw std::invalid_argument("scaled_cutoff: beta must be 1, 2 or 4");
    }
}

} // namespace rmtedge
