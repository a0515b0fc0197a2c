// erf, erfc and the Airy function Ai at arbitrary precision.
//
// erf/erfc: Taylor-type series for |x| <= 4, Stieltjes continued fraction
// beyond.  Airy: Maclaurin series below a precision-dependent switch point,
// asymptotic expansion above it.  Each branch carries enough guard bits that
// the result is accurate to the context tolerance.
#pragma once

#include "precision.hpp"

#include <cstdlib>

namespace rmtedge {

namespace detail {

// erf(x) = (2/sqrt(pi)) e^{-x^2} sum_{n>=0} 2^n x^{2n+1} / (2n+1)!!
// All terms positive: no cancellation.
inline real erf_series_confluent(const real& x) {
    real x2 = x * x;
    real term = x;
    real sum = x;
    for (long n = 1; n < 100000; ++n) {
        term *= 2 * x2 / (2 * n + 1);
        sum += term;
        if (term < abs(sum) * ldexp(real(1), -static_cast<long>(working_digits10() * 3.33) - 8))
            break;
    }
    return 2 / sqrt_pi() * exp(-x2) * sum;
}

// Alternating Maclaurin series; independent route used for cross-checks.
inline real erf_series_alternating(const real& x) {
    real x2 = x * x;
    real term = x;
    real sum = x;
    for (long n = 1; n < 100000; ++n) {
        term *= -x2 / n;
        real contrib = term / (2 * n + 1);
        sum += contrib;
        if (abs(contrib) < abs(sum) * ldexp(real(1), -static_cast<long>(working_digits10() * 3.33) - 8))
            break;
    }
    return 2 / sqrt_pi() * sum;
}

// erfc(x) = e^{-x^2}/sqrt(pi) / (x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...))))
// for x > 0, evaluated by the modified Lentz algorithm.
inline real erfc_continued_fraction(const real& x) {
    real tiny = ldexp(real(1), -100000);
    real tol = ldexp(real(1), -static_cast<long>(working_digits10() * 3.33) - 4);
    real f = x, c = x, d = 0;
    if (f == 0) f = tiny;
    for (long n = 1; n < 1000000; ++n) {
        real an = real(n) / 2;
        real bn = x;
        d = bn + an * d;
        if (d == 0) d = tiny;
        c = bn + an / c;
        if (c == 0) c = tiny;
        d = 1 / d;
        real mult = c * d;
        f *= mult;
        if (abs(mult - 1) <= tol) break;
    }
    return exp(-x * x) / sqrt_pi() / f;
}

inline real erf_impl(const real& x) {
    if (x < 0) return -erf_impl(-x);
    if (x <= 4) return erf_series_confluent(x);
    return 1 - erfc_continued_fraction(x);
}

inline real erfc_impl(const real& x) {
    if (x < 0) return 2 - erfc_impl(-x);
    if (x <= 4) return 1 - erf_series_confluent(x);
    return erfc_continued_fraction(x);
}

} // namespace detail

inline real erf(const real& x, const PrecisionContext& ctx) {
    ScopedBits guard(ctx.bits + 64);
    real r = detail::erf_impl(at_working_precision(x));
    r.precision(bits_to_digits10(ctx.bits));
    return r;
}

inline real erfc(const real& x, const PrecisionContext& ctx) {
    ScopedBits guard(ctx.bits + 96);
    real r = detail::erfc_impl(at_working_precision(x));
    r.precision(bits_to_digits10(ctx.bits));
    return r;
}

namespace detail {

// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3)
inline void airy_origin_values(real& ai0, real& aip0) {
    real third = real(1) / 3;
    ai0 = pow(real(3), -2 * third) / gamma_positive(2 * third);
    aip0 = -pow(real(3), -third) / gamma_positive(third);
}

// Maclaurin series: Ai(x) = Ai(0) f(x) + Ai'(0) g(x) with
//   f = sum x^{3k} * prod_{m<k} 1/((3m+2)(3m+3)),
//   g = sum x^{3k+1} * prod_{m<k} 1/((3m+3)(3m+4)).
// Converges everywhere; cancellation for large |x| is absorbed by guard bits.
inline void airy_maclaurin(const real& x, real& ai, real& aip) {
    real ai0, aip0;
    airy_origin_values(ai0, aip0);
    real x3 = x * x * x;
    real tol = ldexp(real(1), -static_cast<long>(working_digits10() * 3.33) - 8);

    real f = 1, fp = 0;       // f and f'
    real g = x, gp = 1;       // g and g'
    real tf = 1, tg = x;
    for (long k = 0; k < 200000; ++k) {
        tf *= x3 / ((3 * k + 2) * (3 * k + 3));
        tg *= x3 / ((3 * k + 3) * (3 * k + 4));
        f += tf;
        g += tg;
        // derivative terms: d/dx x^{3k+3} = (3k+3) x^{3k+2}
        if (x != 0) {
            fp += tf * (3 * k + 3) / x;
            gp += tg * (3 * k + 4) / x;
        }
        if (abs(tf) < tol && abs(tg) < tol && k > 2) break;
    }
    ai = ai0 * f + aip0 * g;
    aip = ai0 * fp + aip0 * gp;
}

// Asymptotic expansion for large positive x:
//   Ai(x)  =  e^{-z}/(2 sqrt(pi) x^{1/4}) * sum (-1)^k u_k z^{-k}
//   Ai'(x) = -x^{1/4} e^{-z}/(2 sqrt(pi)) * sum (-1)^k v_k z^{-k}
// with z = (2/3)x^{3/2}, u_0 = v_0 = 1,
// u_{k+1} = u_k (6k+1)(6k+5)/(72(k+1)), v_k = -u_k (6k+1)/(6k-1).
inline void airy_asymptotic(const real& x, real& ai, real& aip) {
    real z = 2 * pow(x, real(3) / 2) / 3;
    real tol = ldexp(real(1), -static_cast<long>(working_digits10() * 3.33) - 4);
    real u = 1;
    real su = 1, sv = 1;
    real zk = 1;
    real prev = 1;
    for (long k = 0; k < 100000; ++k) {
        u *= real((6 * k + 1) * (6 * k + 5)) / (72 * (k + 1));
        zk /= -z;
        real tu = u * zk;
        real tv = -tu * real(6 * (k + 1) + 1) / real(6 * (k + 1) - 1);
        if (abs(tu) > prev) break; // divergent tail reached
        prev = abs(tu);
        su += tu;
        sv += tv;
        if (abs(tu) < tol) break;
    }
    real pref = exp(-z) / (2 * sqrt_pi());
    ai = pref * su / pow(x, real(1) / 4);
    aip = -pref * sv * pow(x, real(1) / 4);
}

inline double airy_switch_point(unsigned bits) {
    // smallest x where the asymptotic tail can reach 2^-(bits+16):
    // min term ~ e^{-2z}, z = (2/3) x^{3/2}
    double z = (bits + 16) * 0.34657359027997264; // ln2/2
    return std::pow(1.5 * z, 2.0 / 3.0);
}

inline void airy_impl(const real& x, unsigned target_bits, real& ai, real& aip) {
    double xd = static_cast<double>(x);
    if (xd > airy_switch_point(target_bits)) {
        ScopedBits guard(target_bits + 64);
        airy_asymptotic(at_working_precision(x), ai, aip);
    } else {
        double z32 = std::pow(std::abs(xd), 1.5);
        unsigned guard_bits = target_bits + 64 + static_cast<unsigned>(2.0 * z32) + 16;
        ScopedBits guard(guard_bits);
        airy_maclaurin(at_working_precision(x), ai, aip);
    }
    ai.precision(bits_to_digits10(target_bits));
    aip.precision(bits_to_digits10(target_bits));
}

} // namespace detail

inline real airy_ai(const real& x, const PrecisionContext& ctx) {
    real ai, aip;
    detail::airy_impl(x, ctx.bits, ai, aip);
    return ai;
}

inline real airy_ai_prime(const real& x, const PrecisionContext& ctx) {
    real ai, aip;
    detail::airy_impl(x, ctx.bits, ai, aip);
    return aip;
}

} // namespace rmtedge
