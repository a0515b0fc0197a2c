// Tanh-sinh quadrature over finite intervals, used as the verification
// oracle throughout (skew inner products, moment cross-checks, brute-force
// CDF integrals).
#pragma once

#include "precision.hpp"

#include <utility>
#include <vector>

namespace rmtedge {

// integrate f over [a, b] to absolute tolerance tol (relative to the
// accumulated magnitude).  Levels double the node count; the abscissae
// x = mid + halfwidth * tanh((pi/2) sinh t) cluster at the endpoints.
template <class F>
real tanh_sinh(F&& f, const real& a, const real& b, const real& tol, int max_level = 12) {
    const real half_pi = pi_value() / 2;
    const real mid = (a + b) / 2;
    const real hw = (b - a) / 2;
    if (hw == 0) return real(0);

    // |t| beyond which the transformed weight is negligible at working precision
    double prec_bits = working_digits10() * 3.33;
    double t_max_d = std::log(2.0 * (prec_bits * 0.6931471805599453 + 16) / 3.141592653589793) + 1.0;
    const real t_max = real(t_max_d) + 1;

    auto node_contrib = [&](const real& t, real& x_off, real& w) {
        real u = half_pi * sinh(t);
        real ch = cosh(u);
        x_off = hw * tanh(u);
        w = half_pi * cosh(t) / (ch * ch) * hw;
    };

    real h = 1;
    real sum = 0;
    {
        real x_off, w;
        node_contrib(real(0), x_off, w);
        sum = w * f(mid + x_off);
        for (real t = h; t <= t_max; t += h) {
            node_contrib(t, x_off, w);
            if (mid + x_off < b) sum += w * f(mid + x_off);
            if (mid - x_off > a) sum += w * f(mid - x_off);
        }
        sum *= h;
    }

    real prev = sum;
    for (int level = 1; level <= max_level; ++level) {
        h /= 2;
        real add = 0;
        real x_off, w;
        for (real t = h; t <= t_max; t += 2 * h) {
            node_contrib(t, x_off, w);
            if (mid + x_off < b) add += w * f(mid + x_off);
            if (mid - x_off > a) add += w * f(mid - x_off);
        }
        sum = sum / 2 + add * h;
        if (level >= 3 && abs(sum - prev) <= tol * (1 + abs(sum))) return sum;
        prev = sum;
    }
    return sum;
}

// Cutoff for integrals against e^{-decay * x^2}: lower limit -L such that the
// dropped tail is below tol against a polynomial integrand.
inline real gaussian_tail_cut(double decay, const real& tol, double poly_scale_log = 80) {
    double logtol = static_cast<double>(log(tol));
    double l2 = (-logtol + poly_scale_log) / decay;
    return real(std::sqrt(l2 > 4 ? l2 : 4.0) + 2);
}

} // namespace rmtedge
