// Hastings-McLeod solution of Painleve II (q'' = x q + 2 q^3, q ~ Ai at +inf)
// with the accumulated integrals I = int q, K = int q^2, J = int (x-s) q^2,
// and the limiting Tracy-Widom CDFs F1, F2, F4 built from them.
//
// The trajectory is integrated backward from x_max with an 8th-order
// Cooper-Verner Runge-Kutta step at twice the target precision.  Initial data
// at x_max carry the first integral-equation correction q = Ai + Ai^3/(4x),
// and I, K, J are seeded with their analytic tails (closed forms for the Ai^2
// integrals, integration-by-parts series for int Ai).
#pragma once

#include "precision.hpp"
#include "special.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace rmtedge {

struct SolveOptions {
    int substeps_per_unit = 2048;
    int store_stride = 8;
};

class HMSolution {
  public:
    const real& x_max() const { return x_max_; }
    const real& x_min() const { return x_min_; }
    std::size_t grid_size() const { return q_.size(); }
    real grid_x(std::size_t i) const { return x_max_ - step_ * static_cast<long>(i); }
    const std::vector<real>& q() const { return q_; }
    const std::vector<real>& qp() const { return qp_; }
    const std::vector<real>& I() const { return I_; }
    const std::vector<real>& K() const { return K_; }
    const std::vector<real>& J() const { return J_; }
    const real& store_step() const { return step_; }

    real q_at(const real& s) const { return interpolate(q_, s); }
    real qp_at(const real& s) const { return interpolate(qp_, s); }
    real I_at(const real& s) const { return interpolate(I_, s); }
    real K_at(const real& s) const { return interpolate(K_, s); }
    real J_at(const real& s) const { return interpolate(J_, s); }

  private:
    real x_max_, x_min_, step_; // grid descends from x_max by step_
    std::vector<real> q_, qp_, I_, K_, J_;

    // 6-point local Lagrange interpolation on the uniform grid
    real interpolate(const std::vector<real>& table, const real& s) const {
        if (s > x_max_ || s < x_min_)
            throw std::domain_error("HMSolution: point outside the solved grid (extrapolation refused)");
        long n = static_cast<long>(table.size());
        real pos = (x_max_ - s) / step_;
        long center = static_cast<long>(pos);
        long lo = center - 2;
        if (lo < 0) lo = 0;
        if (lo > n - 6) lo = n - 6;
        real acc = 0;
        for (long a = lo; a < lo + 6; ++a) {
            real term = table[static_cast<std::size_t>(a)];
            for (long b = lo; b < lo + 6; ++b) {
                if (b == a) continue;
                term *= (pos - real(b)) / real(a - b);
            }
            acc += term;
        }
        return acc;
    }

    friend HMSolution solve_hm(const real&, const real&, const PrecisionContext&,
                               const SolveOptions&);
};

namespace detail {

// int_x^inf Ai(t) dt by repeated integration by parts:
// S_m = -Ai'/x^{m+1} - (m+1) Ai/x^{m+2} + (m+1)(m+2) S_{m+3}, I_tail = S_0
inline real airy_tail_integral(const real& x, const real& ai, const real& aip) {
    real acc = 0;
    real coef = 1;
    real prev_term = 0;
    for (int m = 0; m < 300; m += 3) {
        real xp1 = pow(x, m + 1);
        real term = coef * (-aip / xp1 - (m + 1) * ai / (xp1 * x));
        if (m > 0 && abs(term) > prev_term) break; // asymptotic tail turned
        acc += term;
        prev_term = abs(term);
        coef *= (m + 1) * (m + 2);
        if (abs(term) < abs(acc) * ldexp(real(1), -static_cast<long>(working_digits10() * 3.4)))
            break;
    }
    return acc;
}

struct CooperVerner {
    // 11-stage order-8 tableau; all entries algebraic in sqrt(21)
    std::array<std::array<real, 11>, 11> a{};
    std::array<real, 11> b{}, c{};

    explicit CooperVerner() {
        real r = sqrt(real(21));
        auto R = [](long num, long den) { return real(num) / den; };
        c = {real(0), R(1, 2), R(1, 2), (7 + r) / 14, (7 + r) / 14, R(1, 2),
             (7 - r) / 14, (7 - r) / 14, R(1, 2), (7 + r) / 14, real(1)};
        a[1][0] = R(1, 2);
        a[2][0] = R(1, 4); a[2][1] = R(1, 4);
        a[3][0] = R(1, 7); a[3][1] = -(7 + 3 * r) / 98; a[3][2] = (21 + 5 * r) / 49;
        a[4][0] = (11 + r) / 84; a[4][2] = (18 + 4 * r) / 63; a[4][3] = (21 - r) / 252;
        a[5][0] = (5 + r) / 48; a[5][2] = (9 + r) / 36; a[5][3] = (-231 + 14 * r) / 360;
        a[5][4] = (63 - 7 * r) / 80;
        a[6][0] = (10 - r) / 42; a[6][2] = (-432 + 92 * r) / 315; a[6][3] = (633 - 145 * r) / 90;
        a[6][4] = (-504 + 115 * r) / 70; a[6][5] = (63 - 13 * r) / 35;
        a[7][0] = R(1, 14); a[7][4] = (14 - 3 * r) / 126; a[7][5] = (13 - 3 * r) / 63;
        a[7][6] = R(1, 9);
        a[8][0] = R(1, 32); a[8][4] = (91 - 21 * r) / 576; a[8][5] = R(11, 72);
        a[8][6] = -(385 + 75 * r) / 1152; a[8][7] = (63 + 13 * r) / 128;
        a[9][0] = R(1, 14); a[9][4] = R(1, 9); a[9][5] = -(733 + 147 * r) / 2205;
        a[9][6] = (515 + 111 * r) / 504; a[9][7] = -(51 + 11 * r) / 56;
        a[9][8] = (132 + 28 * r) / 245;
        a[10][4] = (-42 + 7 * r) / 18; a[10][5] = (-18 + 28 * r) / 45;
        a[10][6] = -(273 + 53 * r) / 72; a[10][7] = (301 + 53 * r) / 72;
        a[10][8] = (28 - 28 * r) / 45; a[10][9] = (49 - 7 * r) / 18;
        b[0] = R(1, 20); b[7] = R(49, 180); b[8] = R(16, 45); b[9] = R(49, 180);
        b[10] = R(1, 20);
    }
};

} // namespace detail

// state u = (q, q', I, K, J); du/dx = (q', x q + 2 q^3, -q, -q^2, -K)
inline HMSolution solve_hm(const real& x_min, const real& x_max, const PrecisionContext& ctx,
                           const SolveOptions& opts = SolveOptions{}) {
    if (!(x_min < 0 && 0 < x_max))
        throw std::invalid_argument("solve_hm: need x_min < 0 < x_max");
    unsigned work_bits = 2 * ctx.bits;
    ScopedBits guard(work_bits);
    PrecisionContext work{work_bits, ctx.eps};
    if (airy_ai(at_working_precision(x_max), ctx) >= sqrt(ctx.eps))
        throw std::invalid_argument("solve_hm: x_max too small, Ai(x_max) >= sqrt(eps)");

    const real xm = at_working_precision(x_max);
    const real xl = at_working_precision(x_min);

    // initial data with the first integral-equation correction q = Ai + Ai^3/(4x)
    real ai = airy_ai(xm, work);
    real aip = airy_ai_prime(xm, work);
    std::array<real, 5> u;
    u[0] = ai + ai * ai * ai / (4 * xm);
    u[1] = aip + (3 * ai * ai * aip) / (4 * xm) - ai * ai * ai / (4 * xm * xm);
    // analytic tails: I from the IBP series; K, J from the exact Ai^2 forms
    u[2] = detail::airy_tail_integral(xm, ai, aip);
    u[3] = aip * aip - xm * ai * ai;                                  // int_x^inf Ai^2
    real t_ai2 = (xm * aip * aip - xm * xm * ai * ai - ai * aip) / 3; // int_x^inf t Ai^2
    u[4] = t_ai2 - xm * u[3];

    auto rhs = [](const real& x, const std::array<real, 5>& s) {
        return std::array<real, 5>{s[1], x * s[0] + 2 * s[0] * s[0] * s[0], -s[0],
                                   -s[0] * s[0], -s[3]};
    };

    detail::CooperVerner cv; // tableau entries materialize at working precision

    long steps_per_unit = opts.substeps_per_unit;
    long n_sub = static_cast<long>(static_cast<double>(xm - xl) * steps_per_unit) + 1;
    long stride = opts.store_stride;
    n_sub = ((n_sub + stride - 1) / stride) * stride;
    real h = -(xm - xl) / n_sub;

    HMSolution sol;
    sol.x_max_ = xm;
    sol.x_min_ = xl;
    sol.step_ = -h * stride;
    std::size_t n_store = static_cast<std::size_t>(n_sub / stride) + 1;
    sol.q_.reserve(n_store);

    auto store = [&](const std::array<real, 5>& s) {
        sol.q_.push_back(s[0]);
        sol.qp_.push_back(s[1]);
        sol.I_.push_back(s[2]);
        sol.K_.push_back(s[3]);
        sol.J_.push_back(s[4]);
    };
    store(u);

    std::array<std::array<real, 5>, 11> k;
    real blow_up_bound = 2 * sqrt(abs(xl)) + 10;
    for (long step = 0; step < n_sub; ++step) {
        real x = xm + h * step;
        for (int i = 0; i < 11; ++i) {
            std::array<real, 5> arg = u;
            for (int j = 0; j < i; ++j) {
                if (cv.a[i][j] == 0) continue;
                for (int t = 0; t < 5; ++t) arg[t] += h * cv.a[i][j] * k[j][t];
            }
            k[i] = rhs(x + cv.c[i] * h, arg);
        }
        for (int i = 0; i < 11; ++i) {
            if (cv.b[i] == 0) continue;
            for (int t = 0; t < 5; ++t) u[t] += h * cv.b[i] * k[i][t];
        }
        if (!(abs(u[0]) < blow_up_bound))
            throw precision_error("solve_hm: trajectory left the Hastings-McLeod separatrix "
                                  "(raise bits or x_max)");
        if ((step + 1) % stride == 0) store(u);
    }
    return sol;
}

// F2 = e^{-J}, F4 = e^{-J/2} cosh(I/2), F1 = e^{-(J+I)/2}
inline real tw_cdf(int beta, const real& s, const HMSolution& sol) {
    real I = sol.I_at(s);
    real J = sol.J_at(s);
    switch (beta) {
        case 2:
            return exp(-J);
        case 4:
            return exp(-J / 2) * cosh(I / 2);
        case 1:
            return exp(-(J + I) / 2);
        default:
            throw std::invalid_argument("tw_cdf: beta must be 1, 2 or 4");
    }
}

} // namespace rmtedge
