// Truncated Gaussian moments m_k(y) = int_{-inf}^y x^k e^{-a x^2} dx and the
// erf-weighted moments E_k(y) = int_{-inf}^y x^k e^{-x^2/2} erf(x/sqrt(2)) dx,
// both by two-term recurrences seeded with closed forms.
#pragma once

#include "precision.hpp"
#include "special.hpp"

#include <stdexcept>
#include <vector>

namespace rmtedge {

// Upper integration limit: a finite real or +infinity.
struct Cutoff {
    bool finite = true;
    real value = real(0);

    static Cutoff at(const real& y) { return Cutoff{true, y}; }
    static Cutoff infinity() { return Cutoff{false, real(0)}; }
};

struct MomentTable {
    real a;
    Cutoff y;
    std::vector<real> m; // m[k] for k = 0..k_max

    const real& operator[](int k) const { return m.at(static_cast<std::size_t>(k)); }
    int k_max() const { return static_cast<int>(m.size()) - 1; }

    // m_0 = sqrt(pi/a) (1+erf(sqrt(a) y))/2,  m_1 = -e^{-a y^2}/(2a),
    // m_k = ((k-1) m_{k-2} - y^{k-1} e^{-a y^2}) / (2a)
    static MomentTable build(const real& a, const Cutoff& y, int k_max,
                             const PrecisionContext& ctx) {
        if (!(a > 0)) throw std::invalid_argument("MomentTable: weight exponent a must be > 0");
        if (k_max < 0) throw std::invalid_argument("MomentTable: k_max must be >= 0");

        MomentTable t;
        t.a = a;
        t.y = y;
        ScopedBits guard(ctx.bits + 64 + static_cast<unsigned>(k_max));
        real aw = at_working_precision(a);
        t.m.resize(static_cast<std::size_t>(k_max) + 1);
        unsigned out_digits = bits_to_digits10(ctx.bits);

        real boundary_weight = 0; // e^{-a y^2}, zero at infinite cutoff
        if (y.finite) {
            real yw = at_working_precision(y.value);
            boundary_weight = exp(-aw * yw * yw);
            t.m[0] = sqrt(pi_value() / aw) * (1 + detail::erf_impl(sqrt(aw) * yw)) / 2;
            if (k_max >= 1) t.m[1] = -boundary_weight / (2 * aw);
            real ypow = 1; // y^{k-1}
            for (int k = 2; k <= k_max; ++k) {
                ypow *= yw;
                t.m[static_cast<std::size_t>(k)] =
                    ((k - 1) * t.m[static_cast<std::size_t>(k - 2)] - ypow * boundary_weight) /
                    (2 * aw);
            }
        } else {
            t.m[0] = sqrt(pi_value() / aw);
            if (k_max >= 1) t.m[1] = 0;
            for (int k = 2; k <= k_max; ++k)
                t.m[static_cast<std::size_t>(k)] =
                    (k - 1) * t.m[static_cast<std::size_t>(k - 2)] / (2 * aw);
        }
        for (auto& v : t.m) v.precision(out_digits); // results carry the context precision
        return t;
    }
};

inline real truncated_moment(int k, const Cutoff& y, const real& a, const PrecisionContext& ctx) {
    if (k < 0) throw std::invalid_argument("truncated_moment: k must be >= 0");
    return MomentTable::build(a, y, k, ctx)[k];
}

// E_0 has the closed form -sqrt(pi/2) (1 - erf(y/sqrt 2)^2)/2; higher k via
// E_k = (k-1) E_{k-2} + sqrt(2/pi) m^{(a=1)}_{k-1}(y) - y^{k-1} e^{-y^2/2} erf(y/sqrt 2).
inline std::vector<real> erf_moment_table(const Cutoff& y, int k_max, const PrecisionContext& ctx) {
    if (k_max < 0) throw std::invalid_argument("erf_moment_table: k_max must be >= 0");
    ScopedBits guard(ctx.bits + 64 + static_cast<unsigned>(k_max));
    std::vector<real> E(static_cast<std::size_t>(k_max) + 1);

    PrecisionContext guarded_ctx{ctx.bits + 64 + static_cast<unsigned>(k_max), ctx.eps};
    MomentTable m1 = MomentTable::build(real(1), y, k_max > 0 ? k_max - 1 : 0, guarded_ctx);
    real sq2opi = sqrt(2 / pi_value());

    if (y.finite) {
        real yw = at_working_precision(y.value);
        real erf_half = detail::erf_impl(yw / sqrt(real(2)));
        real bw = exp(-yw * yw / 2); // e^{-y^2/2}
        E[0] = -sqrt(pi_value() / 2) * (1 - erf_half * erf_half) / 2;
        real ypow = 1; // y^{k-1}
        for (int k = 1; k <= k_max; ++k) {
            real prev = (k >= 2) ? E[static_cast<std::size_t>(k - 2)] : real(0);
            E[static_cast<std::size_t>(k)] =
                (k - 1) * prev + sq2opi * m1[k - 1] - ypow * bw * erf_half;
            ypow *= yw;
        }
    } else {
        E[0] = 0;
        for (int k = 1; k <= k_max; ++k) {
            real prev = (k >= 2) ? E[static_cast<std::size_t>(k - 2)] : real(0);
            E[static_cast<std::size_t>(k)] = (k - 1) * prev + sq2opi * m1[k - 1];
        }
    }
    for (auto& v : E) v.precision(bits_to_digits10(ctx.bits));
    return E;
}

inline real erf_moment(int k, const Cutoff& y, const PrecisionContext& ctx) {
    if (k < 0) throw std::invalid_argument("erf_moment: k must be >= 0");
    return erf_moment_table(y, k, ctx)[static_cast<std::size_t>(k)];
}

} // namespace rmtedge
