#include <catch2/catch_amalgamated.hpp>

#include <rmtedge/cdf.hpp>

#include "oracles.hpp"

#include <functional>
#include <random>

using namespace rmtedge;

static PrecisionContext ctx256() { return PrecisionContext::make(256); }

TEST_CASE("f2: single eigenvalue closed form") {
    auto ctx = ctx256();
    REQUIRE(abs(f2(1, real(0), ctx) - real(1) / 2) < 1000 * ctx.eps);
    for (double yd : {-1.0, 0.5, 2.0}) {
        real y(yd);
        REQUIRE(abs(f2(1, y, ctx) - (1 + erf(y, ctx)) / 2) < 1000 * ctx.eps);
    }
}

TEST_CASE("f4: single eigenvalue closed form and normalization") {
    auto ctx = ctx256();
    REQUIRE(abs(f4(1, real(0), ctx) - real(1) / 2) < 1000 * ctx.eps);
    for (double yd : {-0.7, 0.4, 1.1}) {
        real y(yd);
        real expected = (1 + erf(sqrt(real(2)) * y, ctx)) / 2;
        REQUIRE(abs(f4(1, y, ctx) - expected) < 1000 * ctx.eps);
    }
    // N=4 at y far beyond the edge
    real ylarge = sqrt(real(8)) + 10;
    REQUIRE(abs(f4(4, ylarge, ctx) - 1) < real(1e-10));
}

TEST_CASE("f4: the three accumulation paths agree") {
    auto ctx = ctx256();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 3.0);
    for (int n : {1, 2, 3, 4}) {
        for (int trial = 0; trial < 3; ++trial) {
            real y(U(rng));
            real a = f4(n, y, ctx, CdfMethod::direct);
            real b = f4(n, y, ctx, CdfMethod::expansion);
            real c = f4_via_single_pfaffian(n, y, ctx);
            REQUIRE(abs(a - b) < real(1e-50) * (1 + abs(a)));
            REQUIRE(abs(a - c) < real(1e-50) * (1 + abs(a)));
        }
    }
}

TEST_CASE("f1: parity restriction and normalization") {
    auto ctx = ctx256();
    REQUIRE_THROWS_AS(f1(7, real(0), ctx), std::invalid_argument);
    REQUIRE_THROWS_AS(f1(0, real(0), ctx), std::invalid_argument);
    try {
        f1(3, real(0), ctx);
        REQUIRE(false);
    } catch (const std::invalid_argument& e) {
        REQUIRE(std::string(e.what()).find("even") != std::string::npos);
    }
    real ylarge = sqrt(real(4)) + 10;
    REQUIRE(abs(f1(2, ylarge, ctx) - 1) < real(1e-10));
    // the r-ratio product and the single-Pfaffian accumulation agree
    for (double yd : {-0.5, 0.8}) {
        real y(yd);
        REQUIRE(abs(f1(4, y, ctx) - f1_via_single_pfaffian(4, y, ctx)) < real(1e-50));
    }
    // closed form for N=2: r_0(y)/sqrt(pi)
    real y(0.33);
    real r0 = sqrt_pi() / 2 *
              (erfc(-y, ctx) - exp(-y * y / 2) / sqrt(real(2)) * erfc(-y / sqrt(real(2)), ctx));
    REQUIRE(abs(f1(2, y, ctx) - r0 / sqrt_pi()) < 1000 * ctx.eps);
}

TEST_CASE("oracle equivalence at desk scale (quadrature of the JPDF)") {
    auto ctx = PrecisionContext::make(128);
    real tol(1e-12);
    // beta = 2, N = 2
    {
        real y(0.6);
        real oracle = oracles::cdf_bruteforce(2, 2, y, tol);
        REQUIRE(abs(f2(2, y, ctx) - oracle) < real(1e-9));
    }
    // beta = 1, N = 2
    {
        real y(0);
        real oracle = oracles::cdf_bruteforce(1, 2, y, tol);
        REQUIRE(abs(f1(2, y, ctx) - oracle) < real(1e-9));
    }
    // beta = 4, N = 2
    {
        real y(0.9);
        real oracle = oracles::cdf_bruteforce(4, 2, y, tol);
        REQUIRE(abs(f4(2, y, ctx) - oracle) < real(1e-9));
    }
}

TEST_CASE("expansion identity for Pf W") {
    auto ctx = ctx256();

    // N = 1: h_1 + sigma_0 sigma_1 = w_{0,1}
    real y(0.8);
    auto basis = OrthoBasis::build(Cutoff::at(y), 1, ctx);
    WMatrixBuilder w(basis);
    REQUIRE(abs(pf_w_via_expansion(1, y, ctx) - w.entry(0, 1)) < 1000 * ctx.eps);

    // N = 2 at y = 0.5 equals the elimination Pfaffian
    {
        auto b2 = OrthoBasis::build(Cutoff::at(real(0.5)), 3, ctx);
        WMatrixBuilder w2(b2);
        real direct = pf(w2.matrix(3));
        REQUIRE(abs(pf_w_via_expansion(2, real(0.5), ctx) - direct) <
                real(1e-25) * abs(direct));
    }

    // random y, N <= 6, relative difference < 1e-25
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> U(-1.0, 4.0);
    for (int n : {3, 5, 6}) {
        real yy(U(rng));
        auto bb = OrthoBasis::build(Cutoff::at(yy), 2 * n - 1, ctx);
        WMatrixBuilder ww(bb);
        real direct = pf(ww.matrix(2 * n - 1));
        real expanded = pf_w_via_expansion(n, yy, ctx);
        REQUIRE(abs(expanded - direct) < real(1e-25) * abs(direct));
    }

    // large cutoff: all M terms die, leaving prod h_{2j+1}
    {
        real ybig(12);
        auto bb = OrthoBasis::build(Cutoff::at(ybig), 3, ctx);
        real expanded = pf_w_via_expansion(2, ybig, ctx);
        REQUIRE(abs(expanded - bb.h(1) * bb.h(3)) < real(1e-55) * bb.h(1) * bb.h(3));
    }
}

TEST_CASE("nested index family: DP equals explicit enumeration") {
    std::mt19937 rng(15);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int N : {1, 2, 3, 4}) {
        std::vector<real> u, f, g;
        for (int i = 0; i < 2 * N - 1; ++i) u.push_back(real(U(rng)) + 2);
        for (int i = 0; i < 2 * N; ++i) {
            f.push_back(real(U(rng)));
            g.push_back(real(U(rng)));
        }
        // L table
        std::vector<std::vector<real>> L(static_cast<std::size_t>(N),
                                         std::vector<real>(static_cast<std::size_t>(N), real(0)));
        for (int i = 0; i < N; ++i) {
            real ratio = 1;
            for (int j = i; j < N; ++j) {
                if (j == i)
                    ratio = 1 / u[static_cast<std::size_t>(2 * j)];
                else
                    ratio *= u[static_cast<std::size_t>(2 * j - 1)] / u[static_cast<std::size_t>(2 * j)];
                L[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    ratio * f[static_cast<std::size_t>(2 * i)] * g[static_cast<std::size_t>(2 * j + 1)];
            }
        }
        std::function<real(int)> rec = [&](int start) -> real {
            real acc = 0;
            for (int a = start; a < N; ++a)
                for (int b = a; b < N; ++b)
                    acc += L[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * (1 + rec(b + 1));
            return acc;
        };
        real enumerated = 1 + rec(0);
        real dp = detail::structured_sum(u, f, g);
        REQUIRE(abs(dp - enumerated) < real(1e-60) * (1 + abs(enumerated)));
    }
}

TEST_CASE("f1 large-y expansion: signs, limit, and convergence toward exact") {
    auto ctx = ctx256();
    const int n = 4;

    // T_{i,i} carries the leading minus sign for positive Psi and psi
    real y0 = sqrt(real(2) * n) + 1;
    auto basis = OrthoBasis::build(Cutoff::at(y0), n - 1, ctx);
    for (int i = 0; i < n / 2; ++i) {
        real T_ii = -basis.capital_P_inf(2 * i) * basis.p_at_cutoff(2 * i) *
                    exp(-y0 * y0 / 2) / (2 * basis.h(2 * i));
        if (basis.capital_P_inf(2 * i) > 0 && basis.p_at_cutoff(2 * i) > 0)
            REQUIRE(T_ii < 0);
    }

    // approximation approaches the exact CDF from somewhere: error decreasing in y
    real base = sqrt(real(2) * n) + 3 / (sqrt(real(2)) * pow(real(n), real(1) / 6));
    real prev_err = -1;
    for (int k = 0; k < 4; ++k) {
        real y = base + real(k) / 2;
        real err = abs(f1_large_y_expansion(n, y, ctx) - f1(n, y, ctx));
        if (k > 0) REQUIRE(err <= prev_err);
        prev_err = err;
    }
    // far tail: approximation also tends to 1
    REQUIRE(abs(f1_large_y_expansion(n, base + 8, ctx) - 1) < real(1e-10));
}

TEST_CASE("scaled cutoff arithmetic") {
    auto ctx = ctx256();
    REQUIRE(abs(scaled_cutoff(4, 1, real(0)) - sqrt(real(2))) < ctx.eps);
    real expected18 = 4 + 1 / (sqrt(real(2)) * pow(real(8), real(1) / 6));
    REQUIRE(abs(scaled_cutoff(1, 8, real(1)) - expected18) < 1000 * ctx.eps);
    real expected264 = sqrt(real(128)) - 1 / (sqrt(real(2)) * pow(real(64), real(1) / 6));
    REQUIRE(abs(scaled_cutoff(2, 64, real(-1)) - expected264) < 1000 * ctx.eps);
    REQUIRE_THROWS_AS(scaled_cutoff(3, 4, real(0)), std::invalid_argument);
}

TEST_CASE("monotonicity and range of the CDFs") {
    auto ctx = ctx256();
    real prev1(-1), prev2(-1), prev4(-1);
    for (int i = -4; i <= 10; ++i) {
        real y = real(i) / 2;
        real v2 = f2(3, y, ctx);
        real v4 = f4(2, y, ctx);
        real v1 = f1(4, y, ctx);
        for (const real& v : {v1, v2, v4}) {
            REQUIRE(v > -ctx.eps);
            REQUIRE(v < 1 + ctx.eps);
        }
        REQUIRE(v2 >= prev2);
        REQUIRE(v4 >= prev4);
        REQUIRE(v1 >= prev1);
        prev2 = v2;
        prev4 = v4;
        prev1 = v1;
    }
}
