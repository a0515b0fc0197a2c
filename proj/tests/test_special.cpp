#include <catch2/catch_amalgamated.hpp>

#include <rmtedge/precision.hpp>
#include <rmtedge/quadrature.hpp>
#include <rmtedge/special.hpp>

using namespace rmtedge;

static PrecisionContext ctx256() { return PrecisionContext::make(256); }

TEST_CASE("pi and quadrature agree on int_0^1 4/(1+x^2)") {
    auto ctx = ctx256();
    real q = tanh_sinh([](const real& x) { return 4 / (1 + x * x); }, real(0), real(1),
                       ldexp(real(1), -200), 14);
    REQUIRE(abs(q - pi_value()) < ldexp(real(1), -180));
}

TEST_CASE("gamma: integer, half-integer, and Spouge vs integral oracle") {
    auto ctx = ctx256();
    REQUIRE(gamma_positive(real(5)) == 24);
    REQUIRE(abs(gamma_positive(real(0.5)) - sqrt_pi()) < ctx.eps);
    REQUIRE(abs(gamma_positive(real(3.5)) - real(15) / 8 * sqrt_pi()) < ctx.eps);

    // Gamma(2/3) against tanh-sinh of int_0^inf t^{-1/3} e^{-t} dt
    real third2 = real(2) / 3;
    real tol = ldexp(real(1), -140);
    auto integrand = [&](const real& t) { return pow(t, third2 - 1) * exp(-t); };
    real oracle = tanh_sinh(integrand, real(0), real(1), tol, 14) +
                  tanh_sinh(integrand, real(1), real(140), tol, 14);
    REQUIRE(abs(gamma_positive(third2) - oracle) < ldexp(real(1), -120));
}

TEST_CASE("erf basics") {
    auto ctx = ctx256();
    REQUIRE(erf(real(0), ctx) == 0);
    REQUIRE(erfc(real(0), ctx) == 1);
    REQUIRE(erf(real(-2), ctx) == -erf(real(2), ctx));
}

TEST_CASE("erf(1): two independent series agree to eps") {
    auto ctx = ctx256();
    ScopedBits guard(ctx.bits + 64);
    real a = detail::erf_series_confluent(real(1));
    real b = detail::erf_series_alternating(real(1));
    REQUIRE(abs(a - b) < ctx.eps);
    REQUIRE(abs(erf(real(1), ctx) - a) < ctx.eps);
}

TEST_CASE("erf/erfc branch overlap near the switch point") {
    auto ctx = ctx256();
    ScopedBits guard(ctx.bits + 96);
    for (double xd : {3.5, 4.0, 4.5}) {
        real x(xd);
        real via_series = 1 - detail::erf_series_confluent(x);
        real via_cf = detail::erfc_continued_fraction(x);
        REQUIRE(abs(via_series - via_cf) < ctx.eps * abs(via_cf) * 1e6);
        REQUIRE(abs(via_series - via_cf) < ctx.eps);
    }
}

TEST_CASE("erf + erfc = 1 and monotonicity on a grid") {
    auto ctx = ctx256();
    real prev = -2;
    for (int i = -60; i <= 60; ++i) {
        real x = real(i) / 7;
        real e = erf(x, ctx);
        real c = erfc(x, ctx);
        REQUIRE(abs(e + c - 1) < ctx.eps);
        REQUIRE(c > 0);
        REQUIRE(c < 2);
        REQUIRE(e > prev);
        prev = e;
    }
}

TEST_CASE("erf large-argument values against quadrature") {
    auto ctx = ctx256();
    // erfc(5) = (2/sqrt(pi)) int_5^L e^{-t^2} dt + tail(<1e-260 at L=25)
    real tol = ldexp(real(1), -160);
    real q = tanh_sinh([](const real& t) { return exp(-t * t); }, real(5), real(25), tol, 14);
    REQUIRE(abs(erfc(real(5), ctx) - 2 / sqrt_pi() * q) < ldexp(real(1), -150));
}

TEST_CASE("airy: origin, ODE residual, asymptotic decay") {
    auto ctx = ctx256();

    // Ai(0) = 3^{-2/3}/Gamma(2/3) with Gamma checked independently above
    real ai0 = airy_ai(real(0), ctx);
    real expected0 = pow(real(3), real(-2) / 3) / gamma_positive(real(2) / 3);
    REQUIRE(abs(ai0 - expected0) < ctx.eps);

    // defining ODE at x = 1 by central differences, h = eps^{1/4}
    real h = sqrt(sqrt(ctx.eps));
    real x = 1;
    real fd = (airy_ai(x + h, ctx) - 2 * airy_ai(x, ctx) + airy_ai(x - h, ctx)) / (h * h);
    REQUIRE(abs(fd - x * airy_ai(x, ctx)) < 10 * sqrt(ctx.eps));

    // Ai(8): positive, < 1e-6, and within the leading asymptotic's own error
    real ai8 = airy_ai(real(8), ctx);
    REQUIRE(ai8 > 0);
    REQUIRE(ai8 < real(1e-6));
    real z = 2 * pow(real(8), real(3) / 2) / 3;
    real leading = exp(-z) / (2 * sqrt_pi() * pow(real(8), real(0.25)));
    REQUIRE(abs(ai8 / leading - 1) < real(0.006)); // first omitted term ~ 5/(72 z)
}

TEST_CASE("airy ODE residual across a grid") {
    auto ctx = ctx256();
    real h = sqrt(sqrt(ctx.eps));
    for (int i = -9; i <= 9; i += 3) {
        real x = real(i) / 2 + real(1) / 7;
        real fd = (airy_ai(x + h, ctx) - 2 * airy_ai(x, ctx) + airy_ai(x - h, ctx)) / (h * h);
        REQUIRE(abs(fd - x * airy_ai(x, ctx)) < 10 * sqrt(ctx.eps));
    }
}

TEST_CASE("airy derivative consistency with finite differences") {
    auto ctx = ctx256();
    real h = ldexp(real(1), -60);
    for (double xd : {-3.0, 0.5, 2.0, 9.0}) {
        real x(xd);
        real fd = (airy_ai(x + h, ctx) - airy_ai(x - h, ctx)) / (2 * h);
        REQUIRE(abs(fd - airy_ai_prime(x, ctx)) < ldexp(real(1), -100));
    }
}

TEST_CASE("airy branch agreement across the switch point") {
    auto ctx = PrecisionContext::make(128); // switch ~ 17 at 128 bits
    double sw = detail::airy_switch_point(ctx.bits);
    real x = real(sw) + 1;
    real ai_a, aip_a, ai_m, aip_m;
    {
        ScopedBits guard(ctx.bits + 64);
        detail::airy_asymptotic(at_working_precision(x), ai_a, aip_a);
    }
    {
        double z32 = std::pow(static_cast<double>(x), 1.5);
        ScopedBits guard(ctx.bits + 80 + static_cast<unsigned>(2.0 * z32));
        detail::airy_maclaurin(at_working_precision(x), ai_m, aip_m);
    }
    REQUIRE(abs(ai_a - ai_m) < ctx.eps * abs(ai_m) * 1e4);
    REQUIRE(abs(aip_a - aip_m) < ctx.eps * abs(aip_m) * 1e4);
}
