// Arbitrary-precision real type, working-precision management and the basic
// constants (pi, gamma) that the rest of the library builds on.
#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace rmtedge {

using real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.3010299956639812)) + 2;
}

inline unsigned working_digits10() { return real::default_precision(); }

// RAII guard: raise (or lower) the default mpfr precision for a scope.
class ScopedBits {
  public:
    explicit ScopedBits(unsigned bits) : saved_(real::default_precision()) {
        real::default_precision(bits_to_digits10(bits));
    }
    ScopedBits(const ScopedBits&) = delete;
    ScopedBits& operator=(const ScopedBits&) = delete;
    ~ScopedBits() { real::default_precision(saved_); }

  private:
    unsigned saved_;
};

// Re-express a value at the ambient working precision (exact zero-padding
// when raising precision).  Results of mpfr arithmetic inherit the largest
// operand precision, so inputs must be padded for guard bits to take effect.
inline real at_working_precision(const real& x) {
    real y = x;
    y.precision(working_digits10());
    return y;
}

// Working-precision/tolerance pair threaded through all high-precision code.
// Constructing one sets the ambient mpfr precision to `bits`.
struct PrecisionContext {
    unsigned bits;
    real eps;

    static PrecisionContext make(unsigned bits) {
        check_bits(bits);
        real::default_precision(bits_to_digits10(bits));
        real eps = ldexp(real(1), -static_cast<int>(bits / 2));
        return PrecisionContext{bits, eps};
    }

    static PrecisionContext make(unsigned bits, const real& eps) {
        check_bits(bits);
        real::default_precision(bits_to_digits10(bits));
        if (!(eps > 0))
            throw std::invalid_argument("PrecisionContext: eps must be positive");
        if (eps < ldexp(real(1), -static_cast<int>(bits)))
            throw std::invalid_argument("PrecisionContext: eps below 2^-bits");
        return PrecisionContext{bits, eps};
    }

  private:
    static void check_bits(unsigned bits) {
        if (bits < 64)
            throw std::invalid_argument("PrecisionContext: bits must be >= 64");
    }
};

namespace detail {

inline std::map<unsigned, real>& pi_cache() {
    static std::map<unsigned, real> cache;
    return cache;
}
inline std::mutex& pi_mutex() {
    static std::mutex m;
    return m;
}

// Gauss-Legendre AGM iteration; quadratic convergence.
inline real compute_pi_at_current_precision() {
    long prec_bits = static_cast<long>(working_digits10() * 3.33) + 4;
    real tiny = ldexp(real(1), -static_cast<int>(prec_bits));
    real a = 1;
    real b = 1 / sqrt(real(2));
    real t = real(1) / 4;
    real p = 1;
    for (int i = 0; i < 64 && abs(a - b) > tiny; ++i) {
        real an = (a + b) / 2;
        real bn = sqrt(a * b);
        real d = a - an;
        t -= p * d * d;
        p *= 2;
        a = an;
        b = bn;
    }
    return (a + b) * (a + b) / (4 * t);
}

} // namespace detail

// pi at the ambient working precision (cached per precision).
inline real pi_value() {
    unsigned key = working_digits10();
    {
        std::lock_guard<std::mutex> lock(detail::pi_mutex());
        auto it = detail::pi_cache().find(key);
        if (it != detail::pi_cache().end()) return it->second;
    }
    real p;
    {
        // a few guard digits so the cached value is fully accurate
        ScopedBits guard(static_cast<unsigned>(key * 3.33) + 64);
        p = detail::compute_pi_at_current_precision();
        p.precision(key);
    }
    std::lock_guard<std::mutex> lock(detail::pi_mutex());
    detail::pi_cache()[key] = p;
    return p;
}

inline real sqrt_pi() { return sqrt(pi_value()); }

// Gamma(x) for x > 0.  Integer and half-integer arguments (the only ones the
// CDF formulas need) are exact products; everything else goes through the
// Spouge approximation with enough terms for the working precision.
inline real gamma_positive(const real& x) {
    if (!(x > 0)) throw std::domain_error("gamma_positive: requires x > 0");

    // integer: (n-1)!
    if (x == floor(x) && x < 10000) {
        real r = 1;
        for (long k = 2; k < static_cast<long>(x); ++k) r *= k;
        return r;
    }
    // half-integer: (2n-1)!!/2^n * sqrt(pi)
    real twox = x * 2;
    if (twox == floor(twox) && x < 10000) {
        long n = static_cast<long>(twox - 1) / 2; // x = n + 1/2
        real r = sqrt_pi();
        for (long k = 1; k <= n; ++k) r *= (real(2 * k - 1) / 2);
        return r;
    }

    unsigned digits = working_digits10();
    unsigned bits = static_cast<unsigned>(digits * 3.33) + 1;
    real out;
    {
        ScopedBits guard(bits + 64);
        long a = static_cast<long>((bits + 64) / 2.65) + 3;
        real z = at_working_precision(x) - 1;
        real acc = sqrt(2 * pi_value());
        real ck_fac = 1; // (k-1)! accumulator
        for (long k = 1; k < a; ++k) {
            if (k > 1) ck_fac *= (k - 1);
            real ak = real(a - k);
            real ck = pow(ak, real(k) - real(1) / 2) * exp(ak) / ck_fac;
            if (k % 2 == 0) ck = -ck;
            acc += ck / (z + k);
        }
        out = pow(z + a, z + real(1) / 2) * exp(-(z + a)) * acc;
        out.precision(digits);
    }
    return out;
}

// double factorial n!! (n >= -1)
inline real double_factorial(long n) {
    real r = 1;
    for (long k = n; k >= 2; k -= 2) r *= k;
    return r;
}

inline real factorial(long n) {
    real r = 1;
    for (long k = 2; k <= n; ++k) r *= k;
    return r;
}

} // namespace rmtedge
