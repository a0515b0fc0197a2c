// Dense polynomials in one variable, coefficients ascending by degree.
#pragma once

#include "precision.hpp"

#include <vector>

namespace rmtedge {

using poly = std::vector<real>;

inline real poly_eval(const poly& p, const real& x) {
    if (p.empty()) return real(0);
    real acc = p.back();
    for (std::size_t i = p.size() - 1; i-- > 0;) acc = acc * x + p[i];
    return acc;
}

inline poly poly_derivative(const poly& p) {
    poly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
    return d;
}

inline poly poly_add(const poly& a, const poly& b) {
    poly r(std::max(a.size(), b.size()), real(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

inline poly poly_scale(const poly& a, const real& c) {
    poly r = a;
    for (auto& v : r) v *= c;
    return r;
}

inline poly poly_mul(const poly& a, const poly& b) {
    if (a.empty() || b.empty()) return {};
    poly r(a.size() + b.size() - 1, real(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// p(c*x)
inline poly poly_stretch(const poly& p, const real& c) {
    poly r = p;
    real ck = 1;
    for (std::size_t k = 1; k < r.size(); ++k) {
        ck *= c;
        r[k] *= ck;
    }
    return r;
}

inline int poly_degree(const poly& p) {
    for (std::size_t i = p.size(); i-- > 0;)
        if (p[i] != 0) return static_cast<int>(i);
    return -1;
}

} // namespace rmtedge
