// Antisymmetric matrices and Pfaffians: skew elimination with pivoting, the
// perfect-matching enumeration oracle, index-substituted Pfaffians, and the
// structured Pf(T + f g^T) expansion.
#pragma once

#include "precision.hpp"

#include <cstdlib>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rmtedge {

class SkewMatrix {
  public:
    SkewMatrix() = default;
    explicit SkewMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, real(0)) {
        if (n < 0) throw std::invalid_argument("SkewMatrix: negative dimension");
    }

    // entry(j, k) supplies the upper triangle (j < k); the rest follows by
    // antisymmetry and the zero diagonal.
    template <class EntryFn>
    static SkewMatrix from_upper(int n, EntryFn&& entry) {
        SkewMatrix m(n);
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                real v = entry(j, k);
                m.set(j, k, v);
            }
        return m;
    }

    // Pfaffian matrix over an arbitrary index list: element (a, b) is the
    // generator value at (idx[a], idx[b]), extended antisymmetrically.
    // Repeated indices are legal and give zero rows/columns pairs.
    template <class EntryFn>
    static SkewMatrix from_index_list(EntryFn&& entry, std::span<const int> idx) {
        SkewMatrix m(static_cast<int>(idx.size()));
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                int ia = idx[a], ib = idx[b];
                real v;
                if (ia < ib)
                    v = entry(ia, ib);
                else if (ia > ib)
                    v = -entry(ib, ia);
                else
                    v = 0;
                m.set(static_cast<int>(a), static_cast<int>(b), v);
            }
        return m;
    }

    int dim() const { return n_; }

    const real& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * n_ + j];
    }

    void set(int j, int k, const real& v) {
        if (j == k && v != 0) throw std::invalid_argument("SkewMatrix: nonzero diagonal");
        a_[static_cast<std::size_t>(j) * n_ + k] = v;
        a_[static_cast<std::size_t>(k) * n_ + j] = -v;
    }

    void swap_rows_cols(int i, int j) {
        for (int t = 0; t < n_; ++t) std::swap(at(i, t), at(j, t));
        for (int t = 0; t < n_; ++t) std::swap(at(t, i), at(t, j));
    }

    // col_j += c * col_k and row_j += c * row_k (Pfaffian-preserving pair add)
    void add_pair(int j, int k, const real& c) {
        for (int t = 0; t < n_; ++t) at(t, j) += c * at(t, k);
        for (int t = 0; t < n_; ++t) at(j, t) += c * at(k, t);
    }

    // scale row j and column j by c (scales the Pfaffian by c)
    void scale_pair(int j, const real& c) {
        for (int t = 0; t < n_; ++t) at(j, t) *= c;
        for (int t = 0; t < n_; ++t) at(t, j) *= c;
    }

    real max_abs() const {
        real m = 0;
        for (const auto& v : a_)
            if (abs(v) > m) m = abs(v);
        return m;
    }

  private:
    int n_ = 0;
    std::vector<real> a_;

    real& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    friend real pf(SkewMatrix m);
};

// Skew-symmetric Gaussian elimination (Parlett-Reid style) with partial
// pivoting and sign tracking.  Odd dimension gives 0 by convention.
inline real pf(SkewMatrix m) {
    int n = m.dim();
    if (n % 2 != 0) return real(0);
    if (n == 0) return real(1);

    real result = 1;
    for (int k = 0; k + 1 < n; k += 2) {
        int p = k + 1;
        for (int i = k + 2; i < n; ++i)
            if (abs(m(i, k)) > abs(m(p, k))) p = i;
        if (m(p, k) == 0) return real(0);
        if (p != k + 1) {
            m.swap_rows_cols(p, k + 1);
            result = -result;
        }
        result *= m(k, k + 1);
        for (int j = k + 2; j < n; ++j) {
            real c = m(k, j) / m(k, k + 1);
            if (c == 0) continue;
            // col_j -= c col_{k+1}, row_j -= c row_{k+1}; only rows >= k+1 are
            // read afterwards
            for (int i = k + 1; i < n; ++i) m.at(i, j) -= c * m(i, k + 1);
            for (int i = k + 1; i < n; ++i) m.at(j, i) -= c * m(k + 1, i);
        }
    }
    return result;
}

struct PerfectMatching {
    std::vector<std::pair<int, int>> pairs; // each (left, right) with left < right,
                                            // sorted by left endpoint
    int sign = 1;                           // (-1)^{number of crossings}
};

// all perfect matchings of {0, .., n_sites-1}; n_sites must be even
inline std::vector<PerfectMatching> perfect_matchings(int n_sites) {
    std::vector<PerfectMatching> out;
    if (n_sites % 2 != 0 || n_sites < 0) return out;
    std::vector<std::pair<int, int>> current;
    std::vector<bool> used(static_cast<std::size_t>(n_sites), false);

    auto crossings = [](const std::vector<std::pair<int, int>>& pairs) {
        int c = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            for (std::size_t j = i + 1; j < pairs.size(); ++j) {
                auto [a, b] = pairs[i];
                auto [x, y] = pairs[j];
                if ((a < x && x < b && b < y) || (x < a && a < y && y < b)) ++c;
            }
        return c;
    };

    auto rec = [&](auto&& self) -> void {
        int first = -1;
        for (int i = 0; i < n_sites; ++i)
            if (!used[static_cast<std::size_t>(i)]) {
                first = i;
                break;
            }
        if (first < 0) {
            out.push_back({current, crossings(current) % 2 == 0 ? 1 : -1});
            return;
        }
        used[static_cast<std::size_t>(first)] = true;
        for (int j = first + 1; j < n_sites; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            used[static_cast<std::size_t>(j)] = true;
            current.emplace_back(first, j);
            self(self);
            current.pop_back();
            used[static_cast<std::size_t>(j)] = false;
        }
        used[static_cast<std::size_t>(first)] = false;
    };
    rec(rec);
    return out;
}

// Pfaffian as the signed sum over perfect matchings; the brute-force oracle.
inline real pf_matchings(const SkewMatrix& m) {
    int n = m.dim();
    if (n % 2 != 0) return real(0);
    if (n == 0) return real(1);
    if (n > 12) throw std::invalid_argument("pf_matchings: dimension > 12 (oracle use only)");

    real sum = 0;
    for (const auto& match : perfect_matchings(n)) {
        real term = match.sign;
        for (auto [i, j] : match.pairs) term *= m(i, j);
        sum += term;
    }
    return sum;
}

// Pf of the dim x dim matrix over indices {0..dim-1} with `from` replaced by
// `to`; entry(j, k) generates the upper triangle for arbitrary index pairs.
template <class EntryFn>
real pf_index_subst(int dim, EntryFn&& entry, int from, int to) {
    std::vector<int> idx(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) idx[static_cast<std::size_t>(i)] = (i == from) ? to : i;
    return pf(SkewMatrix::from_index_list(entry, idx));
}

namespace detail {

// 1 + sum over the nested index families of products of
// L_{i1,i2} = (prod_{m=i1}^{i2-1} u[2m+1] / prod_{m=i1}^{i2} u[2m]) f[2 i1] g[2 i2 + 1],
// accumulated by dynamic programming over the right endpoint.
inline real structured_sum(std::span<const real> u, std::span<const real> f,
                           std::span<const real> g) {
    const int N = static_cast<int>(f.size()) / 2;
    std::vector<real> D(static_cast<std::size_t>(N), real(0));
    std::vector<real> C(static_cast<std::size_t>(N) + 1, real(0));
    C[0] = 1;
    for (int j = 0; j < N; ++j) {
        // C[j] = 1 + sum_{j' < j} D[j']
        if (j > 0) C[static_cast<std::size_t>(j)] = C[static_cast<std::size_t>(j - 1)] +
                                                    D[static_cast<std::size_t>(j - 1)];
        real ratio = 1 / u[static_cast<std::size_t>(2 * j)]; // R(j, j)
        real acc = 0;
        for (int i = j; i >= 0; --i) {
            if (i < j)
                ratio *= u[static_cast<std::size_t>(2 * i + 1)] / u[static_cast<std::size_t>(2 * i)];
            acc += f[static_cast<std::size_t>(2 * i)] * ratio * C[static_cast<std::size_t>(i)];
        }
        D[static_cast<std::size_t>(j)] = acc * g[static_cast<std::size_t>(2 * j + 1)];
    }
    C[static_cast<std::size_t>(N)] =
        C[static_cast<std::size_t>(N - 1)] + D[static_cast<std::size_t>(N - 1)];
    return C[static_cast<std::size_t>(N)];
}

} // namespace detail

// Pf(T + B) for T with superdiagonal u (u[i] sits at (i, i+1)) and
// B upper triangle f_j g_k.  Zero pair entries u[2j] force the dense route.
inline real pf_structured_expansion(std::span<const real> u, std::span<const real> f,
                                    std::span<const real> g) {
    if (f.size() != g.size() || f.size() % 2 != 0 || u.size() + 1 != f.size())
        throw std::invalid_argument("pf_structured_expansion: need |f| = |g| = 2N, |u| = 2N-1");
    const int N = static_cast<int>(f.size()) / 2;

    bool degenerate = false;
    for (int j = 0; j < N; ++j)
        if (u[static_cast<std::size_t>(2 * j)] == 0) degenerate = true;

    if (degenerate) {
        auto entry = [&](int j, int k) {
            real v = f[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k)];
            if (k == j + 1) v += u[static_cast<std::size_t>(j)];
            return v;
        };
        return pf(SkewMatrix::from_upper(2 * N, entry));
    }

    real prefactor = 1;
    for (int j = 0; j < N; ++j) prefactor *= u[static_cast<std::size_t>(2 * j)];
    return prefactor * detail::structured_sum(u, f, g);
}

} // namespace rmtedge
