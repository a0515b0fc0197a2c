// Seeded sampling of GOE/GUE/GSE matrices, largest-eigenvalue extraction and
// empirical-CDF statistics.  Everything here runs in machine doubles: the
// statistical error dominates.
//
// Determinism: each sample owns a counter-based stream (splitmix64 keyed by
// seed and sample index, polar method for normals), so results do not depend
// on the worker count and are reproducible byte for byte.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rmtedge::mc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SampleRng {
  public:
    SampleRng(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64(s);
        s = a ^ (0x9E3779B97F4A7C15ULL * (index + 1));
        state_ = splitmix64(s) ^ index;
    }

    double uniform() { // in (0, 1)
        while (true) {
            double u = static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    double normal() { // Marsaglia polar method
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

  private:
    std::uint64_t state_ = 0;
    double cached_ = 0;
    bool have_cached_ = false;
};

struct EnsembleSpec {
    int beta = 1;    // 1 GOE, 2 GUE, 4 GSE
    int n = 1;       // eigenvalue count
    std::uint64_t seed = 1;
    int count = 1;
};

// --- dense symmetric eigensolver: Householder tridiagonalization + QL ---

namespace detail {

// reduce the symmetric matrix (row-major, n x n) to tridiagonal d/e in place
inline void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& d,
                           std::vector<double>& e) {
    d.assign(static_cast<std::size_t>(n), 0.0);
    e.assign(static_cast<std::size_t>(n), 0.0);
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

    for (int i = n - 1; i >= 1; --i) {
        int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::fabs(at(i, k));
            if (scale == 0.0) {
                e[static_cast<std::size_t>(i)] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[static_cast<std::size_t>(i)] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[static_cast<std::size_t>(j)] = g / h;
                    f += e[static_cast<std::size_t>(j)] * at(i, j);
                }
                double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    g = e[static_cast<std::size_t>(j)] - hh * f;
                    e[static_cast<std::size_t>(j)] = g;
                    for (int k = 0; k <= j; ++k)
                        at(j, k) -= f * e[static_cast<std::size_t>(k)] + g * at(i, k);
                }
            }
        } else {
            e[static_cast<std::size_t>(i)] = at(i, l);
        }
        d[static_cast<std::size_t>(i)] = h;
    }
    for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = at(i, i);
}

// implicit-shift QL on the tridiagonal (d, e); eigenvalues land in d
inline void ql_implicit(std::vector<double>& d, std::vector<double>& e) {
    int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i - 1)] = e[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(n - 1)] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[static_cast<std::size_t>(m)]) +
                            std::fabs(d[static_cast<std::size_t>(m + 1)]);
                if (std::fabs(e[static_cast<std::size_t>(m)]) <= 1e-300 ||
                    std::fabs(e[static_cast<std::size_t>(m)]) <= 2.3e-16 * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error("ql_implicit: eigensolver failed to converge");
                double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) /
                           (2.0 * e[static_cast<std::size_t>(l)]);
                double r = std::hypot(g, 1.0);
                g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
                    e[static_cast<std::size_t>(l)] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[static_cast<std::size_t>(i)];
                    double b = c * e[static_cast<std::size_t>(i)];
                    r = std::hypot(f, g);
                    e[static_cast<std::size_t>(i + 1)] = r;
                    if (r == 0.0) {
                        d[static_cast<std::size_t>(i + 1)] -= p;
                        e[static_cast<std::size_t>(m)] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[static_cast<std::size_t>(i + 1)] - p;
                    r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[static_cast<std::size_t>(i + 1)] = g + p;
                    g = c * r - b;
                    if (i == l) {
                        d[static_cast<std::size_t>(l)] -= p;
                        e[static_cast<std::size_t>(l)] = g;
                        e[static_cast<std::size_t>(m)] = 0.0;
                    }
                }
                if (r == 0.0 && m - 1 >= l) continue;
            }
        } while (m != l);
    }
}

} // namespace detail

// eigenvalues (ascending) of a dense symmetric matrix, row-major
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    std::vector<double> d, e;
    detail::tridiagonalize(a, n, d, e);
    detail::ql_implicit(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

// --- ensemble draws ---

namespace detail {

// GOE: M = (Y + Y^T)/2, Y with standard normal entries
inline std::vector<double> goe_matrix(int n, SampleRng& rng) {
    std::vector<double> y(static_cast<std::size_t>(n) * n);
    for (auto& v : y) v = rng.normal();
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m[static_cast<std::size_t>(i) * n + j] =
                0.5 * (y[static_cast<std::size_t>(i) * n + j] + y[static_cast<std::size_t>(j) * n + i]);
    return m;
}

// embed the complex Hermitian X + iZ (each m x m, row-major) into the real
// symmetric [[X, -Z], [Z, X]] of size 2m; eigenvalues appear doubled
inline std::vector<double> embed_hermitian(const std::vector<double>& x,
                                           const std::vector<double>& z, int m) {
    int n = 2 * m;
    std::vector<double> e(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double xv = x[static_cast<std::size_t>(i) * m + j];
            double zv = z[static_cast<std::size_t>(i) * m + j];
            e[static_cast<std::size_t>(i) * n + j] = xv;
            e[static_cast<std::size_t>(i) * n + (m + j)] = -zv;
            e[static_cast<std::size_t>(m + i) * n + j] = zv;
            e[static_cast<std::size_t>(m + i) * n + (m + j)] = xv;
        }
    return e;
}

// GUE: M = (Y + Y^dagger)/2 with y_{jk} ~ N(0, 1/sqrt2) + i N(0, 1/sqrt2);
// returns the 2n x 2n real embedding
inline std::vector<double> gue_embedded(int n, SampleRng& rng) {
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<double> yr(static_cast<std::size_t>(n) * n), yi(static_cast<std::size_t>(n) * n);
    for (auto& v : yr) v = s * rng.normal();
    for (auto& v : yi) v = s * rng.normal();
    std::vector<double> x(static_cast<std::size_t>(n) * n), z(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            x[static_cast<std::size_t>(i) * n + j] =
                0.5 * (yr[static_cast<std::size_t>(i) * n + j] + yr[static_cast<std::size_t>(j) * n + i]);
            z[static_cast<std::size_t>(i) * n + j] =
                0.5 * (yi[static_cast<std::size_t>(i) * n + j] - yi[static_cast<std::size_t>(j) * n + i]);
        }
    return embed_hermitian(x, z, n);
}

// GSE: 2n x 2n complex Hermitian from n^2 quaternion blocks
// [[a1 + i b1, a2 + i b2], [-a2 + i b2, a1 - i b1]], components N(0, 1/2);
// returns the 4n x 4n real embedding (eigenvalues appear four-fold)
inline std::vector<double> gse_embedded(int n, SampleRng& rng) {
    int m = 2 * n;
    std::vector<double> yr(static_cast<std::size_t>(m) * m), yi(static_cast<std::size_t>(m) * m);
    for (int bi = 0; bi < n; ++bi)
        for (int bj = 0; bj < n; ++bj) {
            double a1 = 0.5 * rng.normal();
            double b1 = 0.5 * rng.normal();
            double a2 = 0.5 * rng.normal();
            double b2 = 0.5 * rng.normal();
            int r = 2 * bi, c = 2 * bj;
            auto put = [&](int i, int j, double re, double im) {
                yr[static_cast<std::size_t>(i) * m + j] = re;
                yi[static_cast<std::size_t>(i) * m + j] = im;
            };
            put(r, c, a1, b1);
            put(r, c + 1, a2, b2);
            put(r + 1, c, -a2, b2);
            put(r + 1, c + 1, a1, -b1);
        }
    std::vector<double> x(static_cast<std::size_t>(m) * m), z(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            x[static_cast<std::size_t>(i) * m + j] =
                0.5 * (yr[static_cast<std::size_t>(i) * m + j] + yr[static_cast<std::size_t>(j) * m + i]);
            z[static_cast<std::size_t>(i) * m + j] =
                0.5 * (yi[static_cast<std::size_t>(i) * m + j] - yi[static_cast<std::size_t>(j) * m + i]);
        }
    return embed_hermitian(x, z, m);
}

} // namespace detail

// the real symmetric matrix whose spectrum carries the sample's eigenvalues
// (with the documented 2x / 4x degeneracy for beta = 2 / 4)
inline std::vector<double> embedded_sample_matrix(const EnsembleSpec& spec,
                                                  std::uint64_t sample_index, int& dim_out) {
    SampleRng rng(spec.seed, sample_index);
    switch (spec.beta) {
        case 1:
            dim_out = spec.n;
            return detail::goe_matrix(spec.n, rng);
        case 2:
            dim_out = 2 * spec.n;
            return detail::gue_embedded(spec.n, rng);
        case 4:
            dim_out = 4 * spec.n;
            return detail::gse_embedded(spec.n, rng);
        default:
            throw std::invalid_argument("ensemble: beta must be 1, 2 or 4");
    }
}

inline double largest_eigenvalue_of_sample(const EnsembleSpec& spec, std::uint64_t index) {
    int dim = 0;
    auto m = embedded_sample_matrix(spec, index, dim);
    auto eig = symmetric_eigenvalues(std::move(m), dim);
    return eig.back();
}

// all `count` largest-eigenvalue draws; worker partitioning does not change
// the result (per-sample streams), order is by sample index
inline std::vector<double> sample_largest(const EnsembleSpec& spec, int workers = 0) {
    if (spec.count < 1) throw std::invalid_argument("sample_largest: count must be >= 1");
    if (spec.n < 1) throw std::invalid_argument("sample_largest: N must be >= 1");
    if (workers <= 0) {
        unsigned hc = std::thread::hardware_concurrency();
        workers = hc > 0 ? static_cast<int>(hc) : 1;
    }
    if (workers > spec.count) workers = spec.count;

    std::vector<double> out(static_cast<std::size_t>(spec.count));
    auto run_range = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i)
            out[static_cast<std::size_t>(i)] =
                largest_eigenvalue_of_sample(spec, static_cast<std::uint64_t>(i));
    };
    if (workers == 1) {
        run_range(0, spec.count);
        return out;
    }
    std::vector<std::thread> pool;
    int chunk = (spec.count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int lo = w * chunk;
        int hi = std::min(spec.count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
    return out;
}

// --- empirical CDF and Kolmogorov-Smirnov distance ---

class EmpiricalCDF {
  public:
    explicit EmpiricalCDF(std::vector<double> samples) : x_(std::move(samples)) {
        if (x_.empty()) throw std::invalid_argument("EmpiricalCDF: empty sample");
        std::sort(x_.begin(), x_.end());
    }

    // right-continuous step function in [0, 1]
    double operator()(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return static_cast<double>(it - x_.begin()) / static_cast<double>(x_.size());
    }

    const std::vector<double>& sorted() const { return x_; }

    // sup-norm distance against a reference CDF, evaluated at the jumps
    double ks_distance(const std::function<double(double)>& F) const {
        double d = 0.0;
        const double n = static_cast<double>(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) {
            double Fx = F(x_[i]);
            d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - Fx));
            d = std::max(d, std::fabs(static_cast<double>(i) / n - Fx));
        }
        return d;
    }

  private:
    std::vector<double> x_;
};

inline double ks_distance(const EmpiricalCDF& ecdf, const std::function<double(double)>& F) {
    return ecdf.ks_distance(F);
}

} // namespace rmtedge::mc
