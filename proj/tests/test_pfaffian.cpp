#include <catch2/catch_amalgamated.hpp>

#include <rmtedge/pfaffian.hpp>

#include "oracles.hpp"

#include <random>

using namespace rmtedge;

static PrecisionContext ctx256() { return PrecisionContext::make(256); }

TEST_CASE("pfaffian trivial cases") {
    auto ctx = ctx256();
    auto m2 = SkewMatrix::from_upper(2, [](int, int) { return real(7) / 3; });
    REQUIRE(pf_matchings(m2) == real(7) / 3);
    REQUIRE(pf(m2) == real(7) / 3);

    // 4x4 generic: a01 a23 - a02 a13 + a03 a12
    std::mt19937 rng(7);
    auto m4 = oracles::random_skew(4, rng);
    real expected = m4(0, 1) * m4(2, 3) - m4(0, 2) * m4(1, 3) + m4(0, 3) * m4(1, 2);
    REQUIRE(abs(pf_matchings(m4) - expected) < ctx.eps);
    REQUIRE(abs(pf(m4) - expected) < ctx.eps);

    // odd dimension -> 0; oversized oracle rejected
    auto m3 = oracles::random_skew(3, rng);
    REQUIRE(pf(m3) == 0);
    REQUIRE(pf_matchings(m3) == 0);
    auto m14 = oracles::random_skew(14, rng);
    REQUIRE_THROWS_AS(pf_matchings(m14), std::invalid_argument);
}

TEST_CASE("Pf of the symplectic unit Z_N is 1") {
    for (int N : {1, 2, 4}) {
        auto z = SkewMatrix::from_upper(2 * N, [](int j, int k) {
            return (k == j + 1 && j % 2 == 0) ? real(1) : real(0);
        });
        REQUIRE(pf(z) == 1);
        REQUIRE(pf_matchings(z) == 1);
    }
}

TEST_CASE("perfect matching enumeration: counts and signs") {
    auto pm6 = perfect_matchings(6);
    REQUIRE(pm6.size() == 15); // (2N-1)!!
    for (const auto& m : pm6) {
        REQUIRE(m.pairs.size() == 3);
        for (auto [a, b] : m.pairs) REQUIRE(a < b);
        for (std::size_t i = 1; i < m.pairs.size(); ++i)
            REQUIRE(m.pairs[i - 1].first < m.pairs[i].first);
    }
    // {(0,4),(1,2),(3,5)} has exactly one crossing
    for (const auto& m : pm6) {
        if (m.pairs == std::vector<std::pair<int, int>>{{0, 4}, {1, 2}, {3, 5}})
            REQUIRE(m.sign == -1);
        if (m.pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {4, 5}})
            REQUIRE(m.sign == 1);
    }
}

TEST_CASE("elimination pfaffian equals matching oracle on random matrices") {
    auto ctx = ctx256();
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto m = oracles::random_skew(6, rng);
        real a = pf(m);
        real b = pf_matchings(m);
        REQUIRE(abs(a - b) <= real(1e-30) * (1 + abs(b)));
    }
    for (int trial = 0; trial < 50; ++trial) {
        auto m = oracles::random_skew(8, rng);
        REQUIRE(abs(pf(m) - pf_matchings(m)) <= real(1e-30) * (1 + abs(pf_matchings(m))));
    }
}

TEST_CASE("Pf^2 = det and Pf(B M B^T) = det(B) Pf(M)") {
    auto ctx = ctx256();
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = oracles::random_skew(8, rng);
        real p = pf(m);
        real d = oracles::det_dense(oracles::to_dense(m));
        REQUIRE(abs(p * p - d) < real(1e-60) * (1 + abs(d)));
    }
    for (int trial = 0; trial < 10; ++trial) {
        int n = 6;
        auto m = oracles::random_skew(n, rng);
        std::vector<std::vector<real>> b(6, std::vector<real>(6));
        for (auto& row : b)
            for (auto& v : row) v = real(U(rng));
        // congruence B M B^T
        auto bm = SkewMatrix::from_upper(n, [&](int i, int j) {
            real acc = 0;
            for (int s = 0; s < n; ++s)
                for (int t = 0; t < n; ++t) acc += b[i][s] * m(s, t) * b[j][t];
            return acc;
        });
        real lhs = pf(bm);
        real rhs = oracles::det_dense(b) * pf(m);
        REQUIRE(abs(lhs - rhs) < real(1e-60) * (1 + abs(rhs)));
    }
}

TEST_CASE("row/column pair operations") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = oracles::random_skew(8, rng);
        real base = pf(m);

        auto scaled = m;
        scaled.scale_pair(3, real(5) / 7);
        REQUIRE(abs(pf(scaled) - real(5) / 7 * base) < real(1e-60));

        auto added = m;
        added.add_pair(2, 6, real(-3) / 11);
        REQUIRE(abs(pf(added) - base) < real(1e-60));

        auto swapped = m;
        swapped.swap_rows_cols(1, 4);
        REQUIRE(abs(pf(swapped) + base) < real(1e-60));
    }
}

TEST_CASE("Knuth overlapping-Pfaffian identity") {
    // f[a xz] f[a wy] - f[a wz] f[a xy] = -f[a] f[a wxyz] + f[a wx] f[a yz]
    std::mt19937 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        auto base = oracles::random_skew(10, rng);
        auto entry = [&](int i, int j) { return base(i, j); };
        std::vector<int> alpha = {0, 1, 2, 3};
        int w = 4, x = 5, y = 6, z = 7;
        if (trial % 2 == 1) { alpha = {8, 2, 5, 9}; w = 0; x = 3; y = 6; z = 7; }

        auto pf_with = [&](std::initializer_list<int> tail) {
            std::vector<int> idx = alpha;
            idx.insert(idx.end(), tail.begin(), tail.end());
            return pf(SkewMatrix::from_index_list(entry, idx));
        };
        real lhs = pf_with({x, z}) * pf_with({w, y}) - pf_with({w, z}) * pf_with({x, y});
        real rhs = -pf_with({}) * pf_with({w, x, y, z}) + pf_with({w, x}) * pf_with({y, z});
        REQUIRE(abs(lhs - rhs) < real(1e-60) * (1 + abs(rhs)));
    }
}

TEST_CASE("index substitution") {
    std::mt19937 rng(53);
    auto base = oracles::random_skew(10, rng);
    auto entry = [&](int i, int j) { return base(i, j); };

    // identity substitution is a no-op
    auto sub = pf_index_subst(6, entry, 3, 3);
    std::vector<int> plain = {0, 1, 2, 3, 4, 5};
    REQUIRE(sub == pf(SkewMatrix::from_index_list(entry, plain)));

    // duplicate index makes two equal row/column pairs: Pfaffian vanishes
    REQUIRE(pf_index_subst(6, entry, 4, 5) == 0);

    // against an explicit rebuild
    std::vector<int> idx = {0, 1, 2, 7, 4, 5};
    REQUIRE(pf_index_subst(6, entry, 3, 7) == pf(SkewMatrix::from_index_list(entry, idx)));
}

TEST_CASE("structured expansion: closed small case and dense oracle") {
    auto ctx = ctx256();
    // N=1: Pf = t1 + f0 g1
    std::vector<real> u = {real(2)};
    std::vector<real> f = {real(3), real(5)};
    std::vector<real> g = {real(7), real(11)};
    REQUIRE(pf_structured_expansion(u, f, g) == real(2) + real(3) * real(11));

    std::mt19937 rng(61);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        int N = 1 + static_cast<int>(rng() % 6); // dimensions up to 12
        std::vector<real> uu, ff, gg;
        for (int i = 0; i < 2 * N - 1; ++i) uu.push_back(real(U(rng)) + (i % 2 == 0 ? 2 : 0));
        for (int i = 0; i < 2 * N; ++i) {
            ff.push_back(real(U(rng)));
            gg.push_back(real(U(rng)));
        }
        auto dense = SkewMatrix::from_upper(2 * N, [&](int j, int k) {
            real v = ff[static_cast<std::size_t>(j)] * gg[static_cast<std::size_t>(k)];
            if (k == j + 1) v += uu[static_cast<std::size_t>(j)];
            return v;
        });
        real a = pf_structured_expansion(uu, ff, gg);
        real b = pf(dense);
        REQUIRE(abs(a - b) < real(1e-55) * (1 + abs(b)));
    }
}

TEST_CASE("structured expansion: zero pair entry falls back to dense") {
    std::vector<real> u = {real(0), real(1), real(2)}; // u[0] = 0 (pair position)
    std::vector<real> f = {real(1), real(2), real(3), real(4)};
    std::vector<real> g = {real(5), real(6), real(7), real(8)};
    auto dense = SkewMatrix::from_upper(4, [&](int j, int k) {
        real v = f[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k)];
        if (k == j + 1) v += u[static_cast<std::size_t>(j)];
        return v;
    });
    REQUIRE(pf_structured_expansion(u, f, g) == pf(dense));
    REQUIRE_THROWS_AS(pf_structured_expansion(u, f, std::vector<real>{real(1)}),
                      std::invalid_argument);
}
