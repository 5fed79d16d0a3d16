#include "catch_amalgamated.hpp"

#include <fermionlab/linalg.hpp>

#include <algorithm>
#include <numeric>
#include <random>

using namespace fermionlab;

namespace {

SparseIntMap from_rows(const std::vector<std::vector<long>>& rows) {
    SparseIntMap m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            if (rows[i][j] != 0) m.set(i, j, rows[i][j]);
    return m;
}

// Leibniz expansion
BigInt leibniz(const SparseIntMap& m) {
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    BigInt total = 0;
    do {
        int inv = 0;
        for (std::size_t a = 0; a < perm.size(); ++a)
            for (std::size_t b = a + 1; b < perm.size(); ++b)
                if (perm[a] > perm[b]) ++inv;
        BigInt prod = inv % 2 ? -1 : 1;
        for (std::size_t i = 0; i < perm.size(); ++i) prod *= m.at(i, perm[i]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

SparseIntMap random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    SparseIntMap m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, d(rng));
    return m;
}

} // namespace

TEST_CASE("sparse_map_basic_algebra") {
    auto a = from_rows({{1, 2}, {0, -1}});
    auto b = from_rows({{0, 1}, {1, 0}});
    CHECK(a * b == from_rows({{2, 1}, {-1, 0}}));
    CHECK(a + b == from_rows({{1, 3}, {1, -1}}));
    CHECK((a - a).is_zero());
    CHECK(a.transpose() == from_rows({{1, 0}, {2, -1}}));
    CHECK(a.nonzeros() == 3);
    CHECK(a.max_abs() == 2);
    CHECK(commutator(a, a).is_zero());
    CHECK(SparseIntMap::kron(SparseIntMap::identity(2), b).rows() == 4);
    CHECK_THROWS(a * SparseIntMap(3, 3));
}

TEST_CASE("truncated_composition_tracks_exactness") {
    auto a = TruncatedOperator(SparseIntMap::identity(2), {1, 0});
    auto swap = TruncatedOperator::exact_map(from_rows({{0, 1}, {1, 0}}));
    auto c = a * swap;
    CHECK(c.exact[0] == 0);
    CHECK(c.exact[1] == 1);
    CHECK(c.exact_count() == 1);
}

TEST_CASE("determinant_matches_leibniz") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        std::size_t n = 1 + t % 5;
        auto m = random_matrix(rng, n, n, -3, 3);
        CHECK(determinant(m) == leibniz(m));
    }
    CHECK(determinant(from_rows({{0, 1}, {1, 0}})) == -1);
}

TEST_CASE("rank_of_known_matrices") {
    CHECK(rank(from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}})) == 2);
    CHECK(rank(SparseIntMap(3, 4)) == 0);
    CHECK(rank(SparseIntMap::identity(5)) == 5);
}

TEST_CASE("kernel_is_saturated") {
    auto k = integer_kernel(from_rows({{2, 3}}));
    REQUIRE(k.cols() == 1);
    CHECK(abs(k.at(0, 0)) == 3);
    CHECK(abs(k.at(1, 0)) == 2);
    auto k2 = integer_kernel(from_rows({{2, 4}}));
    REQUIRE(k2.cols() == 1);
    CHECK(abs(k2.at(0, 0)) == 2);
    CHECK(abs(k2.at(1, 0)) == 1);
}

TEST_CASE("random_kernels_are_exact_and_saturated") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        std::size_t r = 1 + t % 4, c = r + 1 + t % 3;
        auto a = random_matrix(rng, r, c, -4, 4);
        auto k = integer_kernel(a);
        CHECK(k.cols() == c - rank(a));
        CHECK((a * k).is_zero());
        // saturation: the kernel lattice is primitive, so its columns extend to a basis of the row-free part
        if (k.cols() > 0) {
            auto kt = k.transpose();
            CHECK(columns_generate_lattice(kt));
        }
    }
}

TEST_CASE("solves_and_inverses") {
    auto a = from_rows({{2, 1}, {1, 1}});
    CHECK(is_unimodular(a));
    auto inv = unimodular_inverse(a);
    CHECK(a * inv == SparseIntMap::identity(2));
    auto x = integer_solve(a, {3, 2});
    REQUIRE(x);
    CHECK((*x)[0] == 1);
    CHECK((*x)[1] == 1);
    CHECK_FALSE(integer_solve(from_rows({{2}}), {1}));
    CHECK_FALSE(rational_solve(from_rows({{1}, {1}}), {1, 2}));
    CHECK_FALSE(is_unimodular(from_rows({{2, 0}, {0, 1}})));
    CHECK_THROWS(unimodular_inverse(from_rows({{2, 0}, {0, 1}})));
}

TEST_CASE("lattice_generation") {
    CHECK(columns_generate_lattice(from_rows({{2, 3}})));
    CHECK_FALSE(columns_generate_lattice(from_rows({{2, 4}})));
    CHECK_FALSE(columns_generate_lattice(from_rows({{1, 0}, {0, 0}})));
}
