#include "catch_amalgamated.hpp"

#include <fermionlab/qseries.hpp>

#include <random>

using namespace fermionlab;

namespace {

std::vector<long long> partitions(int n) {
    std::vector<long long> p(std::size_t(n) + 1, 0);
    p[0] = 1;
    for (int m = 1; m <= n; ++m)
        for (int k = 1;; ++k) {
            int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            if (g1 > m) break;
            long long s = k % 2 ? 1 : -1;
            p[m] += s * p[m - g1];
            if (g2 <= m) p[m] += s * p[m - g2];
        }
    return p;
}

std::vector<long long> multiply(const std::vector<long long>& a, const std::vector<long long>& b) {
    std::vector<long long> c(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < c.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// sum over k in Z^r with sum k = l of q^((|k|^2 + l)/2), over prod (1 - q^m)^r
std::vector<long long> lattice_oracle(int r, int l, int n) {
    std::vector<long long> num(std::size_t(n) + 1, 0);
    std::vector<int> k(std::size_t(r), 0);
    const int bound = 2 * n + std::abs(l) + 2;
    auto rec = [&](auto&& self, int idx, int rest) -> void {
        if (idx == r - 1) {
            k[idx] = rest;
            long long s = l;
            for (int v : k) s += (long long)v * v;
            if (s % 2 == 0 && s / 2 <= n) ++num[std::size_t(s / 2)];
            return;
        }
        for (int v = -bound; v <= bound; ++v) {
            k[idx] = v;
            self(self, idx + 1, rest - v);
        }
    };
    rec(rec, 0, l);
    auto p = partitions(n);
    for (int i = 0; i < r; ++i) num = multiply(num, p);
    return num;
}

std::vector<long long> as_ll(const BiSeries& s) {
    std::vector<long long> out;
    for (const auto& c : integer_coefficients(s)) out.push_back(c.get_si());
    return out;
}

BiSeries random_series(std::mt19937& rng, int order, int offset24) {
    std::uniform_int_distribution<int> c(-3, 3), e(-2, 2);
    BiSeries s(offset24, order);
    for (int n = 0; n <= order; ++n)
        for (int t = 0; t < 3; ++t) s.coeff(n) += LaurentPoly::monomial(e(rng), e(rng), c(rng));
    return s;
}

} // namespace

TEST_CASE("eta_matches_pentagonal_numbers") {
    auto e = eta(30);
    CHECK(e.offset24() == 1);
    auto c = as_ll(e);
    std::vector<long long> expect(31, 0);
    for (int k = -10; k <= 10; ++k) {
        int g = k * (3 * k - 1) / 2;
        if (g <= 30) expect[g] += k % 2 ? -1 : 1;
    }
    CHECK(c == expect);
    CHECK(std::vector<long long>(c.begin(), c.begin() + 6) == std::vector<long long>{1, -1, -1, 0, 0, 1});
    auto one = e * e.inverse();
    CHECK(one == BiSeries::one(30));
}

TEST_CASE("theta_coefficients") {
    auto t0 = as_ll(theta(0, 16)), t1 = as_ll(theta(1, 16));
    CHECK(theta(0, 4).offset24() == 0);
    CHECK(theta(1, 4).offset24() == 6);
    for (int n = 0; n <= 16; ++n) {
        bool sq = false, pr = false;
        for (int k = 0; k * k <= n; ++k) {
            sq = sq || k * k == n;
            pr = pr || k * (k + 1) == n;
        }
        CHECK(t0[n] == (n == 0 ? 1 : sq ? 2 : 0));
        CHECK(t1[n] == (pr ? 2 : 0));
    }
    CHECK_THROWS_AS(theta(2, 3), std::invalid_argument);
}

TEST_CASE("blowup_series_specializes_to_theta_over_eta_squared") {
    for (int a : {0, 1}) {
        auto z = blowup_Z(a, 30);
        auto diag = z.substitute(1, 0, -1, 0);
        auto e = eta(30);
        CHECK(diag * e * e == theta(a, 30));
        CHECK(diag == theta(a, 30) * (e * e).inverse());
        // x -> 1/x, y -> 1/y on the specialization; a mod 2 is unchanged by negation
        CHECK(diag.substitute(-1, 0, 0, -1) == diag);
        CHECK(z.substitute(0, 1, 1, 0) == z);
    }
}

TEST_CASE("blowup_series_at_one") {
    auto z = blowup_Z(0, 8).at_one();
    CHECK(z.offset24() == -2);
    auto c = as_ll(z);
    auto m = multiply(as_ll(theta(0, 8)), multiply(partitions(8), partitions(8)));
    CHECK(c == m);
    CHECK(c[0] == 1);
    CHECK(c[1] == 4);
}

TEST_CASE("ring_axioms_on_random_series") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_series(rng, 8, 0), b = random_series(rng, 8, 24), c = random_series(rng, 6, 0);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a * c).order() == 6);
        CHECK((a - a).is_zero());
    }
    BiSeries u(5, 6);
    u.coeff(0) = LaurentPoly::monomial(1, -2, -1);
    u.coeff(3) = LaurentPoly::monomial(2, 0, 3);
    CHECK(u * u.inverse() == BiSeries::one(6));
    BiSeries bad(0, 3);
    bad.coeff(0) = LaurentPoly::constant(2);
    CHECK_THROWS_AS(bad.inverse(), std::domain_error);
    CHECK_THROWS_AS(BiSeries(1, 3) + BiSeries(0, 3), std::invalid_argument);
}

TEST_CASE("rank_one_characters_are_shifted_partition_counts") {
    const int N = 20;
    auto p = partitions(N);
    for (int l = -3; l <= 0; ++l) {
        auto c = as_ll(fock_character(1, l, N));
        int w = l * (l + 1) / 2;
        for (int n = 0; n <= N; ++n) CHECK(c[n] == (n >= w ? p[n - w] : 0));
    }
}

TEST_CASE("rank_two_and_three_characters_match_the_lattice_sum") {
    for (int l = -2; l <= 0; ++l) CHECK(as_ll(fock_character(2, l, 12)) == lattice_oracle(2, l, 12));
    CHECK(as_ll(fock_character(2, 0, 2)) == std::vector<long long>{1, 4, 9});
    for (int l = -2; l <= 0; ++l) CHECK(as_ll(fock_character(3, l, 7)) == lattice_oracle(3, l, 7));
}

TEST_CASE("characters_are_periodic_in_the_charge") {
    for (int r = 1; r <= 3; ++r) {
        const int N = r == 3 ? 7 : 12;
        for (int l = -2 * r; l + r <= 0; ++l) {
            auto m = compare_up_to_monomial(fock_character(r, l + r, N), fock_character(r, l, N));
            REQUIRE(m);
            CHECK(m->dx == 0);
            CHECK(m->q24 % 24 == 0);
            CHECK(m->q24 == 24 * (l + r));
        }
    }
}

TEST_CASE("monomial_comparison") {
    auto z = blowup_Z(1, 10);
    auto m = compare_up_to_monomial(z, z);
    REQUIRE(m);
    CHECK(*m == MonomialShift{0, 0, 0});
    m = compare_up_to_monomial(z.times_q(1), z);
    REQUIRE(m);
    CHECK(*m == MonomialShift{24, 0, 0});
    CHECK(m->q_str() == "1");
    CHECK(MonomialShift{-2, 0, 0}.q_str() == "-1/12");
    BiSeries w = z;
    w.coeff(0) = w.coeff(0).shifted(1, 2);
    CHECK_FALSE(compare_up_to_monomial(w, z));
    BiSeries s = z;
    for (int n = 0; n <= s.order(); ++n) s.coeff(n) = s.coeff(n).shifted(1, -1);
    m = compare_up_to_monomial(s, z);
    REQUIRE(m);
    CHECK(*m == MonomialShift{0, 1, -1});
    CHECK_FALSE(compare_up_to_monomial(BiSeries(0, 3), z));
}

TEST_CASE("bigraded_rank_two_character_against_blowup_series") {
    const int N = 10;
    auto f = fock_character(2, 0, N, CharacterGrading::WeightCoho);
    auto z = blowup_Z(0, N).substitute(1, 0, 0, 0);
    auto m = compare_up_to_monomial(f, z);
    REQUIRE(m);
    INFO("shift q^" << m->q_str() << " x^" << m->dx << " y^" << m->dy);
    CHECK(*m == MonomialShift{2, 0, 0});
    auto g = compare_up_to_monomial(fock_character(2, -2, N, CharacterGrading::WeightCoho), z);
    REQUIRE(g);
    CHECK(*g == MonomialShift{2, 1, 0});
    auto h = compare_up_to_monomial(fock_character(2, -1, N, CharacterGrading::WeightCoho),
                                    blowup_Z(1, N).substitute(1, 0, 0, 0));
    REQUIRE(h);
    CHECK(*h == MonomialShift{-4, 0, 0});
    CHECK_FALSE(compare_up_to_monomial(fock_character(2, -1, N, CharacterGrading::WeightCoho), z));
}

TEST_CASE("library_lattice_sum_matches_oracle") {
    for (int r = 1; r <= 3; ++r)
        for (int l = -r; l <= r; ++l) CHECK(as_ll(lattice_character(r, l, 10)) == lattice_oracle(r, l, 10));
    CHECK(lattice_character(2, 0, 12) == fock_character(2, 0, 12));
}
