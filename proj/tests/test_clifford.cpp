#include "catch_amalgamated.hpp"

#include <fermionlab/clifford.hpp>

#include <algorithm>
#include <random>

using namespace fermionlab;

namespace {

// sign of the permutation sorting seq, by bubble sort
int sort_sign(std::vector<int> seq) {
    int s = 1;
    for (std::size_t a = 0; a < seq.size(); ++a)
        for (std::size_t b = 0; b + 1 < seq.size() - a; ++b)
            if (seq[b] > seq[b + 1]) {
                std::swap(seq[b], seq[b + 1]);
                s = -s;
            }
    return s;
}

SpinVector basis(std::vector<int> xs, int r) { return SpinVector::basis(IndexSubset::from_elements(xs, r)); }

} // namespace

TEST_CASE("subset_len_and_weight") {
    auto I = IndexSubset::from_elements({0, 2, 3}, 5);
    CHECK(I.len() == 3);
    CHECK(I.wt() == 5);
    CHECK(I.reflect() == IndexSubset::from_elements({1, 2, 4}, 5));
    CHECK(I.set_complement() == IndexSubset::from_elements({1, 4}, 5));
    CHECK_THROWS_AS(IndexSubset::from_elements({5}, 5), std::out_of_range);
}

TEST_CASE("generator_examples") {
    CHECK(apply_generator(GenKind::P, 0, basis({0}, 2)) == basis({}, 2));
    CHECK(apply_generator(GenKind::Q, 0, basis({0}, 2)).is_zero());
    auto v = apply_generator(GenKind::P, 1, basis({0, 1}, 2));
    SpinVector expect(2);
    expect.add(1, -1);
    CHECK(v == expect);
    CHECK_THROWS_AS(apply_generator(GenKind::P, 2, basis({0}, 2)), std::out_of_range);
}

TEST_CASE("wedge_agrees_with_sorting_sign") {
    for (int r = 1; r <= 5; ++r)
        for (Mask b = 0; b < (Mask(1) << r); ++b)
            for (int i = 0; i < r; ++i) {
                IndexSubset I(b, r);
                auto v = apply_generator(GenKind::Q, i, SpinVector::basis(I));
                if (I.contains(i)) {
                    CHECK(v.is_zero());
                    continue;
                }
                std::vector<int> seq{i};
                for (int x : I.elements()) seq.push_back(x);
                REQUIRE(v.terms.size() == 1);
                CHECK(v.terms.begin()->first == (b | (Mask(1) << i)));
                CHECK(v.terms.begin()->second == sort_sign(seq));
            }
}

TEST_CASE("ordered_words") {
    auto rep = spin_representation(2);
    auto q01 = ordered_word(IndexSubset::from_elements({0, 1}, 2), GenKind::Q, rep);
    CHECK(q01.at(3, 0) == 1);
    auto p01 = ordered_word(IndexSubset::from_elements({0, 1}, 2), GenKind::P, rep);
    CHECK(p01.at(0, 3) == 1);
    auto full = IndexSubset::full(2);
    auto pq = ordered_word(full, GenKind::P, rep) * ordered_word(full, GenKind::Q, rep);
    CHECK(pq.at(0, 0) == 1);
    CHECK(ordered_word(IndexSubset(0, 2), GenKind::P, rep) == SparseIntMap::identity(4));
    for (Mask b = 0; b < 4; ++b) {
        IndexSubset I(b, 2);
        CHECK(CliffordOp::ordered(I, GenKind::P).realize(rep) == ordered_word(I, GenKind::P, rep));
        CHECK(CliffordOp::ordered(I, GenKind::Q).realize(rep) == ordered_word(I, GenKind::Q, rep));
    }
}

TEST_CASE("relations_hold_up_to_rank_six") {
    for (int r = 1; r <= 6; ++r) {
        auto rep = check_relations(r);
        INFO("r=" << r);
        CHECK(rep.ok);
        CHECK(rep.failures.empty());
        CHECK(restriction_identity(spin_representation(r)));
        CHECK(completeness_identity(r));
    }
}

TEST_CASE("corrupted_sign_table_names_failing_pair") {
    SignRule bad = [](GenKind k, int i, Mask bits) {
        if (k == GenKind::P && i == 1) return 1;
        return koszul_sign(k, i, bits);
    };
    auto rep = check_relations(spin_representation(2, bad));
    CHECK_FALSE(rep.ok);
    bool named = std::any_of(rep.failures.begin(), rep.failures.end(),
                             [](const std::string& f) { return f.find("p_1") != std::string::npos; });
    CHECK(named);
}

TEST_CASE("completeness_small_cases") {
    CHECK(completeness_identity(1));
    CHECK(completeness_identity(2));
    CHECK(completeness_identity(4));
}

TEST_CASE("spin_factorize_standard") {
    auto f = spin_factorize(spin_representation(3));
    CHECK(f.rank_w == 1);
    CHECK(f.kernel.at(0, 0) != 0);
    auto g = spin_factorize(direct_sum(spin_representation(1), spin_representation(1)));
    CHECK(g.rank_w == 2);
}

TEST_CASE("spin_factorize_scrambled_round_trip") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        int r = 1 + trial % 3;
        std::size_t w = 1 + trial % 5;
        auto rep = induced_representation(w, r);
        // random unimodular change of basis from elementary operations
        auto g = SparseIntMap::identity(rep.dim);
        auto gi = SparseIntMap::identity(rep.dim);
        std::uniform_int_distribution<std::size_t> pick(0, rep.dim - 1);
        std::uniform_int_distribution<int> coef(-2, 2);
        for (int s = 0; s < 30; ++s) {
            auto a = pick(rng), b = pick(rng);
            int c = coef(rng);
            if (a == b || c == 0) continue;
            auto e = SparseIntMap::identity(rep.dim);
            e.set(a, b, c);
            auto ei = SparseIntMap::identity(rep.dim);
            ei.set(a, b, -c);
            g = e * g;
            gi = gi * ei;
        }
        REQUIRE(g * gi == SparseIntMap::identity(rep.dim));
        auto f = spin_factorize(conjugate(rep, g, gi));
        CHECK(f.rank_w == w);
    }
    auto f = spin_factorize(induced_representation(3, 2));
    CHECK(f.rank_w == 3);
}

TEST_CASE("spin_factorize_rejects_broken_relations") {
    SignRule bad = [](GenKind k, int i, Mask bits) { return k == GenKind::Q && i == 0 ? 1 : koszul_sign(k, i, bits); };
    auto rep = spin_representation(2, bad);
    rep.q[0] = 2 * rep.q[0];
    CHECK_THROWS_AS(spin_factorize(rep), FactorizationError);
}

TEST_CASE("hodge_star_examples") {
    CHECK(hodge_star(basis({}, 2)) == basis({0, 1}, 2));
    SpinVector expect(2);
    expect.add(1, -1);
    CHECK(hodge_star(basis({1}, 2)) == expect);
}

TEST_CASE("hodge_sign_matches_wedge_oracle") {
    for (int r = 1; r <= 6; ++r)
        for (Mask b = 0; b < (Mask(1) << r); ++b) {
            IndexSubset I(b, r);
            std::vector<int> seq = I.elements();
            for (int x : I.set_complement().elements()) seq.push_back(x);
            CHECK(hodge_sign(I) == sort_sign(seq));
        }
}

TEST_CASE("hodge_star_is_bijective_and_squares_to_sign") {
    for (int r = 1; r <= 6; ++r) {
        CHECK(is_unimodular(hodge_matrix(r)));
        auto signs = hodge_square_signs(r);
        for (int d = 0; d <= r; ++d) {
            INFO("r=" << r << " d=" << d);
            int expect = (d * (r - d)) % 2 == 0 ? 1 : -1;
            CHECK(signs[d] == expect);
        }
    }
}

TEST_CASE("hodge_star_conjugates_action") {
    for (int r = 1; r <= 6; ++r) {
        auto t = hodge_conjugation_table(r);
        CHECK(t.consistent);
        for (int i = 0; i < r; ++i) {
            // a source of odd length containing i gives +1, even length gives -1
            CHECK(t.p_to_q[i][1] == 1);
            if (r > 1) CHECK(t.p_to_q[i][0] == -1);
        }
    }
}
