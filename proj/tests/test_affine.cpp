#include "catch_amalgamated.hpp"

#include <fermionlab/affine.hpp>

using namespace fermionlab;

TEST_CASE("normal_ordering_kills_the_vacuum") {
    for (int r = 1; r <= 3; ++r)
        for (int i = 0; i < r; ++i) CHECK(bilinear_on_basis(i, i, 0, MayaDiagram::vacuum(r)).empty());
    CHECK_FALSE(bilinear_on_basis(0, 0, -1, MayaDiagram::vacuum(1)).empty());
    CHECK(bilinear_on_basis(0, 0, 1, MayaDiagram::vacuum(1)).empty());
}

TEST_CASE("color_exchange_by_hand") {
    // I_0 = {1}, I_1 = {0}: only level 0 can trade color 1 for color 0
    MayaDiagram d(2, 0, {0b10, 0b01});
    MayaDiagram expect(2, 0, {0b01, 0b01});
    auto v = bilinear_on_basis(0, 1, 0, d);
    REQUIRE(v.size() == 1);
    CHECK(v.begin()->first == expect);
    CHECK(v.begin()->second == 1);
    CHECK(charge(d) == 0);
    CHECK(weight(d) == 1);
}

TEST_CASE("commutator_of_operator_with_itself_vanishes") {
    FockTruncation t(2, -1, 1, 4);
    AffineFamily fam(t);
    const auto& g = fam.get(0, 1, 1);
    CHECK(commutator(g, g).restricted().is_zero());
}

TEST_CASE("heisenberg_central_term_is_the_identity") {
    FockTruncation t(1, -2, 2, 8);
    AffineFamily fam(t);
    auto c = commutator(fam.get(0, 0, 1), fam.get(0, 0, -1));
    CHECK(c.exact_count() > 0);
    CHECK(equal_on_exact(c, central_operator(t, CentralPolicy::Identity).map));
    CHECK_FALSE(equal_on_exact(c, central_operator(t, CentralPolicy::Charge).map));
}

TEST_CASE("affine_relations_rank_one") {
    FockTruncation t(1, -2, 2, 8);
    AffineFamily fam(t);
    auto rep = affine_check(fam, 2, CentralPolicy::Identity);
    CHECK(rep.failures == 0);
    CHECK(rep.vacuous == 0);
    auto literal = affine_check(fam, 2, CentralPolicy::Charge);
    // only [e^a, e^-a] with a != 0 carry a central term
    CHECK(literal.failures == 4);
}

TEST_CASE("affine_relations_rank_two") {
    FockTruncation t(2, -2, 2, 6);
    AffineFamily fam(t);
    auto rep = affine_check(fam, 2, CentralPolicy::Identity);
    for (const auto& f : rep.failed) UNSCOPED_INFO(f);
    CHECK(rep.failures == 0);
    CHECK(rep.vacuous == 0);
    CHECK(rep.relations == 16 * 25);
    auto res = affine_residual(0, 1, 1, 0, 1, -1, fam, CentralPolicy::Identity);
    CHECK(res.restricted().is_zero());
}

TEST_CASE("affine_relations_rank_three") {
    FockTruncation t(3, -1, 1, 4);
    AffineFamily fam(t);
    auto rep = affine_check(fam, 1, CentralPolicy::Identity);
    CHECK(rep.failures == 0);
    CHECK(rep.vacuous == 0);
}

TEST_CASE("derivation_has_a_single_sign") {
    for (int r = 1; r <= 2; ++r) {
        FockTruncation t(r, -1, 1, 6);
        AffineFamily fam(t);
        auto d = derivation_sign(fam, 2);
        CHECK(d.sign == -1);
        CHECK(d.consistent);
        CHECK(d.checked == std::size_t(5 * r * r));
    }
}

TEST_CASE("generators_preserve_charge_and_shift_weight") {
    FockTruncation t(2, -2, 2, 5);
    AffineFamily fam(t);
    for (int a = -2; a <= 2; ++a)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const auto& g = fam.get(i, j, a);
                CHECK_NOTHROW(charge_blocks(g, t));
                auto s = weight_shift(g, t);
                REQUIRE(s);
                CHECK(*s == -a);
            }
    auto e = realize(t, op_shift(ShiftDir::E));
    CHECK_THROWS_AS(charge_blocks(e, t), BlockError);
    for (int i = 0; i < 2; ++i)
        for (const auto& [c, block] : charge_blocks(fam.get(i, i, 0), t))
            block.for_each([&](std::size_t x, std::size_t y, const BigInt&) { CHECK(x == y); });
}

TEST_CASE("empty_safe_window_is_an_error") {
    FockTruncation t(1, 0, 0, 0);
    CHECK_THROWS_AS(bilinear(0, 0, -1, t), WindowError);
    CHECK_THROWS_AS(bilinear(0, 1, 0, t), std::out_of_range);
}
