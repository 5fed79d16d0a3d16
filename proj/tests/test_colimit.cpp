#include "catch_amalgamated.hpp"

#include <fermionlab/colimit.hpp>

using namespace fermionlab;

namespace {

std::vector<long long> partitions(int n) {
    std::vector<long long> p(std::size_t(n) + 1, 0);
    p[0] = 1;
    for (int k = 1; k <= n; ++k)
        for (int m = k; m <= n; ++m) p[m] += p[m - k];
    return p;
}

// Same representation with e scaled by s and f by 1 (breaks fe = id unless s = 1).
class ScaledE : public BigradedRep {
public:
    ScaledE(const BigradedRep& base, int s) : base_(&base), s_(s) {}
    int rank() const override { return base_->rank(); }
    long long floor() const override { return base_->floor(); }
    std::size_t dim(Bidegree d) const override { return base_->dim(d); }
    SparseIntMap matrix(RepOp k, int i, Bidegree d) const override {
        auto m = base_->matrix(k, i, d);
        return k == RepOp::E ? BigInt(s_) * m : m;
    }

private:
    const BigradedRep* base_;
    int s_;
};

} // namespace

TEST_CASE("standard_model_dimensions") {
    StandardModel v1(1, {1}, 0);
    auto p = partitions(8);
    for (int n = 0; n <= 8; ++n) {
        CHECK(v1.dim({0, n}) == enumerate_basis(1, 0, n, 0).size());
        CHECK(v1.dim({0, n}) <= std::size_t(p[n]));
    }
    CHECK(v1.dim({0, 0}) == 1);
    StandardModel empty(2, {}, 0);
    for (int l = -3; l <= 0; ++l)
        for (int n = 0; n <= 4; ++n) CHECK(empty.dim({l, n}) == 0);
    StandardModel v2(2, {1}, 0);
    CHECK(v2.dim({-1, 0}) == enumerate_basis(2, -1, 0, 0).size());
    CHECK(v2.dim({1, 3}) == 0);
    StandardModel w(2, {1, 0, 2}, -1);
    CHECK(w.dim({-1, 1}) == enumerate_basis(2, -1, 2, 0).size() + 2 * enumerate_basis(2, -1, 0, 0).size());
    CHECK(w.dim({0, -2}) == 0);
}

TEST_CASE("standard_models_are_bounded_bigraded") {
    for (int r = 1; r <= 3; ++r) {
        StandardModel v(r, {1, 2}, 0);
        auto rep = check_bounded_rep(v, -2 * r, r == 3 ? 4 : 6);
        for (const auto& f : rep.failures) UNSCOPED_INFO(f);
        CHECK(rep.ok);
        CHECK(rep.pieces > 0);
    }
    StandardModel v(2, {1}, 0);
    ScaledE bad(v, 2);
    CHECK_FALSE(check_bounded_rep(bad, -2, 3).ok);
}

TEST_CASE("colimit_examples") {
    StandardModel v2(2, {1}, 0);
    auto s = h_infinity(v2, {0, 0}, 6);
    REQUIRE(s.stab_index);
    CHECK(*s.stab_index == 0);
    CHECK(s.colimit_rank == 1);
    StandardModel v1(1, {1}, 0);
    auto t = h_infinity(v1, {0, 3}, 8);
    REQUIRE(t.stab_index);
    CHECK(t.colimit_rank == 3);
    auto u = h_infinity(v2, {0, 5}, 10);
    REQUIRE(u.stab_index);
    CHECK(*u.stab_index == fock_saturation_index(2, {0, 5}));
    CHECK(u.colimit_rank == enumerate_basis(2, 0, 5).size());
}

TEST_CASE("stabilization_index_matches_fock_saturation") {
    for (int r = 1; r <= 3; ++r) {
        StandardModel v(r, {1, 1}, 0);
        const int n_hi = r == 3 ? 4 : 6;
        for (int l = -r; l <= r; ++l)
            for (int n = 0; n <= n_hi; ++n) {
                auto [m, full] = model_saturation(v, {l, n});
                auto s = h_infinity(v, {l, n}, m + 3);
                INFO("r=" << r << " (l,n)=(" << l << "," << n << ")");
                REQUIRE(s.stab_index);
                CHECK(*s.stab_index == m);
                CHECK(s.colimit_rank == full);
                bool seen = false;
                for (char inj : s.injective) {
                    if (seen) CHECK(inj);
                    seen = seen || inj;
                }
            }
    }
}

TEST_CASE("no_stabilization_is_reported") {
    StandardModel v(2, {1}, 0);
    ScaledE bad(v, 2);
    auto s = h_infinity(bad, {0, 3}, 6);
    CHECK_FALSE(s.stab_index);
    CHECK(s.injective.back());
    CHECK_FALSE(s.bijective.back());
    auto short_run = h_infinity(v, {0, 5}, 2);
    CHECK_FALSE(short_run.stab_index);
}

TEST_CASE("colimit_is_the_full_fock_space") {
    StandardModel v1(1, {1}, 0);
    auto a = fock_structure(v1, -2, 2, 6);
    for (const auto& f : a.failures) UNSCOPED_INFO(f);
    CHECK(a.ok);
    auto p = partitions(6);
    ColimitWindow h1(v1, a.level);
    for (int l = -2; l <= 2; ++l)
        for (int n = 0; n <= 6; ++n) {
            int w = l * (l + 1) / 2;
            CHECK(h1.dim({l, n}) == std::size_t(n >= w ? p[n - w] : 0));
        }
    StandardModel v2(2, {1}, 0);
    auto b = fock_structure(v2, -2, 2, 5);
    for (const auto& f : b.failures) UNSCOPED_INFO(f);
    CHECK(b.ok);
    CHECK(b.rank_checks == 5 * 6);
    CHECK(b.operator_checks > 0);
}

TEST_CASE("rank_two_multiplicity_doubles_the_colimit") {
    StandardModel one(2, {1}, 0), two(2, {2}, 0);
    auto a = fock_structure(two, -1, 1, 3, 0, 0);
    CHECK(a.ok);
    ColimitWindow h1(one, a.level), h2(two, a.level);
    for (int l = -1; l <= 1; ++l)
        for (int n = 0; n <= 3; ++n) CHECK(h2.dim({l, n}) == 2 * h1.dim({l, n}));
}

TEST_CASE("colimit_fermions_satisfy_clifford_relations") {
    StandardModel v(2, {1}, 0);
    ColimitWindow H(v, 4);
    for (Bidegree d : {Bidegree{0, 1}, Bidegree{-1, 2}, Bidegree{0, 3}})
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) {
                        INFO(d.str() << " a=" << a << " b=" << b << " i=" << i << " j=" << j);
                        auto q = H.fermion(RepOp::Q, b, j, d);
                        auto pq = then(q, H.fermion(RepOp::P, a, i, q.target));
                        auto p = H.fermion(RepOp::P, a, i, d);
                        auto qp = then(p, H.fermion(RepOp::Q, b, j, p.target));
                        REQUIRE(pq.target == qp.target);
                        auto expect = a == b && i == j ? SparseIntMap::identity(H.dim(d)) : SparseIntMap(H.dim(pq.target), H.dim(d));
                        CHECK(pq.m + qp.m == expect);
                        auto p2 = H.fermion(RepOp::P, b, j, d);
                        auto pp = then(p2, H.fermion(RepOp::P, a, i, p2.target));
                        auto p1 = then(p, H.fermion(RepOp::P, b, j, p.target));
                        CHECK((pp.m + p1.m).is_zero());
                    }
    // P_{a,i} E = E P_{a+1,i}
    Bidegree d{0, 2};
    auto e = H.E(d);
    auto pe = then(e, H.fermion(RepOp::P, 0, 1, e.target));
    auto p = H.fermion(RepOp::P, 1, 1, d);
    auto ep = then(p, H.E(p.target));
    CHECK(pe.m == ep.m);
}

TEST_CASE("colimit_operator_shifts") {
    StandardModel v(2, {1}, 0);
    ColimitWindow H(v, 5);
    for (int l = -2; l <= 1; ++l)
        for (int n = 0; n <= 3; ++n) {
            Bidegree d{l, n};
            CHECK(H.E(d).target == Bidegree{l - 2, n - l});
            CHECK(H.F(d).target == Bidegree{l + 2, n + l + 2});
            CHECK(H.fermion(RepOp::P, 0, 0, d).target == Bidegree{l - 1, n});
            CHECK(H.fermion(RepOp::Q, 0, 1, d).target == Bidegree{l + 1, n});
        }
}

TEST_CASE("trajectory_examples") {
    auto t = trajectory(2, {0, 0}, 0, 3);
    REQUIRE(t.size() == 4);
    std::vector<Bidegree> expect{{0, 0}, {-2, 0}, {-4, 2}, {-6, 6}};
    for (std::size_t k = 0; k < 4; ++k) CHECK(t[k].at == expect[k]);
    CHECK(trajectory(3, {-1, 4}, 0, 0)[0].at == Bidegree{-1, 4});
    for (int r = 1; r <= 4; ++r)
        for (int l = -2 * r; l <= 0; ++l)
            for (int n = -3; n <= 3; ++n)
                for (const auto& p : trajectory(r, {l, n}, 0, 10)) CHECK(on_parabola(r, {l, n}, p.x(), p.y()));
    CHECK_FALSE(on_parabola(2, {0, 0}, 1, 2));
    auto svg = trajectory_svg(2, {0, 0}, t);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(trajectory_ascii(t).find('o') != std::string::npos);
}

TEST_CASE("foliation") {
    auto f = foliation_check(2, -8, 0, 0, 12);
    for (const auto& x : f.failures) UNSCOPED_INFO(x);
    CHECK(f.ok);
    CHECK(f.points == 9 * 13);
    for (int r = 1; r <= 4; ++r) CHECK(foliation_check(r, -3 * r, 0, -5, 10).ok);
    for (int l = -5; l <= 0; ++l)
        for (int n = 0; n <= 5; ++n) CHECK(trajectory_origin(1, {l, n}).first.l == 0);
}

TEST_CASE("mirror_trajectories_are_disjoint_unless_congruent") {
    for (int r = 1; r <= 5; ++r)
        for (int l = -2 * r; l <= 0; ++l)
            for (int n = -4; n <= 4; ++n) {
                bool congruent = ((2 * l + r) % r + r) % r == 0;
                bool meet = trajectories_meet(r, {l, n}, {-r - l, n}, 12);
                INFO("r=" << r << " l=" << l << " n=" << n);
                CHECK(meet == congruent);
            }
}
