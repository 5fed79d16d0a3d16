#pragma once

#include "clifford.hpp"
#include "fock.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "sparse_map.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermionlab {

/// (charge, weight) label of a graded piece.
struct Bidegree {
    long long l = 0, n = 0;
    friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
    std::string str() const { return "(" + std::to_string(l) + "," + std::to_string(n) + ")"; }
};

enum class RepOp { E, F, P, Q };

/// Target piece of e, f, p_{a,i}, q_{a,i} on the (l, n)-piece.
inline Bidegree op_target(RepOp k, int r, Bidegree s, int a = 0) {
    switch (k) {
    case RepOp::E: return {s.l - r, s.n - s.l};
    case RepOp::F: return {s.l + r, s.n + s.l + r};
    case RepOp::P: return {s.l - 1, s.n - a};
    case RepOp::Q: return {s.l + 1, s.n + a};
    }
    return s;
}

/// A graded map together with its source and target pieces.
struct GradedMap {
    Bidegree source, target;
    SparseIntMap m;
};

inline GradedMap then(const GradedMap& first, const GradedMap& second) {
    if (first.target != second.source) throw std::logic_error("GradedMap: pieces do not compose");
    return {first.source, second.target, second.m * first.m};
}

/// Bigraded E(r)-representation given piece by piece.
class BigradedRep {
public:
    virtual ~BigradedRep() = default;
    virtual int rank() const = 0;
    virtual long long floor() const = 0;
    virtual std::size_t dim(Bidegree d) const = 0;
    /// e, f, p_i, q_i on the piece d (a is ignored).
    virtual SparseIntMap matrix(RepOp k, int i, Bidegree d) const = 0;

    GradedMap op(RepOp k, int i, Bidegree d) const {
        auto t = op_target(k, rank(), d);
        auto m = matrix(k, i, d);
        if (m.cols() != dim(d) || m.rows() != dim(t))
            throw std::logic_error("BigradedRep: operator has the wrong shape on " + d.str());
        return {d, t, std::move(m)};
    }
};

/// W (x) F(r)^{<=0} with W concentrated in charge 0 and W_n of rank w[n - n_0].
class StandardModel : public BigradedRep {
public:
    using Label = std::pair<std::size_t, MayaDiagram>;

    StandardModel(int r, std::vector<std::size_t> w_ranks, long long n0) : r_(r), n0_(n0), ops_{r} {
        if (r < 1) throw std::invalid_argument("StandardModel: rank must be positive");
        for (std::size_t k = 0; k < w_ranks.size(); ++k)
            for (std::size_t c = 0; c < w_ranks[k]; ++c) w_weight_.push_back(n0 + (long long)k);
    }

    int rank() const override { return r_; }
    long long floor() const override { return n0_; }
    std::size_t w_dim() const { return w_weight_.size(); }
    long long w_weight(std::size_t w) const { return w_weight_.at(w); }

    const std::vector<Label>& labels(Bidegree d) const { return piece(d).labels; }
    std::size_t dim(Bidegree d) const override { return piece(d).labels.size(); }

    std::optional<std::size_t> index(Bidegree d, const Label& x) const {
        const auto& p = piece(d);
        auto it = p.index.find(x);
        if (it == p.index.end()) return std::nullopt;
        return it->second;
    }

    SparseIntMap matrix(RepOp k, int i, Bidegree d) const override {
        if ((k == RepOp::P || k == RepOp::Q) && (i < 0 || i >= r_)) throw std::out_of_range("StandardModel: color out of range");
        FockOp op = k == RepOp::E ? ops_.e() : k == RepOp::F ? ops_.f() : k == RepOp::P ? ops_.p(i) : ops_.q(i);
        auto t = op_target(k, r_, d);
        const auto& src = piece(d);
        const auto& dst = piece(t);
        SparseIntMap m(dst.labels.size(), src.labels.size());
        for (std::size_t j = 0; j < src.labels.size(); ++j) {
            const auto& [w, dia] = src.labels[j];
            for (const auto& [img, c] : op(dia)) {
                auto it = dst.index.find({w, img});
                if (it == dst.index.end())
                    throw std::logic_error("StandardModel: image leaves the target piece " + t.str());
                m.add_to(it->second, j, c);
            }
        }
        return m;
    }

private:
    struct Piece {
        std::vector<Label> labels;
        std::map<Label, std::size_t> index;
    };

    const Piece& piece(Bidegree d) const {
        std::lock_guard<std::mutex> lock(*mu_);
        auto it = cache_.find(d);
        if (it != cache_.end()) return *it->second;
        auto p = std::make_unique<Piece>();
        if (d.l <= 0)
            for (std::size_t w = 0; w < w_weight_.size(); ++w) {
                long long rest = d.n - w_weight_[w];
                if (rest < 0) continue;
                for (auto& dia : enumerate_basis(r_, int(d.l), rest, 0)) {
                    p->index.emplace(Label{w, dia}, p->labels.size());
                    p->labels.emplace_back(w, std::move(dia));
                }
            }
        return *cache_.emplace(d, std::move(p)).first->second;
    }

    int r_;
    long long n0_;
    StandardOps ops_;
    std::vector<long long> w_weight_;
    mutable std::map<Bidegree, std::unique_ptr<Piece>> cache_;
    mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

/// Composition along a list of (op, color) applied left to right.
inline GradedMap chain(const BigradedRep& V, Bidegree d, const std::vector<std::pair<RepOp, int>>& ops) {
    GradedMap acc{d, d, SparseIntMap::identity(V.dim(d))};
    for (const auto& [k, i] : ops) acc = then(acc, V.op(k, i, acc.target));
    return acc;
}

inline std::vector<std::pair<RepOp, int>> word_ops(RepOp k, Mask J, int r) {
    auto el = IndexSubset(J, r).elements();
    std::vector<std::pair<RepOp, int>> out;
    if (k == RepOp::P)
        for (int i : el) out.emplace_back(k, i);
    else
        for (auto it = el.rbegin(); it != el.rend(); ++it) out.emplace_back(k, *it);
    return out;
}

struct BoundedRepReport {
    bool ok = true;
    std::size_t pieces = 0, checks = 0;
    std::vector<std::string> failures;
    void record(bool pass, const std::string& what) {
        ++checks;
        if (!pass) {
            ok = false;
            failures.push_back(what);
        }
    }
};

/// Vanishing, operator shapes, and fe = id, ef = p_[r] q_[r], p_i e = 0, f q_i = 0 on a window.
inline BoundedRepReport check_bounded_rep(const BigradedRep& V, long long l_lo, long long n_hi) {
    BoundedRepReport rep;
    const int r = V.rank();
    const Mask full = IndexSubset::full(r).bits;
    for (long long l = l_lo; l <= r; ++l)
        for (long long n = V.floor() - 2; n <= n_hi; ++n) {
            Bidegree d{l, n};
            if (l > 0 || n < V.floor()) {
                rep.record(V.dim(d) == 0, "vanishing " + d.str());
                continue;
            }
            ++rep.pieces;
            try {
                auto e = V.op(RepOp::E, 0, d);
                auto fe = then(e, V.op(RepOp::F, 0, e.target));
                rep.record(fe.m == SparseIntMap::identity(V.dim(d)), "fe = id " + d.str());
                auto f = V.op(RepOp::F, 0, d);
                auto ef = then(f, V.op(RepOp::E, 0, f.target));
                auto ops = word_ops(RepOp::Q, full, r);
                auto p = word_ops(RepOp::P, full, r);
                ops.insert(ops.end(), p.begin(), p.end());
                rep.record(ef.m == chain(V, d, ops).m, "ef = p q " + d.str());
                for (int i = 0; i < r; ++i) {
                    rep.record(then(e, V.op(RepOp::P, i, e.target)).m.is_zero(), "p e = 0 " + d.str());
                    auto q = V.op(RepOp::Q, i, d);
                    rep.record(then(q, V.op(RepOp::F, 0, q.target)).m.is_zero(), "f q = 0 " + d.str());
                }
            } catch (const std::logic_error& ex) {
                rep.record(false, ex.what());
            }
        }
    return rep;
}

/// The inductive p_{a,i}, q_{a,i} (a <= 0) of a bigraded representation, memoized per piece.
class InductiveModes {
public:
    explicit InductiveModes(const BigradedRep& V) : V_(&V) {}

    GradedMap get(RepOp k, int a, int i, Bidegree d) {
        if (a > 0) throw std::invalid_argument("InductiveModes: mode must be <= 0");
        if (a == 0) return V_->op(k, i, d);
        Key key{int(k), a, i, d.l, d.n};
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        const int r = V_->rank();
        GradedMap acc{d, op_target(k, r, d, a), SparseIntMap(V_->dim(op_target(k, r, d, a)), V_->dim(d))};
        for (Mask I = 0; I < (Mask(1) << r); ++I) {
            auto fI = chain(*V_, d, word_ops(RepOp::P, I, r));
            fI = then(fI, V_->op(RepOp::F, 0, fI.target));
            auto mid = then(fI, get(k, a + 1, i, fI.target));
            auto eq = then(mid, V_->op(RepOp::E, 0, mid.target));
            eq = then(eq, chain(*V_, eq.target, word_ops(RepOp::Q, I, r)));
            if (eq.target != acc.target) throw std::logic_error("InductiveModes: term lands in " + eq.target.str());
            acc.m = acc.m + BigInt(sign_of_parity(std::popcount(I))) * eq.m;
        }
        std::lock_guard<std::mutex> lock(mu_);
        return memo_.emplace(key, acc).first->second;
    }

private:
    using Key = std::tuple<int, int, int, long long, long long>;
    const BigradedRep* V_;
    std::map<Key, GradedMap> memo_;
    std::mutex mu_;
};

/// (l - mr, n - ml + m(m-1)r/2).
inline Bidegree orbit_point(int r, Bidegree d, long long m) { return {d.l - m * r, d.n - m * d.l + m * (m - 1) * r / 2}; }

struct StabilizationReport {
    Bidegree piece;
    long long m_max = 0;
    std::vector<std::size_t> ranks;
    std::vector<char> injective, bijective;
    std::optional<long long> stab_index;
    std::size_t colimit_rank = 0;
};

/// Transition maps e : t^m V_{l,n} -> t^{m+1} V_{l,n} for m < m_max; stabilization when they are
/// unimodular from some m on.
inline StabilizationReport h_infinity(const BigradedRep& V, Bidegree d, long long m_max) {
    if (m_max < 1) throw std::invalid_argument("h_infinity: m_max must be at least 1");
    StabilizationReport rep{d, m_max, {}, {}, {}, std::nullopt, 0};
    const int r = V.rank();
    for (long long m = 0; m <= m_max; ++m) rep.ranks.push_back(V.dim(orbit_point(r, d, m)));
    for (long long m = 0; m < m_max; ++m) {
        auto e = V.op(RepOp::E, 0, orbit_point(r, d, m));
        rep.injective.push_back(is_injective(e.m));
        rep.bijective.push_back(is_unimodular(e.m));
    }
    long long s = m_max;
    while (s > 0 && rep.bijective[std::size_t(s - 1)]) --s;
    if (s < m_max) {
        rep.stab_index = s;
        rep.colimit_rank = rep.ranks[std::size_t(s)];
    }
    return rep;
}

/// Least m with F(r)^{<=m}_{l,n} = F(r)_{l,n}, by enumeration.
inline long long fock_saturation_index(int r, Bidegree d) {
    if (d.n < 0) return 0;
    auto full = enumerate_basis(r, int(d.l), d.n).size();
    for (long long m = 0;; ++m)
        if (enumerate_basis(r, int(d.l), d.n, int(m)).size() == full) return m;
}

/// Least m with (W (x) F(r)^{<=m})_{l,n} = (W (x) F(r))_{l,n}, and the full rank.
inline std::pair<long long, std::size_t> model_saturation(const StandardModel& V, Bidegree d) {
    long long m = 0;
    std::size_t total = 0;
    for (std::size_t w = 0; w < V.w_dim(); ++w) {
        long long rest = d.n - V.w_weight(w);
        if (rest < 0) continue;
        auto n = enumerate_basis(V.rank(), int(d.l), rest).size();
        total += n;
        if (n) m = std::max(m, fock_saturation_index(V.rank(), {d.l, rest}));
    }
    return {m, total};
}

/// H_infinity(V) on a window: each piece is represented by t^M V at one common level M.
class ColimitWindow {
public:
    ColimitWindow(const BigradedRep& V, long long M) : V_(&V), M_(M), modes_(V) {}

    long long level() const { return M_; }
    Bidegree representative(Bidegree d) const { return orbit_point(V_->rank(), d, M_); }
    std::size_t dim(Bidegree d) const { return V_->dim(representative(d)); }

    /// E(t^M v) = t^M e v.
    GradedMap E(Bidegree d) const {
        auto m = V_->op(RepOp::E, 0, representative(d));
        return {d, op_target(RepOp::E, V_->rank(), d), std::move(m.m)};
    }
    /// F(t^M v) = t^{M+1} v, rewritten at level M through the inverse transition map.
    GradedMap F(Bidegree d) const {
        auto t = op_target(RepOp::F, V_->rank(), d);
        auto e = V_->op(RepOp::E, 0, representative(t));
        if (e.target != representative(d)) throw std::logic_error("ColimitWindow: F lands off the orbit");
        return {d, t, unimodular_inverse(e.m)};
    }
    /// P_{a,i}(t^M v) = t^M p_{a-M,i} v, and likewise for Q.
    GradedMap fermion(RepOp k, int a, int i, Bidegree d) {
        if (a > M_) throw std::out_of_range("ColimitWindow: mode above the representative level");
        auto g = modes_.get(k, int(a - M_), i, representative(d));
        Bidegree t = op_target(k, V_->rank(), d, a);
        if (g.target != representative(t)) throw std::logic_error("ColimitWindow: fermion lands off the orbit");
        return {d, t, std::move(g.m)};
    }

private:
    const BigradedRep* V_;
    long long M_;
    InductiveModes modes_;
};

struct FockStructureReport {
    bool ok = true;
    long long level = 0;
    std::size_t pieces = 0, rank_checks = 0, operator_checks = 0;
    std::vector<std::string> failures;
    void record(bool pass, std::size_t& counter, const std::string& what) {
        ++counter;
        if (!pass) {
            ok = false;
            failures.push_back(what);
        }
    }
};

/// H_infinity(V) vs W (x) F(r) on charges [l_lo, l_hi] and weights [floor, n_hi]: ranks, and
/// E, F, P_{a,i}, Q_{a,i} against the Fock operators through t^M (w (x) d) -> w (x) d shifted up by M.
/// Each operator is also checked to land in the piece predicted by its (charge, weight) shift.
inline FockStructureReport fock_structure(const StandardModel& V, long long l_lo, long long l_hi, long long n_hi,
                                          int a_lo = -1, int a_hi = 1) {
    const int r = V.rank();
    long long M = std::max(a_hi, 0);
    for (long long l = l_lo; l <= l_hi; ++l)
        for (long long n = V.floor(); n <= n_hi; ++n) {
            Bidegree d{l, n};
            std::vector<Bidegree> touched{d, op_target(RepOp::E, r, d), op_target(RepOp::F, r, d)};
            for (int a = a_lo; a <= a_hi; ++a) {
                touched.push_back(op_target(RepOp::P, r, d, a));
                touched.push_back(op_target(RepOp::Q, r, d, a));
            }
            for (const auto& t : touched) M = std::max(M, model_saturation(V, t).first);
        }
    FockStructureReport rep;
    rep.level = M;
    ColimitWindow H(V, M);

    auto fock_index = [&](Bidegree d) {
        std::map<StandardModel::Label, std::size_t> idx;
        const auto& labs = V.labels(H.representative(d));
        for (std::size_t j = 0; j < labs.size(); ++j) idx.emplace(StandardModel::Label{labs[j].first, labs[j].second.shifted(int(M))}, j);
        return idx;
    };
    auto compare = [&](const GradedMap& g, const FockOp& op, const std::string& name) {
        const auto& src = V.labels(H.representative(g.source));
        auto dst = fock_index(g.target);
        SparseIntMap expect(g.m.rows(), g.m.cols());
        bool lands = true;
        for (std::size_t j = 0; j < src.size(); ++j) {
            const auto& [w, dia] = src[j];
            for (const auto& [img, c] : op(dia.shifted(int(M)))) {
                auto it = dst.find({w, img});
                if (it == dst.end() || charge(img) != g.target.l || V.w_weight(w) + weight(img) != g.target.n) {
                    lands = false;
                    continue;
                }
                expect.add_to(it->second, j, c);
            }
        }
        rep.record(lands && expect == g.m, rep.operator_checks, name + " " + g.source.str());
    };

    for (long long l = l_lo; l <= l_hi; ++l)
        for (long long n = V.floor(); n <= n_hi; ++n) {
            Bidegree d{l, n};
            ++rep.pieces;
            auto [m_sat, full] = model_saturation(V, d);
            rep.record(H.dim(d) == full, rep.rank_checks, "rank " + d.str());
            try {
                compare(H.E(d), op_shift(ShiftDir::E), "E");
                compare(H.F(d), op_shift(ShiftDir::F), "F");
                for (int i = 0; i < r; ++i)
                    for (int a = a_lo; a <= a_hi; ++a) {
                        compare(H.fermion(RepOp::P, a, i, d), op_fermion(GenKind::P, a, i), "P_" + std::to_string(a) + "," + std::to_string(i));
                        compare(H.fermion(RepOp::Q, a, i, d), op_fermion(GenKind::Q, a, i), "Q_" + std::to_string(a) + "," + std::to_string(i));
                    }
            } catch (const std::exception& ex) {
                rep.record(false, rep.operator_checks, std::string(ex.what()) + " " + d.str());
            }
        }
    return rep;
}

struct TrajectoryPoint {
    long long step = 0;
    Bidegree at;
    /// (x, y) = (n_m, -l_m).
    long long x() const { return at.n; }
    long long y() const { return -at.l; }
};

inline bool on_parabola(int r, Bidegree origin, long long x, long long y) {
    return 2 * r * (x - origin.n) == (y + origin.l) * (y - r - origin.l);
}

inline std::vector<TrajectoryPoint> trajectory(int r, Bidegree origin, long long m_lo, long long m_hi) {
    if (r < 1) throw std::invalid_argument("trajectory: rank must be positive");
    std::vector<TrajectoryPoint> out;
    for (long long m = m_lo; m <= m_hi; ++m) {
        TrajectoryPoint p{m, orbit_point(r, origin, m)};
        if (!on_parabola(r, origin, p.x(), p.y())) throw std::logic_error("trajectory: point off the parabola");
        out.push_back(p);
    }
    return out;
}

/// The unique (origin with 1-r <= l' <= 0, step m >= 0) whose trajectory passes through d.
inline std::pair<Bidegree, long long> trajectory_origin(int r, Bidegree d) {
    if (d.l > 0) throw std::invalid_argument("trajectory_origin: charge must be <= 0");
    long long m = (-d.l) / r;
    long long l0 = d.l + m * r;
    long long n0 = d.n + m * l0 - m * (m - 1) * r / 2;
    return {{l0, n0}, m};
}

struct FoliationReport {
    bool ok = true;
    std::size_t points = 0;
    std::vector<std::string> failures;
};

/// Every point of [l_lo, l_hi] x [n_lo, n_hi] (l_hi <= 0) lies on exactly one trajectory with 1-r <= l' <= 0.
inline FoliationReport foliation_check(int r, long long l_lo, long long l_hi, long long n_lo, long long n_hi) {
    if (l_hi > 0) throw std::invalid_argument("foliation_check: region needs l <= 0");
    FoliationReport rep;
    std::set<Bidegree> origins;
    for (long long l = l_lo; l <= l_hi; ++l)
        for (long long n = n_lo; n <= n_hi; ++n) {
            auto [o, m] = trajectory_origin(r, {l, n});
            if (o.l > 0 || o.l < 1 - r || m < 0 || orbit_point(r, o, m) != Bidegree{l, n}) {
                rep.ok = false;
                rep.failures.push_back("inversion " + Bidegree{l, n}.str());
            }
            origins.insert(o);
        }
    long long n_min = origins.empty() ? 0 : origins.begin()->n, n_max = n_min;
    for (const auto& o : origins) {
        n_min = std::min(n_min, o.n);
        n_max = std::max(n_max, o.n);
    }
    std::map<Bidegree, int> hits;
    const long long steps = (-l_lo) / r + 1;
    for (long long l0 = 1 - r; l0 <= 0; ++l0)
        for (long long n0 = n_min - 1; n0 <= n_max + 1; ++n0)
            for (long long m = 0; m <= steps; ++m) {
                auto p = orbit_point(r, {l0, n0}, m);
                if (p.l >= l_lo && p.l <= l_hi && p.n >= n_lo && p.n <= n_hi) ++hits[p];
            }
    for (long long l = l_lo; l <= l_hi; ++l)
        for (long long n = n_lo; n <= n_hi; ++n) {
            ++rep.points;
            if (hits[{l, n}] != 1) {
                rep.ok = false;
                rep.failures.push_back("covered " + std::to_string(hits[{l, n}]) + " times " + Bidegree{l, n}.str());
            }
        }
    return rep;
}

/// Whether O(a) and O(b) share a point among their first `steps` steps.
inline bool trajectories_meet(int r, Bidegree a, Bidegree b, long long steps) {
    std::set<Bidegree> pa;
    for (long long m = 0; m <= steps; ++m) pa.insert(orbit_point(r, a, m));
    for (long long m = 0; m <= steps; ++m)
        if (pa.count(orbit_point(r, b, m))) return true;
    return false;
}

inline std::string trajectory_svg(int r, Bidegree origin, const std::vector<TrajectoryPoint>& pts) {
    long long x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    for (const auto& p : pts) {
        x_lo = std::min(x_lo, p.x());
        x_hi = std::max(x_hi, p.x());
        y_lo = std::min(y_lo, p.y());
        y_hi = std::max(y_hi, p.y());
    }
    x_lo -= 1;
    x_hi += 1;
    y_lo -= 1;
    y_hi += 1;
    const double cell = 24, pad = 30;
    const double W = double(x_hi - x_lo) * cell + 2 * pad, H = double(y_hi - y_lo) * cell + 2 * pad;
    auto px = [&](double x) { return pad + (x - double(x_lo)) * cell; };
    auto py = [&](double y) { return H - pad - (y - double(y_lo)) * cell; };
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (long long x = x_lo; x <= x_hi; ++x)
        for (long long y = y_lo; y <= y_hi; ++y)
            s << "<circle cx=\"" << px(double(x)) << "\" cy=\"" << py(double(y)) << "\" r=\"1.5\" fill=\"#bbb\"/>\n";
    s << "<line x1=\"" << px(double(x_lo)) << "\" y1=\"" << py(0) << "\" x2=\"" << px(double(x_hi)) << "\" y2=\"" << py(0) << "\" stroke=\"#888\"/>\n";
    s << "<line x1=\"" << px(0) << "\" y1=\"" << py(double(y_lo)) << "\" x2=\"" << px(0) << "\" y2=\"" << py(double(y_hi)) << "\" stroke=\"#888\"/>\n";
    s << "<polyline fill=\"none\" stroke=\"#c33\" stroke-width=\"1.5\" points=\"";
    for (double y = double(y_lo); y <= double(y_hi) + 1e-9; y += 0.125) {
        double x = double(origin.n) + (y + double(origin.l)) * (y - r - double(origin.l)) / (2.0 * r);
        if (x < double(x_lo) || x > double(x_hi)) continue;
        s << px(x) << ',' << py(y) << ' ';
    }
    s << "\"/>\n";
    for (const auto& p : pts)
        s << "<circle cx=\"" << px(double(p.x())) << "\" cy=\"" << py(double(p.y())) << "\" r=\"4\" fill=\"#36c\"><title>m=" << p.step
          << " (l,n)=" << p.at.str() << "</title></circle>\n";
    s << "<text x=\"" << pad << "\" y=\"" << pad / 2 << "\" font-family=\"monospace\" font-size=\"12\">r=" << r << " O" << origin.str()
      << " in (x,y)=(n,-l)</text>\n";
    s << "</svg>\n";
    return s.str();
}

/// Rows are y = -l from top to bottom, columns x = n; orbit points are '*', the origin 'o'.
inline std::string trajectory_ascii(const std::vector<TrajectoryPoint>& pts) {
    if (pts.empty()) return "";
    long long x_lo = pts[0].x(), x_hi = x_lo, y_lo = pts[0].y(), y_hi = y_lo;
    for (const auto& p : pts) {
        x_lo = std::min(x_lo, p.x());
        x_hi = std::max(x_hi, p.x());
        y_lo = std::min(y_lo, p.y());
        y_hi = std::max(y_hi, p.y());
    }
    std::set<std::pair<long long, long long>> on;
    for (const auto& p : pts) on.insert({p.x(), p.y()});
    std::string out;
    for (long long y = y_hi; y >= y_lo; --y) {
        for (long long x = x_lo; x <= x_hi; ++x)
            out += on.count({x, y}) ? (x == pts[0].x() && y == pts[0].y() ? 'o' : '*') : '.';
        out += '\n';
    }
    return out;
}

} // namespace fermionlab
