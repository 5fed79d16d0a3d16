#pragma once

#include "clifford.hpp"
#include "fock.hpp"
#include "linalg.hpp"
#include "sparse_map.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermionlab {

enum class OrderKind { Lex, WeightCompatible, Custom };

inline const char* order_name(OrderKind k) {
    switch (k) {
    case OrderKind::Lex: return "lex";
    case OrderKind::WeightCompatible: return "weight";
    default: return "custom";
    }
}

/// A total order on the subsets of [r], stored as the ascending sequence.
struct TotalOrder {
    int r = 0;
    OrderKind kind = OrderKind::Custom;
    std::vector<Mask> seq;
    std::vector<std::size_t> pos;

    static TotalOrder from_sequence(int r, std::vector<Mask> seq, OrderKind kind = OrderKind::Custom) {
        std::size_t n = std::size_t(1) << r;
        if (seq.size() != n) throw std::invalid_argument("TotalOrder: sequence is not a permutation of the subsets");
        TotalOrder o{r, kind, std::move(seq), std::vector<std::size_t>(n, n)};
        for (std::size_t k = 0; k < n; ++k) {
            if (o.seq[k] >= n || o.pos[o.seq[k]] != n)
                throw std::invalid_argument("TotalOrder: sequence is not a permutation of the subsets");
            o.pos[o.seq[k]] = k;
        }
        return o;
    }

    static std::vector<Mask> all_masks(int r) {
        std::vector<Mask> v(std::size_t(1) << r);
        for (std::size_t b = 0; b < v.size(); ++b) v[b] = Mask(b);
        return v;
    }

    /// Lexicographic on (i_{d-1}, ..., i_0, -1, -1, ...), which is the numeric order of the bitmasks.
    static TotalOrder lex(int r) { return from_sequence(r, all_masks(r), OrderKind::Lex); }

    /// Ascending weight, ties broken by bitmask.
    static TotalOrder weight_compatible(int r) {
        auto v = all_masks(r);
        std::sort(v.begin(), v.end(), [r](Mask a, Mask b) {
            int wa = IndexSubset(a, r).wt(), wb = IndexSubset(b, r).wt();
            return wa != wb ? wa < wb : a < b;
        });
        return from_sequence(r, std::move(v), OrderKind::WeightCompatible);
    }

    bool less(Mask a, Mask b) const { return pos.at(a) < pos.at(b); }

    bool is_weight_compatible() const {
        for (std::size_t k = 1; k < seq.size(); ++k)
            if (IndexSubset(seq[k], r).wt() < IndexSubset(seq[k - 1], r).wt()) return false;
        return true;
    }
};

/// Maps e_I : W -> V and f_I : V -> W indexed by subset bitmask.
struct SemiOrthFamily {
    int r = 0;
    std::size_t w_dim = 0, v_dim = 0;
    std::vector<SparseIntMap> e, f;
    TotalOrder order;

    void validate() const {
        std::size_t n = std::size_t(1) << r;
        if (e.size() != n || f.size() != n || order.seq.size() != n || order.r != r)
            throw std::invalid_argument("SemiOrthFamily: expected one map per subset and a matching order");
        for (std::size_t I = 0; I < n; ++I) {
            if (e[I].rows() != v_dim || e[I].cols() != w_dim)
                throw std::invalid_argument("SemiOrthFamily: e_I has the wrong shape");
            if (f[I].rows() != w_dim || f[I].cols() != v_dim)
                throw std::invalid_argument("SemiOrthFamily: f_I has the wrong shape");
        }
    }
};

inline std::string subset_label(Mask b, int r) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (int x : IndexSubset(b, r).elements()) {
        os << (first ? "" : ",") << x;
        first = false;
    }
    os << '}';
    return os.str();
}

class SemiOrthogonalityError : public std::runtime_error {
public:
    SemiOrthogonalityError(Mask i, Mask j, int r)
        : std::runtime_error("semi-orthogonality fails: f_" + subset_label(i, r) + " e_" + subset_label(j, r)),
          larger(i), smaller(j) {}
    Mask larger, smaller;
};

/// First pair I >= J with f_I e_J != delta_IJ, scanning in order.
inline std::optional<std::pair<Mask, Mask>> semi_orth_witness(const SemiOrthFamily& fam) {
    fam.validate();
    const auto id = SparseIntMap::identity(fam.w_dim);
    const auto zero = SparseIntMap(fam.w_dim, fam.w_dim);
    const auto& s = fam.order.seq;
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            auto prod = fam.f[s[a]] * fam.e[s[b]];
            if (!(prod == (a == b ? id : zero))) return std::make_pair(s[a], s[b]);
        }
    return std::nullopt;
}

struct OrthFamily {
    int r = 0;
    std::size_t w_dim = 0, v_dim = 0;
    std::vector<SparseIntMap> e, f;
    SparseIntMap gamma;
};

/// f_I = f_I * X_{next} ... X_{last} with X_J = id - e_J f_J; the largest factor acts first.
inline OrthFamily orthogonalize(const SemiOrthFamily& fam) {
    if (auto w = semi_orth_witness(fam)) throw SemiOrthogonalityError(w->first, w->second, fam.r);
    const std::size_t n = fam.order.seq.size();
    const auto idv = SparseIntMap::identity(fam.v_dim);
    OrthFamily out{fam.r, fam.w_dim, fam.v_dim, fam.e, std::vector<SparseIntMap>(n), {}};
    auto acc = idv;
    for (std::size_t k = n; k-- > 0;) {
        Mask J = fam.order.seq[k];
        out.f[J] = fam.f[J] * acc;
        acc = (idv - fam.e[J] * fam.f[J]) * acc;
    }
    out.gamma = std::move(acc);
    const auto idw = SparseIntMap::identity(fam.w_dim);
    const auto zero = SparseIntMap(fam.w_dim, fam.w_dim);
    for (std::size_t I = 0; I < n; ++I)
        for (std::size_t J = 0; J < n; ++J)
            if (!(out.f[J] * out.e[I] == (I == J ? idw : zero)))
                throw std::logic_error("orthogonalize: f_" + subset_label(Mask(J), fam.r) + " e_" +
                                       subset_label(Mask(I), fam.r) + " is not delta");
    return out;
}

inline SparseIntMap projector_sum(const OrthFamily& o) {
    SparseIntMap s(o.v_dim, o.v_dim);
    for (std::size_t I = 0; I < o.e.size(); ++I) s += o.e[I] * o.f[I];
    return s;
}

/// Product of all correction factors; checked against id - sum e_I f_I.
inline SparseIntMap gamma_defect(const SemiOrthFamily& fam) {
    auto o = orthogonalize(fam);
    if (!(o.gamma == SparseIntMap::identity(o.v_dim) - projector_sum(o)))
        throw std::logic_error("gamma_defect: product form disagrees with id - sum e_I f_I");
    return o.gamma;
}

/// W (x) F(r) -> V with column w * 2^r + I equal to e_I applied to w.
inline SparseIntMap assemble_ehat(const OrthFamily& o) {
    SparseIntMap m(o.v_dim, o.w_dim << o.r);
    for (std::size_t I = 0; I < o.e.size(); ++I)
        o.e[I].for_each([&](std::size_t i, std::size_t w, const BigInt& v) { m.set(i, (w << o.r) | I, v); });
    return m;
}

inline SparseIntMap assemble_fhat(const OrthFamily& o) {
    SparseIntMap m(o.w_dim << o.r, o.v_dim);
    for (std::size_t I = 0; I < o.f.size(); ++I)
        o.f[I].for_each([&](std::size_t w, std::size_t j, const BigInt& v) { m.set((w << o.r) | I, j, v); });
    return m;
}

struct Recovery {
    ClRep action;
    RelationReport report;
};

/// p_i = sum_{I not containing i} sign e_I f_{I+i}, q_i = sum sign e_{I+i} f_I, then every
/// identity a Clifford model must satisfy is checked.
inline Recovery recover_pq(const OrthFamily& o) {
    const int r = o.r;
    const std::size_t n = std::size_t(1) << r;
    Recovery out{ClRep{r, o.v_dim, {}, {}}, {}};
    for (int i = 0; i < r; ++i) {
        SparseIntMap p(o.v_dim, o.v_dim), q(o.v_dim, o.v_dim);
        Mask bit = Mask(1) << i;
        for (Mask I = 0; I < n; ++I) {
            if (I & bit) continue;
            BigInt s = sign_of_parity(IndexSubset(I, r).count_below(i));
            p += s * (o.e[I] * o.f[I | bit]);
            q += s * (o.e[I | bit] * o.f[I]);
        }
        out.action.p.push_back(std::move(p));
        out.action.q.push_back(std::move(q));
    }
    out.report = check_relations(out.action);
    auto& rep = out.report;
    const auto& e = o.e[0];
    const auto& f = o.f[0];
    for (Mask I = 0; I < n; ++I) {
        IndexSubset S(I, r);
        rep.record(o.e[I] == ordered_word(S, GenKind::Q, out.action) * e, "e_" + subset_label(I, r) + " = q_I e");
        rep.record(o.f[I] == f * ordered_word(S, GenKind::P, out.action), "f_" + subset_label(I, r) + " = f p_I");
    }
    const SparseIntMap zero_vw(o.v_dim, o.w_dim), zero_wv(o.w_dim, o.v_dim);
    for (int i = 0; i < r; ++i) {
        rep.record(out.action.p[i] * e == zero_vw, "p_" + std::to_string(i) + " e = 0");
        rep.record(f * out.action.q[i] == zero_wv, "f q_" + std::to_string(i) + " = 0");
    }
    rep.record(f * e == SparseIntMap::identity(o.w_dim), "f e = id");
    auto full = IndexSubset::full(r);
    rep.record(e * f == ordered_word(full, GenKind::P, out.action) * ordered_word(full, GenKind::Q, out.action),
               "e f = p_[r] q_[r]");
    return out;
}

struct EquivalenceReport {
    bool ehat_bijective = false;
    bool gamma_zero = false;
    bool clifford_model = false;
    bool agree = false;
    std::size_t gamma_rank = 0;
    std::vector<std::string> model_failures;
};

inline EquivalenceReport family_equivalence(const SemiOrthFamily& fam) {
    auto o = orthogonalize(fam);
    EquivalenceReport rep;
    auto eh = assemble_ehat(o);
    rep.ehat_bijective = eh.rows() == eh.cols() && is_unimodular(eh);
    rep.gamma_zero = o.gamma.is_zero();
    rep.gamma_rank = rank(o.gamma);
    auto rec = recover_pq(o);
    rep.clifford_model = rec.report.ok;
    rep.model_failures = rec.report.failures;
    rep.agree = rep.ehat_bijective == rep.gamma_zero && rep.gamma_zero == rep.clifford_model;
    if (!(eh * assemble_fhat(o) == SparseIntMap::identity(o.v_dim) - o.gamma))
        throw std::logic_error("family_equivalence: ehat fhat != id - gamma");
    if (!(assemble_fhat(o) * eh == SparseIntMap::identity(eh.cols())))
        throw std::logic_error("family_equivalence: fhat ehat != id");
    return rep;
}

/// Random unimodular matrix and its inverse built from elementary row operations.
inline std::pair<SparseIntMap, SparseIntMap> random_unimodular(std::size_t n, std::mt19937_64& rng, int steps = 0) {
    auto g = SparseIntMap::identity(n);
    auto gi = SparseIntMap::identity(n);
    if (n < 2) return {g, gi};
    if (steps == 0) steps = int(3 * n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    for (int s = 0; s < steps; ++s) {
        auto a = pick(rng), b = pick(rng);
        int c = coef(rng);
        if (a == b || c == 0) continue;
        auto el = SparseIntMap::identity(n);
        el.set(a, b, c);
        auto eli = SparseIntMap::identity(n);
        eli.set(a, b, -c);
        g = el * g;
        gi = gi * eli;
    }
    return {g, gi};
}

inline SparseIntMap random_int_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int bound = 2) {
    std::uniform_int_distribution<int> d(-bound, bound);
    SparseIntMap m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (int v = d(rng)) m.set(i, j, v);
    return m;
}

/// Family on V = Z^(w 2^r + extra) obtained from the standard model by a random change of basis
/// and upper-triangular corrections; extra > 0 leaves a complement the images miss.
inline SemiOrthFamily random_family(int r, std::size_t w, std::size_t extra, const TotalOrder& order,
                                    std::mt19937_64& rng, bool scramble = true) {
    const std::size_t n = std::size_t(1) << r;
    const std::size_t core = w << r, vd = core + extra;
    auto [g, gi] = scramble ? random_unimodular(vd, rng) : std::make_pair(SparseIntMap::identity(vd), SparseIntMap::identity(vd));
    SemiOrthFamily fam{r, w, vd, std::vector<SparseIntMap>(n), std::vector<SparseIntMap>(n), order};
    std::vector<SparseIntMap> f0(n);
    for (Mask I = 0; I < n; ++I) {
        SparseIntMap emb(vd, w), proj(w, vd);
        for (std::size_t x = 0; x < w; ++x) {
            emb.set((x << r) | I, x, 1);
            proj.set(x, (x << r) | I, 1);
        }
        if (extra > 0) {
            auto tail = random_int_matrix(w, extra, rng);
            tail.for_each([&](std::size_t i, std::size_t j, const BigInt& v) { proj.set(i, core + j, v); });
        }
        fam.e[I] = g * emb;
        f0[I] = proj * gi;
    }
    for (Mask I = 0; I < n; ++I) {
        fam.f[I] = f0[I];
        for (Mask K = 0; K < n; ++K)
            if (order.less(I, K) && rng() % 2 == 0) fam.f[I] += random_int_matrix(w, w, rng) * f0[K];
    }
    return fam;
}

/// Action of e, f, p_i, q_i of the extended algebra on a truncated module.
struct ExtendedAction {
    int r = 0;
    std::size_t dim = 0;
    TruncatedOperator e, f;
    std::vector<TruncatedOperator> p, q;

    TruncatedOperator word(Mask I, GenKind k, const std::vector<TruncatedOperator>& gens) const {
        auto out = TruncatedOperator::identity(dim);
        auto els = IndexSubset(I, r).elements();
        if (k == GenKind::P)
            for (int a : els) out = gens.at(a) * out;
        else
            for (auto it = els.rbegin(); it != els.rend(); ++it) out = gens.at(*it) * out;
        return out;
    }
    TruncatedOperator p_word(Mask I) const { return word(I, GenKind::P, p); }
    TruncatedOperator q_word(Mask I) const { return word(I, GenKind::Q, q); }
    TruncatedOperator e_of(Mask I) const { return q_word(I) * e; }
    TruncatedOperator f_of(Mask I) const { return f * p_word(I); }
};

/// Relation checks on a truncation: each records the number of exact columns it compared.
struct ExactReport {
    bool ok = true;
    std::size_t checked = 0;
    std::size_t vacuous = 0;
    std::size_t columns = 0;
    std::vector<std::string> failures;

    void compare(const TruncatedOperator& x, const TruncatedOperator& y, const std::string& what) {
        ++checked;
        std::size_t cols = 0;
        bool good = true;
        for (std::size_t j = 0; j < x.cols(); ++j) {
            if (!x.exact[j] || !y.exact.at(j)) continue;
            ++cols;
            if (x.map.column(j) != y.map.column(j)) good = false;
        }
        columns += cols;
        if (cols == 0) ++vacuous;
        if (!good) {
            ok = false;
            failures.push_back(what);
        }
    }
    void merge(const ExactReport& o) {
        ok = ok && o.ok;
        checked += o.checked;
        vacuous += o.vacuous;
        columns += o.columns;
        failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    }
};

inline ExactReport check_extended_relations(const ExtendedAction& act) {
    ExactReport rep;
    const auto zero = TruncatedOperator::exact_map(SparseIntMap(act.dim, act.dim));
    const auto id = TruncatedOperator::identity(act.dim);
    for (int i = 0; i < act.r; ++i) {
        rep.compare(act.p[i] * act.e, zero, "p_" + std::to_string(i) + " e = 0");
        rep.compare(act.f * act.q[i], zero, "f q_" + std::to_string(i) + " = 0");
    }
    rep.compare(act.f * act.e, id, "f e = id");
    Mask full = IndexSubset::full(act.r).bits;
    rep.compare(act.e * act.f, act.p_word(full) * act.q_word(full), "e f = p_[r] q_[r]");
    return rep;
}

class ExtendedRelationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NegativeModes {
    int a_min = 0;
    std::map<int, std::vector<TruncatedOperator>> p, q;
    ExactReport intertwining, clifford;
};

/// p_{a,i} = sum_I (-1)^len(I) e_I p_{a+1,i} f_I for a_min <= a < 0, likewise for q.
inline NegativeModes negative_modes(const ExtendedAction& act, int a_min) {
    if (a_min > 0) throw std::invalid_argument("negative_modes: depth must be <= 0");
    auto pre = check_extended_relations(act);
    if (!pre.ok) throw ExtendedRelationError("negative_modes: extended relations fail: " + pre.failures.front());
    const std::size_t n = std::size_t(1) << act.r;
    std::vector<TruncatedOperator> eI(n), fI(n);
    for (Mask I = 0; I < n; ++I) {
        eI[I] = act.e_of(I);
        fI[I] = act.f_of(I);
    }
    NegativeModes out;
    out.a_min = a_min;
    out.p[0] = act.p;
    out.q[0] = act.q;
    auto lower = [&](const TruncatedOperator& x) {
        std::vector<TruncatedOperator> terms(n);
        parallel_for(n, [&](std::size_t I) {
            terms[I] = BigInt(sign_of_parity(std::popcount(Mask(I)))) * (eI[I] * (x * fI[I]));
        });
        auto acc = terms[0];
        for (std::size_t I = 1; I < n; ++I) acc = acc + terms[I];
        return acc;
    };
    for (int a = -1; a >= a_min; --a)
        for (int i = 0; i < act.r; ++i) {
            out.p[a].push_back(lower(out.p[a + 1][i]));
            out.q[a].push_back(lower(out.q[a + 1][i]));
        }
    for (int a = 0; a > a_min; --a)
        for (int i = 0; i < act.r; ++i) {
            auto tag = "(" + std::to_string(a) + "," + std::to_string(i) + ")";
            out.intertwining.compare(act.e * out.p[a][i], out.p[a - 1][i] * act.e, "e p" + tag + " = p" + tag + "- e");
            out.intertwining.compare(act.f * out.p[a - 1][i], out.p[a][i] * act.f, "f p" + tag + "- = p" + tag + " f");
            out.intertwining.compare(act.e * out.q[a][i], out.q[a - 1][i] * act.e, "e q" + tag + " = q" + tag + "- e");
            out.intertwining.compare(act.f * out.q[a - 1][i], out.q[a][i] * act.f, "f q" + tag + "- = q" + tag + " f");
        }
    const auto zero = TruncatedOperator::exact_map(SparseIntMap(act.dim, act.dim));
    const auto id = TruncatedOperator::identity(act.dim);
    for (int a = 0; a >= a_min; --a)
        for (int b = 0; b >= a_min; --b)
            for (int i = 0; i < act.r; ++i)
                for (int j = 0; j < act.r; ++j) {
                    auto tag = "(" + std::to_string(a) + "," + std::to_string(i) + "),(" + std::to_string(b) + "," +
                               std::to_string(j) + ")";
                    out.clifford.compare(anticommutator(out.p[a][i], out.p[b][j]), zero, "{p,p}" + tag);
                    out.clifford.compare(anticommutator(out.q[a][i], out.q[b][j]), zero, "{q,q}" + tag);
                    out.clifford.compare(anticommutator(out.p[a][i], out.q[b][j]), a == b && i == j ? id : zero,
                                         "{p,q}" + tag);
                }
    return out;
}

/// The part of the Fock space empty above level 0, truncated by charge and weight.
struct StandardTruncatedModel {
    FockTruncation t;
    ExtendedAction act;

    std::vector<long long> degree(std::size_t j) const {
        const auto& d = t.basis[j];
        return {charge(d), weight(d), coho(d)};
    }
    std::vector<std::vector<long long>> degrees() const {
        std::vector<std::vector<long long>> out(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) out[j] = degree(j);
        return out;
    }
};

inline StandardTruncatedModel standard_truncated_model(int r, int l_lo, int N) {
    StandardTruncatedModel m{FockTruncation(r, l_lo, 0, N, 0), {}};
    StandardOps ops{r};
    m.act.r = r;
    m.act.dim = m.t.size();
    m.act.e = realize(m.t, ops.e());
    m.act.f = realize(m.t, ops.f());
    for (int i = 0; i < r; ++i) {
        m.act.p.push_back(realize(m.t, ops.p(i)));
        m.act.q.push_back(realize(m.t, ops.q(i)));
    }
    return m;
}

using Degree = std::vector<long long>;
using ShiftRule = std::function<Degree(const Degree& src)>;

struct AuditRow {
    std::string table, name;
    bool pass = false;
    std::size_t checked = 0, mismatches = 0;
    std::string example;
};

struct AuditTable {
    std::vector<AuditRow> rows;
    bool all_pass() const {
        return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const AuditRow& r) { return r.pass; });
    }
    std::vector<std::string> failures() const {
        std::vector<std::string> out;
        for (const auto& r : rows)
            if (!r.pass) out.push_back(r.table + ":" + r.name);
        return out;
    }
};

inline std::string degree_str(const Degree& d) {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < d.size(); ++k) os << (k ? "," : "") << d[k];
    os << ')';
    return os.str();
}

/// Compares the degree shift of every nonzero exact entry of op with the expected rule.
inline AuditRow audit_map(const std::string& table, const std::string& name, const TruncatedOperator& op,
                          const std::vector<Degree>& src, const std::vector<Degree>& dst, const ShiftRule& expected) {
    AuditRow row{table, name, false, 0, 0, {}};
    for (std::size_t j = 0; j < op.cols(); ++j) {
        if (!op.exact[j]) continue;
        for (const auto& [i, v] : op.map.column(j)) {
            ++row.checked;
            Degree shift(src[j].size());
            for (std::size_t k = 0; k < shift.size(); ++k) shift[k] = dst[i][k] - src[j][k];
            auto want = expected(src[j]);
            if (shift != want) {
                if (row.mismatches++ == 0)
                    row.example = "source " + degree_str(src[j]) + " shift " + degree_str(shift) + " expected " +
                                  degree_str(want);
            }
        }
    }
    row.pass = row.checked > 0 && row.mismatches == 0;
    return row;
}

inline AuditRow audit_map(const std::string& table, const std::string& name, const SparseIntMap& op,
                          const std::vector<Degree>& src, const std::vector<Degree>& dst, const ShiftRule& expected) {
    return audit_map(table, name, TruncatedOperator::exact_map(op), src, dst, expected);
}

inline ShiftRule constant_shift(Degree d) {
    return [d](const Degree&) { return d; };
}

enum class SubsetGrading { Length, Weight };

inline long long subset_degree(Mask I, int r, SubsetGrading g) {
    IndexSubset S(I, r);
    return g == SubsetGrading::Length ? S.len() : S.wt();
}

/// Degrees on W (x) F(r): w * 2^r + I gets w_deg[w] + deg(I).
inline std::vector<Degree> tensor_degrees(const std::vector<long long>& w_deg, int r, SubsetGrading g) {
    std::vector<Degree> out;
    for (long long dw : w_deg)
        for (Mask I = 0; I < (Mask(1) << r); ++I) out.push_back({dw + subset_degree(I, r, g)});
    return out;
}

/// Shifts of e, f, p_i, q_i, e_I and of the dual operators on a graded Clifford model.
inline AuditTable clifford_grading_audit(const OrthFamily& o, const ClRep& action, const std::vector<Degree>& w_deg,
                                         const std::vector<Degree>& v_deg, SubsetGrading g) {
    const int r = o.r;
    const std::string table = g == SubsetGrading::Length ? "length" : "weight";
    const std::string dual = g == SubsetGrading::Length ? "dual-length" : "dual-weight";
    const long long top = g == SubsetGrading::Length ? r : r * (r - 1) / 2;
    const Mask full = IndexSubset::full(r).bits;
    AuditTable t;
    t.rows.push_back(audit_map(table, "e", o.e[0], w_deg, v_deg, constant_shift({0})));
    t.rows.push_back(audit_map(table, "f", o.f[0], v_deg, w_deg, constant_shift({0})));
    for (int i = 0; i < r; ++i) {
        long long s = g == SubsetGrading::Length ? 1 : i;
        t.rows.push_back(audit_map(table, "p_" + std::to_string(i), action.p[i], v_deg, v_deg, constant_shift({-s})));
        t.rows.push_back(audit_map(table, "q_" + std::to_string(i), action.q[i], v_deg, v_deg, constant_shift({s})));
    }
    for (Mask I = 0; I <= full; ++I)
        t.rows.push_back(audit_map(table, "e_" + subset_label(I, r), o.e[I], w_deg, v_deg,
                                   constant_shift({subset_degree(I, r, g)})));
    t.rows.push_back(audit_map(dual, "e~", o.e[full], w_deg, v_deg, constant_shift({top})));
    t.rows.push_back(audit_map(dual, "f~", o.f[full], v_deg, w_deg, constant_shift({-top})));
    for (int i = 0; i < r; ++i) {
        long long s = g == SubsetGrading::Length ? 1 : i;
        t.rows.push_back(audit_map(dual, "p~_" + std::to_string(i), action.q[i], v_deg, v_deg, constant_shift({s})));
        t.rows.push_back(audit_map(dual, "q~_" + std::to_string(i), action.p[i], v_deg, v_deg, constant_shift({-s})));
    }
    for (Mask I = 0; I <= full; ++I)
        t.rows.push_back(audit_map(dual, "e~_" + subset_label(I, r), o.e[full & ~I], w_deg, v_deg,
                                   constant_shift({top - subset_degree(I, r, g)})));
    return t;
}

/// Published shift tables for p_{0,i}, q_{0,i}, e, f, e_[r], f_[r] on the standard truncated model,
/// as (charge, weight, coho) functions of the source charge l.
struct ShiftTables {
    std::map<std::string, std::function<Degree(long long l, int i)>> rows;
};

inline ShiftTables published_fock_shifts(int r) {
    const long long h = r * (r - 1) / 2;
    ShiftTables t;
    t.rows["p_0"] = [](long long, int i) { return Degree{-1, 0, i}; };
    t.rows["q_0"] = [](long long, int i) { return Degree{1, 0, -i}; };
    t.rows["e"] = [r, h](long long l, int) { return Degree{-r, -l, -r * l + h}; };
    t.rows["f"] = [r, h](long long l, int) { return Degree{r, l + r, r * (l + r) - h}; };
    t.rows["e_[r]"] = [r](long long l, int) { return Degree{0, l, l * r}; };
    t.rows["f_[r]"] = [r](long long l, int) { return Degree{0, -l, -l * r}; };
    return t;
}

/// Shifts obtained by composing the rows for e, f, p_{0,i} and q_{0,i} along e_[r] = q_[r] e, f_[r] = f p_[r].
inline ShiftTables composed_fock_shifts(int r) {
    auto t = published_fock_shifts(r);
    t.rows["e_[r]"] = [r](long long l, int) { return Degree{0, -l, -r * l}; };
    t.rows["f_[r]"] = [r](long long l, int) { return Degree{0, l, r * l}; };
    return t;
}

/// Audits the standard model against a shift table; each row is split into the
/// charge/weight part and the cohomological part.
inline AuditTable fock_grading_audit(const StandardTruncatedModel& m, const ShiftTables& tables,
                                     const std::string& label = "") {
    const int r = m.act.r;
    const auto deg = m.degrees();
    std::vector<Degree> bideg(deg.size()), cdeg(deg.size());
    for (std::size_t j = 0; j < deg.size(); ++j) {
        bideg[j] = {deg[j][0], deg[j][1]};
        cdeg[j] = {deg[j][0], deg[j][2]};
    }
    const Mask full = IndexSubset::full(r).bits;
    AuditTable t;
    auto add = [&](const std::string& name, const TruncatedOperator& op, const std::string& key, int i) {
        auto rule = tables.rows.at(key);
        t.rows.push_back(audit_map(label + "bigrading", name, op, bideg, bideg, [=](const Degree& s) {
            auto d = rule(s[0], i);
            return Degree{d[0], d[1]};
        }));
        t.rows.push_back(audit_map(label + "coho", name, op, cdeg, cdeg, [=](const Degree& s) {
            auto d = rule(s[0], i);
            return Degree{d[0], d[2]};
        }));
    };
    for (int i = 0; i < r; ++i) {
        add("p_0," + std::to_string(i), m.act.p[i], "p_0", i);
        add("q_0," + std::to_string(i), m.act.q[i], "q_0", i);
    }
    add("e", m.act.e, "e", 0);
    add("f", m.act.f, "f", 0);
    add("e_[r]", m.act.e_of(full), "e_[r]", 0);
    add("f_[r]", m.act.f_of(full), "f_[r]", 0);
    return t;
}

} // namespace fermionlab
