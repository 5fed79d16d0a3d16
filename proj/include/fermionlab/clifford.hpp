#pragma once

#include "bigint.hpp"
#include "linalg.hpp"
#include "sparse_map.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fermionlab {

using Mask = std::uint32_t;

struct IndexSubset {
    Mask bits = 0;
    int rank = 0;

    IndexSubset() = default;
    IndexSubset(Mask b, int r) : bits(b), rank(r) {
        if (r < 0 || r > 31) throw std::out_of_range("IndexSubset: rank out of range");
        if (r < 32 && (b >> r) != 0) throw std::out_of_range("IndexSubset: element outside [r]");
    }

    static IndexSubset full(int r) { return {r == 0 ? 0u : ((Mask(1) << r) - 1), r}; }
    static IndexSubset from_elements(const std::vector<int>& xs, int r) {
        Mask b = 0;
        for (int x : xs) {
            if (x < 0 || x >= r) throw std::out_of_range("IndexSubset: element outside [r]");
            b |= Mask(1) << x;
        }
        return {b, r};
    }

    int len() const { return std::popcount(bits); }
    int wt() const {
        int s = 0;
        for (int i = 0; i < rank; ++i)
            if (contains(i)) s += i;
        return s;
    }
    bool contains(int i) const { return i >= 0 && i < rank && ((bits >> i) & 1u); }
    /// Number of elements strictly below i.
    int count_below(int i) const { return std::popcount(bits & ((Mask(1) << i) - 1)); }

    std::vector<int> elements() const {
        std::vector<int> out;
        for (int i = 0; i < rank; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    /// Set complement [r] - I.
    IndexSubset set_complement() const { return {full(rank).bits & ~bits, rank}; }
    /// Reflected complement {r-1-i : i in I}.
    IndexSubset reflect() const {
        Mask b = 0;
        for (int i = 0; i < rank; ++i)
            if (contains(i)) b |= Mask(1) << (rank - 1 - i);
        return {b, rank};
    }

    friend bool operator==(const IndexSubset&, const IndexSubset&) = default;
    friend bool operator<(const IndexSubset& a, const IndexSubset& b) {
        return a.rank != b.rank ? a.rank < b.rank : a.bits < b.bits;
    }
};

enum class GenKind { P, Q };

inline const char* kind_name(GenKind k) { return k == GenKind::P ? "p" : "q"; }

struct SpinVector {
    int rank = 0;
    std::map<Mask, BigInt> terms;

    SpinVector() = default;
    explicit SpinVector(int r) : rank(r) {}
    static SpinVector basis(IndexSubset I) {
        SpinVector v(I.rank);
        v.terms.emplace(I.bits, 1);
        return v;
    }

    void add(Mask b, const BigInt& c) {
        if (c == 0) return;
        auto [it, ins] = terms.emplace(b, c);
        if (!ins) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }
    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const SpinVector&, const SpinVector&) = default;
};

/// Sign rule for a generator acting on a basis subset. The standard rule is the Koszul sign.
using SignRule = std::function<int(GenKind, int, Mask)>;

inline int koszul_sign(GenKind, int i, Mask bits) {
    return (std::popcount(bits & ((Mask(1) << i) - 1)) % 2 == 0) ? 1 : -1;
}

/// Action of a generator on a single basis vector: returns (sign, target) or sign 0.
inline std::pair<int, Mask> act_basis(GenKind k, int i, Mask bits, const SignRule& rule) {
    bool in = (bits >> i) & 1u;
    if (k == GenKind::P) {
        if (!in) return {0, 0};
        return {rule(k, i, bits), bits & ~(Mask(1) << i)};
    }
    if (in) return {0, 0};
    return {rule(k, i, bits), bits | (Mask(1) << i)};
}

inline SpinVector apply_generator(GenKind k, int i, const SpinVector& v) {
    if (i < 0 || i >= v.rank) throw std::out_of_range("apply_generator: index out of range");
    SpinVector out(v.rank);
    for (const auto& [b, c] : v.terms) {
        auto [s, t] = act_basis(k, i, b, koszul_sign);
        if (s != 0) out.add(t, s * c);
    }
    return out;
}

/// Operators of a Cl(r)-action on a free module of dimension dim.
struct ClRep {
    int r = 0;
    std::size_t dim = 0;
    std::vector<SparseIntMap> p, q;
};

inline SparseIntMap generator_matrix(GenKind k, int i, int r, const SignRule& rule = koszul_sign) {
    std::size_t n = std::size_t(1) << r;
    SparseIntMap m(n, n);
    for (Mask b = 0; b < n; ++b) {
        auto [s, t] = act_basis(k, i, b, rule);
        if (s != 0) m.set(t, b, s);
    }
    return m;
}

inline ClRep spin_representation(int r, const SignRule& rule = koszul_sign) {
    if (r < 0 || r > 16) throw std::out_of_range("spin_representation: rank out of range");
    ClRep rep{r, std::size_t(1) << r, {}, {}};
    for (int i = 0; i < r; ++i) {
        rep.p.push_back(generator_matrix(GenKind::P, i, r, rule));
        rep.q.push_back(generator_matrix(GenKind::Q, i, r, rule));
    }
    return rep;
}

/// Tensor W (x) F(r) with standard action; index w * 2^r + I.
inline ClRep induced_representation(std::size_t rank_w, int r) {
    auto base = spin_representation(r);
    ClRep rep{r, rank_w << r, {}, {}};
    auto idw = SparseIntMap::identity(rank_w);
    for (int i = 0; i < r; ++i) {
        rep.p.push_back(SparseIntMap::kron(idw, base.p[i]));
        rep.q.push_back(SparseIntMap::kron(idw, base.q[i]));
    }
    return rep;
}

inline ClRep direct_sum(const ClRep& a, const ClRep& b) {
    if (a.r != b.r) throw std::invalid_argument("direct_sum: rank mismatch");
    ClRep rep{a.r, a.dim + b.dim, {}, {}};
    auto block = [](const SparseIntMap& x, const SparseIntMap& y) {
        SparseIntMap m(x.rows() + y.rows(), x.cols() + y.cols());
        x.for_each([&](std::size_t i, std::size_t j, const BigInt& v) { m.set(i, j, v); });
        y.for_each([&](std::size_t i, std::size_t j, const BigInt& v) { m.set(x.rows() + i, x.cols() + j, v); });
        return m;
    };
    for (int i = 0; i < a.r; ++i) {
        rep.p.push_back(block(a.p[i], b.p[i]));
        rep.q.push_back(block(a.q[i], b.q[i]));
    }
    return rep;
}

/// Conjugates an action by a change of basis g (ops become g op g^-1).
inline ClRep conjugate(const ClRep& rep, const SparseIntMap& g, const SparseIntMap& g_inv) {
    ClRep out{rep.r, rep.dim, {}, {}};
    for (int i = 0; i < rep.r; ++i) {
        out.p.push_back(g * rep.p[i] * g_inv);
        out.q.push_back(g * rep.q[i] * g_inv);
    }
    return out;
}

/// p_I = p_{a_k}...p_{a_0} and q_I = q_{a_0}...q_{a_k}.
inline SparseIntMap ordered_word(const IndexSubset& I, GenKind k, const ClRep& rep) {
    auto out = SparseIntMap::identity(rep.dim);
    auto els = I.elements();
    if (k == GenKind::P) {
        for (int a : els) out = rep.p.at(a) * out;
    } else {
        for (auto it = els.rbegin(); it != els.rend(); ++it) out = rep.q.at(*it) * out;
    }
    return out;
}

inline SparseIntMap ordered_word(const IndexSubset& I, GenKind k) {
    return ordered_word(I, k, spin_representation(I.rank));
}

/// A formal word in generators with an integer scalar.
struct CliffordOp {
    BigInt scalar = 1;
    std::vector<std::pair<GenKind, int>> word; // leftmost factor first

    SparseIntMap realize(const ClRep& rep) const {
        auto out = SparseIntMap::identity(rep.dim);
        for (auto it = word.rbegin(); it != word.rend(); ++it)
            out = (it->first == GenKind::P ? rep.p.at(it->second) : rep.q.at(it->second)) * out;
        return scalar * out;
    }

    static CliffordOp ordered(const IndexSubset& I, GenKind k) {
        CliffordOp op;
        auto els = I.elements();
        if (k == GenKind::P)
            for (auto it = els.rbegin(); it != els.rend(); ++it) op.word.push_back({k, *it});
        else
            for (int a : els) op.word.push_back({k, a});
        return op;
    }
};

struct RelationReport {
    bool ok = true;
    std::vector<std::string> failures;
    std::size_t checked = 0;

    void record(bool good, const std::string& what) {
        ++checked;
        if (!good) {
            ok = false;
            failures.push_back(what);
        }
    }
};

inline RelationReport check_relations(const ClRep& rep) {
    RelationReport rep_out;
    const auto id = SparseIntMap::identity(rep.dim);
    const SparseIntMap zero(rep.dim, rep.dim);
    auto name = [](const char* a, int i, const char* b, int j) {
        return std::string("{") + a + "_" + std::to_string(i) + "," + b + "_" + std::to_string(j) + "}";
    };
    for (int i = 0; i < rep.r; ++i) {
        rep_out.record((rep.p[i] * rep.p[i]).is_zero(), "p_" + std::to_string(i) + "^2");
        rep_out.record((rep.q[i] * rep.q[i]).is_zero(), "q_" + std::to_string(i) + "^2");
        for (int j = 0; j < rep.r; ++j) {
            if (j > i) {
                rep_out.record(anticommutator(rep.p[i], rep.p[j]).is_zero(), name("p", i, "p", j));
                rep_out.record(anticommutator(rep.q[i], rep.q[j]).is_zero(), name("q", i, "q", j));
            }
            auto pq = anticommutator(rep.p[i], rep.q[j]);
            rep_out.record(i == j ? pq == id : pq.is_zero(), name("p", i, "q", j));
        }
    }
    return rep_out;
}

inline RelationReport check_relations(int r) { return check_relations(spin_representation(r)); }

/// (p_[r] q_[r]) restricted to the common kernel of the p_i, and dually, are identities.
inline bool restriction_identity(const ClRep& rep) {
    auto full = IndexSubset::full(rep.r);
    auto pq = ordered_word(full, GenKind::P, rep) * ordered_word(full, GenKind::Q, rep);
    auto qp = ordered_word(full, GenKind::Q, rep) * ordered_word(full, GenKind::P, rep);
    auto kp = common_kernel(rep.p, rep.dim);
    auto kq = common_kernel(rep.q, rep.dim);
    return pq * kp == kp && qp * kq == kq;
}

inline SparseIntMap completeness_sum(const ClRep& rep) {
    auto full = IndexSubset::full(rep.r);
    auto mid = ordered_word(full, GenKind::P, rep) * ordered_word(full, GenKind::Q, rep);
    SparseIntMap sum(rep.dim, rep.dim);
    for (Mask b = 0; b < (Mask(1) << rep.r); ++b) {
        IndexSubset I(b, rep.r);
        sum += ordered_word(I, GenKind::Q, rep) * mid * ordered_word(I, GenKind::P, rep);
    }
    return sum;
}

inline bool completeness_identity(const ClRep& rep) { return completeness_sum(rep) == SparseIntMap::identity(rep.dim); }
inline bool completeness_identity(int r) { return completeness_identity(spin_representation(r)); }

struct SpinFactorization {
    SparseIntMap kernel;  // dim V x rank W, columns a Z-basis of W
    SparseIntMap iso;     // W (x) F(r) -> V, index w * 2^r + I
    SparseIntMap inverse; // V -> W (x) F(r)
    std::size_t rank_w = 0;
};

class FactorizationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Splits v into components indexed by subsets, each in the common kernel of the p_i.
inline std::map<Mask, std::vector<BigInt>> split_spin(const ClRep& rep, const std::vector<BigInt>& v) {
    std::map<Mask, std::vector<BigInt>> parts{{0, v}};
    for (int i = 0; i < rep.r; ++i) {
        std::map<Mask, std::vector<BigInt>> next;
        for (const auto& [s, u] : parts) {
            auto pu = rep.p[i].apply(u);
            auto pqu = rep.p[i].apply(rep.q[i].apply(u));
            next[s | (Mask(1) << i)] = std::move(pu);
            next[s] = std::move(pqu);
        }
        parts = std::move(next);
    }
    return parts;
}

} // namespace detail

inline SpinFactorization spin_factorize(const ClRep& rep) {
    auto rel = check_relations(rep);
    if (!rel.ok) throw FactorizationError("spin_factorize: Clifford relations fail on " + rel.failures.front());
    const std::size_t nsub = std::size_t(1) << rep.r;
    SpinFactorization out;
    out.kernel = common_kernel(rep.p, rep.dim);
    out.rank_w = out.kernel.cols();
    out.iso = SparseIntMap(rep.dim, out.rank_w * nsub);
    for (Mask b = 0; b < nsub; ++b) {
        auto img = ordered_word(IndexSubset(b, rep.r), GenKind::Q, rep) * out.kernel;
        for (std::size_t w = 0; w < out.rank_w; ++w) out.iso.set_column(w * nsub + b, img.column(w));
    }
    out.inverse = SparseIntMap(out.rank_w * nsub, rep.dim);
    for (std::size_t j = 0; j < rep.dim; ++j) {
        std::vector<BigInt> e(rep.dim, 0);
        e[j] = 1;
        for (const auto& [s, u] : detail::split_spin(rep, e)) {
            auto coords = integer_solve(out.kernel, u);
            if (!coords) throw FactorizationError("spin_factorize: component outside the kernel lattice");
            for (std::size_t w = 0; w < out.rank_w; ++w)
                if ((*coords)[w] != 0) out.inverse.set(w * nsub + s, j, (*coords)[w]);
        }
    }
    if (!(out.iso * out.inverse == SparseIntMap::identity(rep.dim)) ||
        !(out.inverse * out.iso == SparseIntMap::identity(out.rank_w * nsub)))
        throw FactorizationError("spin_factorize: induced map is not bijective");
    return out;
}

/// s_I with v_I ^ v_{[r]-I} = s_I v_[r].
inline int hodge_sign(const IndexSubset& I) {
    int inv = 0;
    for (int a = 0; a < I.rank; ++a)
        if (I.contains(a))
            for (int b = 0; b < a; ++b)
                if (!I.contains(b)) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

/// Sign of wedging sorted I with sorted J (disjoint) into sorted order.
inline int wedge_sign(Mask I, Mask J) {
    int inv = 0;
    for (int a = 0; a < 32; ++a)
        if ((I >> a) & 1u) inv += std::popcount(J & ((Mask(1) << a) - 1));
    return inv % 2 == 0 ? 1 : -1;
}

inline SpinVector hodge_star(const SpinVector& v) {
    SpinVector out(v.rank);
    for (const auto& [b, c] : v.terms) {
        IndexSubset I(b, v.rank);
        out.add(I.set_complement().bits, hodge_sign(I) * c);
    }
    return out;
}

inline SparseIntMap hodge_matrix(int r) {
    std::size_t n = std::size_t(1) << r;
    SparseIntMap m(n, n);
    for (Mask b = 0; b < n; ++b) {
        IndexSubset I(b, r);
        m.set(I.set_complement().bits, b, hodge_sign(I));
    }
    return m;
}

/// Signs sigma with star p_i = sigma q_i star on sources of given length parity.
struct ConjugationTable {
    int r = 0;
    // sign[i][parity]; 0 means no source of that parity carries i
    std::vector<std::array<int, 2>> p_to_q, q_to_p;
    bool consistent = true;
};

inline ConjugationTable hodge_conjugation_table(int r) {
    ConjugationTable t;
    t.r = r;
    t.p_to_q.assign(r, {0, 0});
    t.q_to_p.assign(r, {0, 0});
    auto star = hodge_matrix(r);
    auto rep = spin_representation(r);
    auto fill = [&](const SparseIntMap& lhs, const SparseIntMap& rhs, std::vector<std::array<int, 2>>& tab, int i) {
        for (Mask b = 0; b < (Mask(1) << r); ++b) {
            const auto& cl = lhs.column(b);
            const auto& cr = rhs.column(b);
            if (cl.empty() && cr.empty()) continue;
            if (cl.size() != 1 || cr.size() != 1 || cl.begin()->first != cr.begin()->first) {
                t.consistent = false;
                continue;
            }
            int s = cl.begin()->second == cr.begin()->second ? 1 : -1;
            if (abs(cl.begin()->second) != 1 || abs(cr.begin()->second) != 1) t.consistent = false;
            int par = std::popcount(b) % 2;
            if (tab[i][par] == 0)
                tab[i][par] = s;
            else if (tab[i][par] != s)
                t.consistent = false;
        }
    };
    for (int i = 0; i < r; ++i) {
        fill(star * rep.p[i], rep.q[i] * star, t.p_to_q, i);
        fill(star * rep.q[i], rep.p[i] * star, t.q_to_p, i);
    }
    return t;
}

/// Sign of star twice on the length-d piece, measured.
inline std::vector<int> hodge_square_signs(int r) {
    auto star = hodge_matrix(r);
    auto sq = star * star;
    std::vector<int> out(r + 1, 0);
    for (Mask b = 0; b < (Mask(1) << r); ++b) {
        int d = std::popcount(b);
        const auto& c = sq.column(b);
        int s = (c.size() == 1 && c.begin()->first == b) ? (c.begin()->second == 1 ? 1 : (c.begin()->second == -1 ? -1 : 0)) : 0;
        if (out[d] == 0)
            out[d] = s;
        else if (out[d] != s)
            out[d] = 0;
    }
    return out;
}

} // namespace fermionlab
