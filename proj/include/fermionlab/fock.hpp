#pragma once

#include "bigint.hpp"
#include "clifford.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "sparse_map.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermionlab {

/// Sequence of subsets I_m indexed by Z, full below the window and empty above it.
class MayaDiagram {
  public:
    MayaDiagram() = default;
    MayaDiagram(int r, int m_lo, std::vector<Mask> levels) : r_(r), lo_(m_lo), levels_(std::move(levels)) {
        if (r < 1 || r > 16) throw std::out_of_range("MayaDiagram: rank out of range");
        for (Mask b : levels_)
            if ((b >> r) != 0) throw std::out_of_range("MayaDiagram: level outside [r]");
        canonicalize();
    }

    static MayaDiagram vacuum(int r) { return MayaDiagram(r, 1, {}); }

    int rank() const { return r_; }
    int m_lo() const { return lo_; }
    int m_hi() const { return lo_ + int(levels_.size()) - 1; }
    const std::vector<Mask>& levels() const { return levels_; }
    Mask full() const { return (Mask(1) << r_) - 1; }

    Mask level(int m) const {
        if (m < lo_) return full();
        if (m >= lo_ + int(levels_.size())) return 0;
        return levels_[m - lo_];
    }

    MayaDiagram with_level(int m, Mask s) const {
        int a = std::min(lo_, m), b = std::max(m_hi(), m);
        std::vector<Mask> lv;
        lv.reserve(b - a + 1);
        for (int k = a; k <= b; ++k) lv.push_back(k == m ? s : level(k));
        return MayaDiagram(r_, a, std::move(lv));
    }

    /// Every level moved down by one (E) or up by one (F).
    MayaDiagram shifted(int by) const {
        MayaDiagram d = *this;
        d.lo_ += by;
        return d;
    }

    /// Levels where the diagram may differ from the vacuum pattern, with one level of margin.
    std::pair<int, int> span() const { return {std::min(lo_, 0) - 1, std::max(lo_ + int(levels_.size()), 1) + 1}; }

    friend bool operator==(const MayaDiagram& a, const MayaDiagram& b) {
        return a.r_ == b.r_ && a.lo_ == b.lo_ && a.levels_ == b.levels_;
    }
    friend bool operator<(const MayaDiagram& a, const MayaDiagram& b) {
        if (a.r_ != b.r_) return a.r_ < b.r_;
        if (a.lo_ != b.lo_) return a.lo_ < b.lo_;
        return a.levels_ < b.levels_;
    }

    std::size_t hash() const {
        std::size_t h = std::hash<int>()(r_) * 1000003u ^ std::hash<int>()(lo_);
        for (Mask b : levels_) h = h * 1000003u ^ std::hash<Mask>()(b);
        return h;
    }

    std::string str() const {
        std::string s = "[" + std::to_string(lo_) + ":";
        for (Mask b : levels_) {
            s += " {";
            bool first = true;
            for (int i = 0; i < r_; ++i)
                if ((b >> i) & 1u) {
                    if (!first) s += ",";
                    s += std::to_string(i);
                    first = false;
                }
            s += "}";
        }
        return s + "]";
    }

  private:
    void canonicalize() {
        std::size_t start = 0;
        while (start < levels_.size() && levels_[start] == full()) ++start;
        levels_.erase(levels_.begin(), levels_.begin() + start);
        lo_ += int(start);
        while (!levels_.empty() && levels_.back() == 0) levels_.pop_back();
    }

    int r_ = 1;
    int lo_ = 1;
    std::vector<Mask> levels_;
};

struct MayaHash {
    std::size_t operator()(const MayaDiagram& d) const { return d.hash(); }
};

inline int subset_weight(Mask b) {
    int s = 0;
    for (int i = 0; b; ++i, b >>= 1)
        if (b & 1u) s += i;
    return s;
}

inline long long charge(const MayaDiagram& d) {
    long long c = 0;
    auto [a, b] = d.span();
    for (int m = a; m < b; ++m) {
        int len = std::popcount(d.level(m));
        c += m > 0 ? len : -(d.rank() - len);
    }
    return c;
}

inline long long weight(const MayaDiagram& d) {
    long long w = 0;
    auto [a, b] = d.span();
    for (int m = a; m < b; ++m) {
        int len = std::popcount(d.level(m));
        w += m > 0 ? (long long)m * len : -(long long)m * (d.rank() - len);
    }
    return w;
}

inline long long coho(const MayaDiagram& d) {
    long long c = 0;
    const int r = d.rank();
    auto [a, b] = d.span();
    for (int m = a; m < b; ++m) {
        int wt = subset_weight(d.level(m));
        c += m <= 0 ? (r * (r - 1) / 2 - wt) : -wt;
    }
    return c + r * weight(d);
}

/// Highest level with a particle and lowest level with a hole.
inline int top_particle(const MayaDiagram& d) {
    for (int m = d.m_hi(); m >= d.m_lo(); --m)
        if (d.level(m) != 0) return m;
    return d.m_lo() - 1;
}
inline int bottom_hole(const MayaDiagram& d) {
    for (int m = d.m_lo(); m <= d.m_hi(); ++m)
        if (d.level(m) != d.full()) return m;
    return d.m_lo();
}

namespace detail {

inline void partitions_into(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions_into(n - p, p, cur, out);
        cur.pop_back();
    }
}

inline const std::vector<std::vector<int>>& partitions_cached(int n, int max_part) {
    static thread_local std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    auto key = std::make_pair(n, max_part);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    if (max_part >= 0) partitions_into(n, std::max(max_part, 0), cur, out);
    return cache.emplace(key, std::move(out)).first->second;
}

// color charges c with sum l, sum c(c+1)/2 <= n, each c <= cap
inline void charge_vectors(int r, int l, long long budget, std::optional<int> cap, std::vector<int>& cur,
                           std::vector<std::vector<int>>& out) {
    int k = int(cur.size());
    if (k == r - 1) {
        int sum = 0;
        for (int c : cur) sum += c;
        int c = l - sum;
        if (cap && c > *cap) return;
        if ((long long)c * (c + 1) / 2 > budget) return;
        cur.push_back(c);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    int bound = 1;
    while ((long long)bound * (bound + 1) / 2 <= budget) ++bound;
    for (int c = -bound - 1; c <= bound; ++c) {
        if (cap && c > *cap) continue;
        long long cost = (long long)c * (c + 1) / 2;
        if (cost > budget) continue;
        cur.push_back(c);
        charge_vectors(r, l, budget - cost, cap, cur, out);
        cur.pop_back();
    }
}

inline MayaDiagram assemble_colors(int r, const std::vector<int>& charges, const std::vector<const std::vector<int>*>& parts) {
    int lo = 0, hi = 1;
    for (int i = 0; i < r; ++i) {
        int len = int(parts[i]->size());
        lo = std::min(lo, charges[i] - len);
        hi = std::max(hi, charges[i] + (len ? (*parts[i])[0] : 0));
    }
    std::vector<Mask> lv(hi - lo + 1, 0);
    for (int i = 0; i < r; ++i) {
        const auto& lam = *parts[i];
        int len = int(lam.size());
        int sea = charges[i] - len;
        for (int m = lo; m <= std::min(sea, hi); ++m) lv[m - lo] |= Mask(1) << i;
        for (int k = 1; k <= len; ++k) {
            int s = charges[i] - k + 1 + lam[k - 1];
            lv[s - lo] |= Mask(1) << i;
        }
    }
    return MayaDiagram(r, lo, std::move(lv));
}

} // namespace detail

/// All diagrams of charge l and weight n; with max_level, only those empty above it.
inline std::vector<MayaDiagram> enumerate_basis(int r, int l, long long n, std::optional<int> max_level = std::nullopt) {
    if (r < 1) throw std::out_of_range("enumerate_basis: rank must be positive");
    std::vector<MayaDiagram> out;
    if (n < 0) return out;
    std::vector<std::vector<int>> cvs;
    std::vector<int> cur;
    detail::charge_vectors(r, l, n, max_level, cur, cvs);
    for (const auto& cv : cvs) {
        long long base = 0;
        for (int c : cv) base += (long long)c * (c + 1) / 2;
        int rest = int(n - base);
        // distribute rest among colors
        std::vector<int> sizes(r, 0);
        std::function<void(int, int)> dist = [&](int i, int left) {
            if (i == r - 1) {
                sizes[i] = left;
                std::vector<const std::vector<std::vector<int>>*> lists(r);
                for (int k = 0; k < r; ++k) {
                    int cap = max_level ? *max_level - cv[k] : sizes[k];
                    if (cap < 0) return;
                    lists[k] = &detail::partitions_cached(sizes[k], std::min(cap, std::max(sizes[k], 0)));
                    if (lists[k]->empty()) return;
                }
                std::vector<std::size_t> idx(r, 0);
                std::vector<const std::vector<int>*> parts(r);
                while (true) {
                    for (int k = 0; k < r; ++k) parts[k] = &(*lists[k])[idx[k]];
                    out.push_back(detail::assemble_colors(r, cv, parts));
                    int k = 0;
                    while (k < r && ++idx[k] == lists[k]->size()) idx[k++] = 0;
                    if (k == r) break;
                }
                return;
            }
            for (int s = 0; s <= left; ++s) {
                sizes[i] = s;
                dist(i + 1, left - s);
            }
        };
        dist(0, rest);
    }
    std::sort(out.begin(), out.end());
    return out;
}

template <class Label>
using LinComb = std::map<Label, BigInt>;

template <class Label>
void lc_add(LinComb<Label>& acc, const Label& k, const BigInt& c) {
    if (c == 0) return;
    auto [it, ins] = acc.emplace(k, c);
    if (!ins) {
        it->second += c;
        if (it->second == 0) acc.erase(it);
    }
}

template <class Label>
LinComb<Label> lc_sum(const LinComb<Label>& a, const LinComb<Label>& b, const BigInt& s = 1) {
    LinComb<Label> out = a;
    for (const auto& [k, v] : b) lc_add(out, k, s * v);
    return out;
}

using FockVector = LinComb<MayaDiagram>;

inline FockVector basis_vector(const MayaDiagram& d) { return {{d, BigInt(1)}}; }

/// Koszul sign exponent: particles strictly above level a.
inline int particles_above(const MayaDiagram& d, int a) {
    int s = 0;
    for (int k = a + 1; k <= std::max(d.m_hi(), a); ++k) s += std::popcount(d.level(k));
    return s;
}

/// Candidate readings of the global sign exponent; the first is the one in use.
enum class KoszulReading { StrictlyAbove, AboveInclusive, AboveCharge, Unsigned };

inline const char* reading_name(KoszulReading k) {
    switch (k) {
    case KoszulReading::StrictlyAbove: return "levels k > a";
    case KoszulReading::AboveInclusive: return "levels k >= a";
    case KoszulReading::AboveCharge: return "levels k > charge";
    default: return "no global sign";
    }
}

inline long long charge(const MayaDiagram& d);

inline int global_sign_exponent(const MayaDiagram& d, int a, KoszulReading reading) {
    switch (reading) {
    case KoszulReading::StrictlyAbove: return particles_above(d, a);
    case KoszulReading::AboveInclusive: return particles_above(d, a - 1);
    case KoszulReading::AboveCharge: return particles_above(d, int(charge(d)));
    default: return 0;
    }
}

inline std::pair<int, MayaDiagram> fermion_on_basis(GenKind kind, int a, int i, const MayaDiagram& d,
                                                    KoszulReading reading = KoszulReading::StrictlyAbove) {
    if (i < 0 || i >= d.rank()) throw std::out_of_range("fermion: color out of range");
    Mask I = d.level(a);
    auto [s, t] = act_basis(kind, i, I, koszul_sign);
    if (s == 0) return {0, d};
    if (global_sign_exponent(d, a, reading) % 2) s = -s;
    return {s, d.with_level(a, t)};
}

inline FockVector apply_fermion(GenKind kind, int a, int i, const FockVector& v,
                                KoszulReading reading = KoszulReading::StrictlyAbove) {
    FockVector out;
    for (const auto& [d, c] : v) {
        auto [s, t] = fermion_on_basis(kind, a, i, d, reading);
        if (s != 0) lc_add(out, t, s * c);
    }
    return out;
}

enum class ShiftDir { E, F };

inline FockVector shift(ShiftDir dir, const FockVector& v) {
    FockVector out;
    for (const auto& [d, c] : v) out.emplace(d.shifted(dir == ShiftDir::E ? -1 : 1), c);
    return out;
}

/// Operators on the Fock space, given by their action on basis diagrams.
using FockOp = std::function<FockVector(const MayaDiagram&)>;

inline FockOp op_fermion(GenKind kind, int a, int i, KoszulReading reading = KoszulReading::StrictlyAbove) {
    return [=](const MayaDiagram& d) { return apply_fermion(kind, a, i, basis_vector(d), reading); };
}
inline FockOp op_shift(ShiftDir dir) {
    return [=](const MayaDiagram& d) { return shift(dir, basis_vector(d)); };
}

/// Applies an operator linearly.
inline FockVector apply_op(const FockOp& op, const FockVector& v) {
    FockVector out;
    for (const auto& [d, c] : v)
        for (const auto& [t, x] : op(d)) lc_add(out, t, c * x);
    return out;
}

inline FockOp compose(FockOp a, FockOp b) {
    return [a = std::move(a), b = std::move(b)](const MayaDiagram& d) { return apply_op(a, b(d)); };
}

/// P_{a,J} = p_J and Q_{a,J} = q_J acting on level a.
inline FockVector apply_word(GenKind kind, int a, Mask J, int r, FockVector v) {
    auto els = IndexSubset(J, r).elements();
    if (kind == GenKind::P)
        for (int i : els) v = apply_fermion(kind, a, i, v);
    else
        for (auto it = els.rbegin(); it != els.rend(); ++it) v = apply_fermion(kind, a, *it, v);
    return v;
}

inline FockOp op_word(GenKind kind, int a, Mask J, int r) {
    return [=](const MayaDiagram& d) { return apply_word(kind, a, J, r, basis_vector(d)); };
}

/// Charge/weight window of the Fock space, optionally restricted to diagrams empty above max_level.
struct FockTruncation {
    int r = 1;
    int l_lo = 0, l_hi = 0;
    int N = 0;
    std::optional<int> max_level;
    BasisRegistry<MayaDiagram, MayaHash> basis;
    std::map<std::pair<int, int>, std::vector<std::size_t>> pieces;

    FockTruncation() = default;
    FockTruncation(int r_, int lo, int hi, int n_max, std::optional<int> ml = std::nullopt)
        : r(r_), l_lo(lo), l_hi(hi), N(n_max), max_level(ml) {
        for (int l = lo; l <= hi; ++l)
            for (int n = 0; n <= n_max; ++n)
                for (auto& d : enumerate_basis(r, l, n, ml)) pieces[{l, n}].push_back(basis.insert(std::move(d)));
    }

    std::size_t size() const { return basis.size(); }
    const std::vector<std::size_t>& piece(int l, int n) const {
        static const std::vector<std::size_t> empty;
        auto it = pieces.find({l, n});
        return it == pieces.end() ? empty : it->second;
    }
};

/// Matrix of op on the window; columns whose image leaves the window are flagged inexact.
template <class Registry, class Fn>
TruncatedOperator realize_on(const Registry& basis, Fn&& image) {
    const std::size_t n = basis.size();
    SparseIntMap m(n, n);
    std::vector<char> exact(n, 1);
    std::vector<SparseIntMap::Column> cols(n);
    parallel_for(n, [&](std::size_t j) {
        for (const auto& [t, c] : image(basis[j])) {
            auto k = basis.find(t);
            if (!k) {
                exact[j] = 0;
                continue;
            }
            cols[j].emplace(*k, c);
        }
    });
    for (std::size_t j = 0; j < n; ++j) m.set_column(j, std::move(cols[j]));
    return {std::move(m), std::move(exact)};
}

inline TruncatedOperator realize(const FockTruncation& t, const FockOp& op) { return realize_on(t.basis, op); }

/// Exact matrix of op from the window into the window extended by every image diagram.
template <class Label, class Hash, class Fn>
SparseIntMap realize_extended(const BasisRegistry<Label, Hash>& domain, BasisRegistry<Label, Hash>& codomain, Fn&& image) {
    std::vector<std::vector<std::pair<Label, BigInt>>> imgs(domain.size());
    for (std::size_t j = 0; j < domain.size(); ++j)
        for (const auto& [t, c] : image(domain[j])) imgs[j].emplace_back(t, c);
    for (auto& col : imgs)
        for (auto& [t, c] : col) codomain.insert(t);
    SparseIntMap m(codomain.size(), domain.size());
    for (std::size_t j = 0; j < domain.size(); ++j)
        for (auto& [t, c] : imgs[j]) m.add_to(*codomain.find(t), j, c);
    return m;
}

/// W (x) F(r) with E = T (x) shift and F = T^-1 (x) shift.
struct FockModule {
    int r = 1;
    std::size_t rank_w = 1;
    SparseIntMap T, T_inv;

    using Label = std::pair<std::size_t, MayaDiagram>;
    using Vector = LinComb<Label>;

    static FockModule plain(int r) { return {r, 1, SparseIntMap::identity(1), SparseIntMap::identity(1)}; }

    Vector fermion(GenKind kind, int a, int i, const Vector& v) const {
        Vector out;
        for (const auto& [lab, c] : v) {
            auto [s, t] = fermion_on_basis(kind, a, i, lab.second);
            if (s != 0) lc_add(out, Label{lab.first, t}, s * c);
        }
        return out;
    }

    Vector shift(ShiftDir dir, const Vector& v) const {
        const auto& M = dir == ShiftDir::E ? T : T_inv;
        int by = dir == ShiftDir::E ? -1 : 1;
        Vector out;
        for (const auto& [lab, c] : v)
            for (const auto& [k, x] : M.column(lab.first)) lc_add(out, Label{k, lab.second.shifted(by)}, c * x);
        return out;
    }

    Vector word(GenKind kind, int a, Mask J, Vector v) const {
        auto els = IndexSubset(J, r).elements();
        if (kind == GenKind::P)
            for (int i : els) v = fermion(kind, a, i, v);
        else
            for (auto it = els.rbegin(); it != els.rend(); ++it) v = fermion(kind, a, *it, v);
        return v;
    }
};

struct LabelHash {
    std::size_t operator()(const FockModule::Label& l) const { return l.first * 7919u ^ l.second.hash(); }
};

using ModuleRegistry = BasisRegistry<FockModule::Label, LabelHash>;

inline ModuleRegistry module_window(const FockModule& mod, const FockTruncation& t) {
    ModuleRegistry reg;
    for (std::size_t w = 0; w < mod.rank_w; ++w)
        for (const auto& d : t.basis.labels()) reg.insert({w, d});
    return reg;
}

struct AdmissibleSpaces {
    SparseIntMap H; // columns: Z-basis of the right-admissible part, in window coordinates
    SparseIntMap K; // columns: Z-basis of the left-admissible part
};

/// H_m = common kernel of P_{a,i} for a > m, K_m = common kernel of Q_{a,i} for a <= m, on a window.
inline AdmissibleSpaces admissible_spaces(const FockModule& mod, const ModuleRegistry& window, int m) {
    int top = m, bottom = m;
    for (const auto& lab : window.labels()) {
        top = std::max(top, top_particle(lab.second));
        bottom = std::min(bottom, bottom_hole(lab.second) - 1);
    }
    auto stack = [&](GenKind kind, int a_lo, int a_hi) {
        ModuleRegistry cod;
        std::vector<SparseIntMap> maps;
        for (int a = a_lo; a <= a_hi; ++a)
            for (int i = 0; i < mod.r; ++i)
                maps.push_back(realize_extended(window, cod, [&](const FockModule::Label& lab) {
                    return mod.fermion(kind, a, i, FockModule::Vector{{lab, BigInt(1)}});
                }));
        // pad every block to the final codomain size
        for (auto& mp : maps) {
            SparseIntMap padded(cod.size(), mp.cols());
            mp.for_each([&](std::size_t i, std::size_t j, const BigInt& v) { padded.set(i, j, v); });
            mp = std::move(padded);
        }
        return common_kernel(maps, window.size());
    };
    return {stack(GenKind::P, m + 1, top), stack(GenKind::Q, bottom, m)};
}

inline AdmissibleSpaces admissible_spaces(const FockTruncation& t, int m) {
    auto mod = FockModule::plain(t.r);
    return admissible_spaces(mod, module_window(mod, t), m);
}

/// Intersection of two saturated sublattices given by column bases.
inline SparseIntMap lattice_intersection(const SparseIntMap& a, const SparseIntMap& b) {
    // x in span(a) and span(b): solve a u = b v via kernel of [a | -b]
    auto k = integer_kernel(SparseIntMap::hconcat(a, -b));
    SparseIntMap u(a.cols(), k.cols());
    k.for_each([&](std::size_t i, std::size_t j, const BigInt& v) {
        if (i < a.cols()) u.set(i, j, v);
    });
    return a * u;
}

inline int lambda_sign(const MayaDiagram& d) {
    long long e = 0;
    const int r = d.rank();
    for (int k = std::min(d.m_lo(), 0); k <= 0; ++k) e += (long long)k * r * (r - std::popcount(d.level(k)));
    return (e % 2 == 0) ? 1 : -1;
}

/// Sign of p_{[r]-I} v_[r] = +-v_I in F(r).
inline int hole_word_sign(Mask I, int r) {
    Mask full = IndexSubset::full(r).bits;
    Mask cur = full;
    int s = 1;
    for (int i : IndexSubset(full & ~I, r).elements()) {
        auto [t, next] = act_basis(GenKind::P, i, cur, koszul_sign);
        s *= t;
        cur = next;
    }
    return s;
}

/// Product of the local signs left over after lambda cancels the Koszul signs.
inline int local_hole_sign(const MayaDiagram& d) {
    int s = 1;
    for (int k = std::min(d.m_lo(), 0); k <= 0; ++k) s *= hole_word_sign(d.level(k), d.rank());
    return s;
}

enum class ReconstructionSign { Printed, LocallyCorrected };

/// sign ... Q_{2,I_2} Q_{1,I_1} P_{0,[r]-I_0} P_{-1,[r]-I_{-1}} ... applied to w, where sign is
/// lambda alone (Printed) or lambda times the local hole signs.
inline FockModule::Vector reconstruct(const FockModule& mod, const FockModule::Vector& w, const MayaDiagram& d,
                                      ReconstructionSign policy = ReconstructionSign::LocallyCorrected) {
    const Mask full = d.full();
    auto v = w;
    for (int k = std::min(d.m_lo(), 0); k <= 0; ++k) v = mod.word(GenKind::P, k, full & ~d.level(k), v);
    for (int k = 1; k <= d.m_hi(); ++k) v = mod.word(GenKind::Q, k, d.level(k), v);
    int sign = lambda_sign(d);
    if (policy == ReconstructionSign::LocallyCorrected) sign *= local_hole_sign(d);
    if (sign < 0)
        for (auto& [lab, c] : v) c = -c;
    return v;
}

struct ReconstructionReport {
    bool ok = true;
    std::size_t rank_w = 0;
    std::size_t checked = 0;
    std::vector<std::string> failures;
    SparseIntMap T_on_w; // E_[r] restricted to W, in the W basis
};

class AdmissibilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Builds W = H_0 and K_0 on the vacuum window of mod, then checks the reconstruction map on a truncation.
inline ReconstructionReport check_reconstruction(const FockModule& mod, const FockTruncation& t,
                                                 const std::vector<std::pair<GenKind, std::pair<int, int>>>& samples,
                                                 ReconstructionSign policy = ReconstructionSign::LocallyCorrected) {
    ReconstructionReport rep;
    // W lives in the charge-0, weight-0 piece
    FockTruncation vac(mod.r, 0, 0, 0);
    auto win = module_window(mod, vac);
    auto sp = admissible_spaces(mod, win, 0);
    auto W = lattice_intersection(sp.H, sp.K);
    rep.rank_w = W.cols();
    std::vector<FockModule::Vector> wvec(W.cols());
    for (std::size_t j = 0; j < W.cols(); ++j)
        for (const auto& [i, v] : W.column(j)) wvec[j].emplace(win[i], v);

    auto coords = [&](const FockModule::Vector& v) -> std::optional<IntVec> {
        IntVec b(win.size(), 0);
        for (const auto& [lab, c] : v) {
            auto k = win.find(lab);
            if (!k) return std::nullopt;
            b[*k] = c;
        }
        return integer_solve(W, b);
    };
    // T = Q_{0,[r]} E on W
    rep.T_on_w = SparseIntMap(W.cols(), W.cols());
    for (std::size_t j = 0; j < W.cols(); ++j) {
        auto x = mod.word(GenKind::Q, 0, IndexSubset::full(mod.r).bits, mod.shift(ShiftDir::E, wvec[j]));
        auto c = coords(x);
        if (!c) throw AdmissibilityError("reconstruct: E_[r] does not preserve W");
        for (std::size_t i = 0; i < W.cols(); ++i)
            if ((*c)[i] != 0) rep.T_on_w.set(i, j, (*c)[i]);
    }
    if (!is_unimodular(rep.T_on_w)) {
        rep.ok = false;
        rep.failures.push_back("T is not invertible on W");
        return rep;
    }
    auto T_inv = unimodular_inverse(rep.T_on_w);

    auto R = [&](std::size_t w, const MayaDiagram& d) { return reconstruct(mod, wvec[w], d, policy); };
    auto R_lin = [&](const LinComb<std::pair<std::size_t, MayaDiagram>>& x) {
        FockModule::Vector out;
        for (const auto& [lab, c] : x)
            for (const auto& [k, v] : R(lab.first, lab.second)) lc_add(out, k, c * v);
        return out;
    };
    FockModule model{mod.r, W.cols(), rep.T_on_w, T_inv};

    // graded bijection: images of each (l, n) piece form a unimodular change of basis
    for (const auto& [ln, idx] : t.pieces) {
        ModuleRegistry target;
        for (std::size_t w = 0; w < mod.rank_w; ++w)
            for (std::size_t k : idx) target.insert({w, t.basis[k]});
        SparseIntMap M(target.size(), W.cols() * idx.size());
        bool inside = true;
        for (std::size_t w = 0; w < W.cols(); ++w)
            for (std::size_t col = 0; col < idx.size(); ++col)
                for (const auto& [lab, c] : R(w, t.basis[idx[col]])) {
                    auto k = target.find(lab);
                    if (!k) {
                        inside = false;
                        continue;
                    }
                    M.set(*k, w * idx.size() + col, c);
                }
        ++rep.checked;
        if (!inside || !is_unimodular(M)) {
            rep.ok = false;
            rep.failures.push_back("piece (" + std::to_string(ln.first) + "," + std::to_string(ln.second) + ") not bijective");
        }
    }
    // intertwining on samples: (kind P/Q, (level, color)) plus E and F
    for (std::size_t w = 0; w < W.cols(); ++w)
        for (const auto& d : t.basis.labels()) {
            FockModule::Vector src{{{w, d}, BigInt(1)}};
            for (const auto& [kind, ai] : samples) {
                auto lhs = R_lin(model.fermion(kind, ai.first, ai.second, src));
                auto rhs = mod.fermion(kind, ai.first, ai.second, R(w, d));
                ++rep.checked;
                if (lhs != rhs) {
                    rep.ok = false;
                    rep.failures.push_back(std::string(kind_name(kind)) + " at level " + std::to_string(ai.first) + " on " + d.str());
                }
            }
            for (auto dir : {ShiftDir::E, ShiftDir::F}) {
                auto lhs = R_lin(model.shift(dir, src));
                auto rhs = mod.shift(dir, R(w, d));
                ++rep.checked;
                if (lhs != rhs) {
                    rep.ok = false;
                    rep.failures.push_back(std::string(dir == ShiftDir::E ? "E" : "F") + " on " + d.str());
                }
            }
        }
    return rep;
}

/// Standard E(r)-operators on the part of the Fock space empty above level 0.
struct StandardOps {
    int r;
    FockOp e() const { return op_shift(ShiftDir::E); }
    FockOp f() const {
        Mask full = IndexSubset::full(r).bits;
        return compose(op_shift(ShiftDir::F), compose(op_word(GenKind::P, 0, full, r), op_word(GenKind::Q, 0, full, r)));
    }
    FockOp p(int i) const { return op_fermion(GenKind::P, 0, i); }
    FockOp q(int i) const { return op_fermion(GenKind::Q, 0, i); }
};

} // namespace fermionlab
