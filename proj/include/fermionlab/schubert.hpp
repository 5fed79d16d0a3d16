#pragma once

#include "bigint.hpp"
#include "clifford.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermionlab {

class BoxError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Box {
    int a = 0, b = 0;
    friend bool operator==(const Box&, const Box&) = default;
};

/// Weakly decreasing positive parts, optionally bounded by a box (at most a parts, each <= b).
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<int> parts, std::optional<Box> box = std::nullopt) : parts_(std::move(parts)), box_(box) {
        while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
        for (std::size_t i = 0; i < parts_.size(); ++i)
            if (parts_[i] <= 0 || (i > 0 && parts_[i] > parts_[i - 1]))
                throw std::invalid_argument("Partition: parts must be positive and weakly decreasing");
        if (box_ && !fits(box_->a, box_->b)) throw BoxError("Partition: " + str() + " leaves B_{" + std::to_string(box_->a) + "," + std::to_string(box_->b) + "}");
    }

    const std::vector<int>& parts() const { return parts_; }
    const std::optional<Box>& box() const { return box_; }
    int length() const { return int(parts_.size()); }
    int part(int i) const { return i < length() ? parts_[std::size_t(i)] : 0; }
    int size() const {
        int s = 0;
        for (int p : parts_) s += p;
        return s;
    }
    bool empty() const { return parts_.empty(); }
    bool fits(int a, int b) const { return length() <= a && part(0) <= b; }

    Partition boxed(int a, int b) const { return Partition(parts_, Box{a, b}); }
    Partition unboxed() const { return Partition(parts_); }

    Partition transpose() const {
        std::vector<int> t(std::size_t(part(0)), 0);
        for (int p : parts_)
            for (int j = 0; j < p; ++j) ++t[std::size_t(j)];
        std::optional<Box> b;
        if (box_) b = Box{box_->b, box_->a};
        return Partition(std::move(t), b);
    }

    /// (b - lambda_a, ..., b - lambda_1) inside the attached box.
    Partition complement() const {
        if (!box_) throw BoxError("Partition: complement needs a box");
        std::vector<int> c(std::size_t(box_->a));
        for (int i = 0; i < box_->a; ++i) c[std::size_t(i)] = box_->b - part(box_->a - 1 - i);
        return Partition(std::move(c), box_);
    }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "," : "") + std::to_string(parts_[i]);
        return s + ")";
    }

    friend bool operator==(const Partition& x, const Partition& y) { return x.parts_ == y.parts_; }
    friend auto operator<=>(const Partition& x, const Partition& y) { return x.parts_ <=> y.parts_; }

private:
    std::vector<int> parts_;
    std::optional<Box> box_;
};

/// All partitions in B_{a,b}, ordered by size and then lexicographically.
inline std::vector<Partition> partitions_in_box(int a, int b) {
    std::vector<Partition> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int max) -> void {
        out.emplace_back(cur, Box{a, b});
        if (int(cur.size()) == a) return;
        for (int p = 1; p <= max; ++p) {
            cur.push_back(p);
            self(self, p);
            cur.pop_back();
        }
    };
    rec(rec, b);
    std::stable_sort(out.begin(), out.end(), [](const Partition& x, const Partition& y) {
        return x.size() != y.size() ? x.size() < y.size() : x < y;
    });
    return out;
}

/// (i_0 < ... < i_{d-1}) -> (i_{d-1} - d + 1 >= ... >= i_0) in B_{d, r-d}.
inline Partition iota(const IndexSubset& I) {
    auto el = I.elements();
    const int d = int(el.size());
    std::vector<int> parts(el.size());
    for (int k = 0; k < d; ++k) parts[std::size_t(k)] = el[std::size_t(d - 1 - k)] - (d - 1 - k);
    return Partition(std::move(parts), Box{d, I.rank - d});
}

inline IndexSubset iota_inverse(const Partition& lambda, int r) {
    if (!lambda.box()) throw BoxError("iota_inverse: partition needs a box B_{d,r-d}");
    const int d = lambda.box()->a;
    if (d < 0 || d + lambda.box()->b != r) throw BoxError("iota_inverse: box is not B_{d," + std::to_string(r) + "-d}");
    Mask bits = 0;
    for (int k = 0; k < d; ++k) bits |= Mask(1) << (lambda.part(d - 1 - k) + k);
    return IndexSubset(bits, r);
}

/// {r - 1 - i : i in I}.
inline IndexSubset reflect(const IndexSubset& I) {
    Mask bits = 0;
    for (int i : I.elements()) bits |= Mask(1) << (I.rank - 1 - i);
    return IndexSubset(bits, I.rank);
}

inline bool weight_identity(const IndexSubset& I) {
    const int d = I.len();
    return I.wt() == iota(I).size() + d * (d - 1) / 2;
}

/// Integer combination of Schur classes.
using SchurSum = std::map<Partition, BigInt>;

inline void schur_add(SchurSum& s, const Partition& p, const BigInt& c) {
    if (c == 0) return;
    auto [it, fresh] = s.emplace(p, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) s.erase(it);
    }
}

/// Horizontal strips of size k added to lambda; partitions leaving the box are dropped.
inline std::vector<Partition> pieri(const Partition& lambda, int k, std::optional<Box> box = std::nullopt) {
    std::vector<Partition> out;
    if (k < 0) return out;
    const int rows = lambda.length() + 1;
    std::vector<int> nu(static_cast<std::size_t>(rows));
    auto rec = [&](auto&& self, int i, int left) -> void {
        if (i == rows) {
            if (left == 0) {
                Partition p(nu);
                if (!box || p.fits(box->a, box->b)) out.push_back(std::move(p));
            }
            return;
        }
        int lo = lambda.part(i), hi = i == 0 ? lambda.part(0) + left : std::min(lambda.part(i - 1), lo + left);
        for (int v = lo; v <= hi; ++v) {
            nu[std::size_t(i)] = v;
            self(self, i + 1, left - (v - lo));
        }
    };
    rec(rec, 0, k);
    return out;
}

inline SchurSum pieri_sum(const SchurSum& s, int k, std::optional<Box> box = std::nullopt) {
    SchurSum out;
    for (const auto& [p, c] : s)
        for (const auto& q : pieri(p, k, box)) schur_add(out, q, c);
    return out;
}

/// Formal monomial in Chern classes: sorted multiset of positive indices; c_0 = 1.
using ChernMonomial = std::vector<int>;
using ChernPoly = std::map<ChernMonomial, BigInt>;

inline ChernPoly chern_mul(const ChernPoly& a, const ChernPoly& b) {
    ChernPoly out;
    for (const auto& [m, c] : a)
        for (const auto& [n, d] : b) {
            ChernMonomial k = m;
            k.insert(k.end(), n.begin(), n.end());
            std::sort(k.begin(), k.end());
            auto& v = out[k];
            v += c * d;
            if (v == 0) out.erase(k);
        }
    return out;
}

inline std::string chern_str(const ChernPoly& p) {
    if (p.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : p) {
        std::string coef = c.get_str();
        if (!s.empty()) s += coef[0] == '-' ? " - " : " + ";
        else if (coef[0] == '-') s += "-";
        if (coef[0] == '-') coef.erase(0, 1);
        std::string mono;
        for (std::size_t i = 0; i < m.size();) {
            std::size_t j = i;
            while (j < m.size() && m[j] == m[i]) ++j;
            mono += (mono.empty() ? "" : "*") + std::string("c") + std::to_string(m[i]) + (j - i > 1 ? "^" + std::to_string(j - i) : "");
            i = j;
        }
        if (mono.empty()) s += coef;
        else s += (coef == "1" ? "" : coef + "*") + mono;
    }
    return s;
}

/// det(c_{lambda_i - i + j}) as a polynomial in the formal classes c_k.
inline ChernPoly jacobi_trudi(const Partition& lambda) {
    const int n = lambda.length();
    if (n > 12) throw std::invalid_argument("jacobi_trudi: at most 12 parts");
    auto entry = [&](int i, int j) {
        int k = lambda.part(i) - i + j;
        ChernPoly e;
        if (k == 0) e[{}] = 1;
        if (k > 0) e[{k}] = 1;
        return e;
    };
    std::map<unsigned, ChernPoly> memo;
    auto rec = [&](auto&& self, unsigned used) -> ChernPoly {
        int row = __builtin_popcount(used);
        if (row == n) return ChernPoly{{{}, 1}};
        auto it = memo.find(used);
        if (it != memo.end()) return it->second;
        ChernPoly acc;
        int sign = 1;
        for (int j = 0; j < n; ++j) {
            if (used & (1u << j)) continue;
            auto e = entry(row, j);
            if (!e.empty()) {
                for (const auto& [m, c] : chern_mul(e, self(self, used | (1u << j)))) {
                    auto& v = acc[m];
                    v += sign * c;
                    if (v == 0) acc.erase(m);
                }
            }
            sign = -sign;
        }
        return memo[used] = acc;
    };
    return rec(rec, 0);
}

/// c_k -> special Schubert class (k), products by Pieri.
inline SchurSum evaluate_chern(const ChernPoly& p, std::optional<Box> box = std::nullopt) {
    SchurSum out;
    for (const auto& [m, c] : p) {
        SchurSum s{{Partition(), BigInt(1)}};
        for (int k : m) s = pieri_sum(s, k, box);
        for (const auto& [q, v] : s) schur_add(out, q, c * v);
    }
    return out;
}

/// s_lambda s_mu: s_mu is expanded by Jacobi-Trudi in the h_k, each applied by Pieri.
inline SchurSum lr_multiply(const Partition& lambda, const Partition& mu, std::optional<Box> box = std::nullopt) {
    SchurSum out;
    SchurSum base{{lambda.unboxed(), BigInt(1)}};
    if (box && !lambda.fits(box->a, box->b)) return out;
    for (const auto& [m, c] : jacobi_trudi(mu)) {
        SchurSum s = base;
        for (int k : m) s = pieri_sum(s, k, box);
        for (const auto& [q, v] : s) schur_add(out, q, c * v);
    }
    return out;
}

/// Coefficient of the point class ((n-d)^d) in the product of Schubert classes on Gr(n, d).
inline BigInt grassmannian_integrate(int n, int d, const std::vector<Partition>& classes) {
    if (d < 0 || d > n) throw std::invalid_argument("grassmannian_integrate: need 0 <= d <= n");
    Box box{d, n - d};
    int deg = 0;
    for (const auto& p : classes) deg += p.size();
    if (deg != d * (n - d)) return 0;
    SchurSum s{{Partition(), BigInt(1)}};
    for (const auto& p : classes) {
        SchurSum next;
        for (const auto& [q, c] : s)
            for (const auto& [t, v] : lr_multiply(q, p, box)) schur_add(next, t, c * v);
        s = std::move(next);
        if (s.empty()) return 0;
    }
    auto it = s.find(Partition(std::vector<int>(std::size_t(d), n - d)));
    return it == s.end() ? BigInt(0) : it->second;
}

struct PairingMatrix {
    int n = 0, d = 0;
    std::vector<Partition> labels;
    std::vector<std::vector<BigInt>> m;
    bool is_identity() const {
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j)
                if (m[i][j] != (i == j ? 1 : 0)) return false;
        return true;
    }
};

/// M[lambda][mu] = integral of Delta_lambda Delta_{mu^c} over Gr(n, d).
inline PairingMatrix duality_pairing(int n, int d) {
    PairingMatrix out{n, d, partitions_in_box(d, n - d), {}};
    const std::size_t k = out.labels.size();
    out.m.assign(k, std::vector<BigInt>(k, 0));
    parallel_for(k * k, [&](std::size_t idx) {
        const auto& l = out.labels[idx / k];
        const auto& u = out.labels[idx % k];
        out.m[idx / k][idx % k] = grassmannian_integrate(n, d, {l, u.complement()});
    });
    return out;
}

} // namespace fermionlab
