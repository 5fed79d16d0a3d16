#pragma once

#include "fock.hpp"
#include "sparse_map.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace fermionlab {

struct AffineGenerator {
    int i = 0, j = 0, a = 0;
    friend auto operator<=>(const AffineGenerator&, const AffineGenerator&) = default;
};

/// sum_m :Q_{m,i} P_{m+a,j}: on one diagram; terms with m+a <= 0 are ordered -P Q.
inline FockVector bilinear_on_basis(int i, int j, int a, const MayaDiagram& d) {
    const int span = std::abs(a) + 2;
    const int m_lo = std::min(d.m_lo(), -span), m_hi = std::max(d.m_hi() + 1, 1) + span;
    FockVector out;
    auto v = basis_vector(d);
    for (int m = m_lo; m <= m_hi; ++m) {
        int n = m + a;
        if (n > 0) {
            auto w = apply_fermion(GenKind::P, n, j, v);
            if (w.empty()) continue;
            for (const auto& [t, c] : apply_fermion(GenKind::Q, m, i, w)) lc_add(out, t, c);
        } else {
            auto w = apply_fermion(GenKind::Q, m, i, v);
            if (w.empty()) continue;
            for (const auto& [t, c] : apply_fermion(GenKind::P, n, j, w)) lc_add(out, t, BigInt(-c));
        }
    }
    return out;
}

inline FockOp op_bilinear(int i, int j, int a) {
    return [=](const MayaDiagram& d) { return bilinear_on_basis(i, j, a, d); };
}

class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline TruncatedOperator bilinear(int i, int j, int a, const FockTruncation& t) {
    if (i < 0 || j < 0 || i >= t.r || j >= t.r) throw std::out_of_range("bilinear: color out of range");
    auto op = realize(t, op_bilinear(i, j, a));
    if (op.exact_count() == 0) throw WindowError("bilinear: no basis diagram has its image inside the window");
    return op;
}

/// Lazily realized generators on one truncation.
class AffineFamily {
public:
    explicit AffineFamily(const FockTruncation& t) : t_(&t) {}
    const TruncatedOperator& get(int i, int j, int a) {
        AffineGenerator g{i, j, a};
        auto it = cache_.find(g);
        if (it == cache_.end()) it = cache_.emplace(g, bilinear(i, j, a, *t_)).first;
        return it->second;
    }
    const FockTruncation& truncation() const { return *t_; }

private:
    const FockTruncation* t_;
    std::map<AffineGenerator, TruncatedOperator> cache_;
};

enum class CentralPolicy { Charge, Identity };

inline const char* central_name(CentralPolicy p) { return p == CentralPolicy::Charge ? "charge" : "identity"; }

/// K as a diagonal operator on the window.
inline TruncatedOperator central_operator(const FockTruncation& t, CentralPolicy policy) {
    SparseIntMap m(t.size(), t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        long long v = policy == CentralPolicy::Charge ? charge(t.basis[j]) : 1;
        if (v != 0) m.set(j, j, BigInt(static_cast<long>(v)));
    }
    return TruncatedOperator::exact_map(std::move(m));
}

/// [e_ij^a, e_kl^b] - (d_jk e_il^{a+b} - d_il e_kj^{a+b}) - a d_il d_jk d_{a,-b} K.
inline TruncatedOperator affine_residual(int i, int j, int k, int l, int a, int b, AffineFamily& fam,
                                         CentralPolicy policy = CentralPolicy::Charge) {
    const auto& t = fam.truncation();
    auto res = commutator(fam.get(i, j, a), fam.get(k, l, b));
    if (j == k) res = res - fam.get(i, l, a + b);
    if (i == l) res = res + fam.get(k, j, a + b);
    if (i == l && j == k && a == -b && a != 0) res = res - BigInt(a) * central_operator(t, policy);
    return res;
}

struct RelationResidual {
    std::string name;
    BigInt max_abs;
    std::size_t exact_columns = 0;
};

struct ResidualReport {
    std::size_t relations = 0, failures = 0, vacuous = 0, exact_columns = 0;
    BigInt max_residual = 0;
    std::vector<std::string> failed;
    std::vector<RelationResidual> residuals;
};

inline std::string relation_name(int i, int j, int k, int l, int a, int b) {
    return "[e_" + std::to_string(i) + std::to_string(j) + "^" + std::to_string(a) + ",e_" + std::to_string(k) +
           std::to_string(l) + "^" + std::to_string(b) + "]";
}

/// All residuals with color indices in [r] and modes in [-modes, modes].
inline ResidualReport affine_check(AffineFamily& fam, int modes, CentralPolicy policy = CentralPolicy::Charge) {
    const int r = fam.truncation().r;
    ResidualReport rep;
    for (int a = -2 * modes; a <= 2 * modes; ++a)
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) fam.get(i, j, a);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                for (int l = 0; l < r; ++l)
                    for (int a = -modes; a <= modes; ++a)
                        for (int b = -modes; b <= modes; ++b) {
                            auto res = affine_residual(i, j, k, l, a, b, fam, policy);
                            ++rep.relations;
                            auto cols = res.exact_count();
                            rep.exact_columns += cols;
                            if (cols == 0) ++rep.vacuous;
                            auto m = res.restricted().max_abs();
                            if (m > rep.max_residual) rep.max_residual = m;
                            rep.residuals.push_back({relation_name(i, j, k, l, a, b), m, cols});
                            if (m != 0) {
                                ++rep.failures;
                                rep.failed.push_back(relation_name(i, j, k, l, a, b));
                            }
                        }
    return rep;
}

class BlockError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Per-charge diagonal blocks; throws on any entry between different charges.
inline std::map<long long, SparseIntMap> charge_blocks(const TruncatedOperator& op, const FockTruncation& t) {
    std::map<long long, std::vector<std::size_t>> sectors;
    std::vector<std::size_t> local(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        auto& s = sectors[charge(t.basis[j])];
        local[j] = s.size();
        s.push_back(j);
    }
    std::map<long long, SparseIntMap> blocks;
    for (const auto& [c, idx] : sectors) blocks.emplace(c, SparseIntMap(idx.size(), idx.size()));
    op.map.for_each([&](std::size_t i, std::size_t j, const BigInt& v) {
        long long ci = charge(t.basis[i]), cj = charge(t.basis[j]);
        if (ci != cj)
            throw BlockError("charge_blocks: entry from charge " + std::to_string(cj) + " to " + std::to_string(ci));
        blocks.at(ci).set(local[i], local[j], v);
    });
    return blocks;
}

/// Common weight shift of all nonzero exact entries, if there is one.
inline std::optional<long long> weight_shift(const TruncatedOperator& op, const FockTruncation& t) {
    std::optional<long long> s;
    bool consistent = true;
    for (std::size_t j = 0; j < op.cols() && consistent; ++j) {
        if (!op.exact[j]) continue;
        for (const auto& [i, v] : op.map.column(j)) {
            long long d = weight(t.basis[i]) - weight(t.basis[j]);
            if (s && *s != d) consistent = false;
            s = d;
        }
    }
    return consistent ? s : std::nullopt;
}

/// d = sign * (weight operator).
inline TruncatedOperator derivation_operator(const FockTruncation& t, int sign) {
    SparseIntMap m(t.size(), t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        long long w = sign * weight(t.basis[j]);
        if (w != 0) m.set(j, j, BigInt(static_cast<long>(w)));
    }
    return TruncatedOperator::exact_map(std::move(m));
}

struct DerivationReport {
    int sign = 0;
    bool consistent = false;
    std::size_t checked = 0;
    std::vector<std::string> failed;
};

/// Fixes the sign of d from [d, e_00^1] = e_00^1, then checks [d, e_ij^a] = a e_ij^a for all
/// generators with |a| <= modes.
inline DerivationReport derivation_sign(AffineFamily& fam, int modes) {
    const auto& t = fam.truncation();
    DerivationReport rep;
    const auto& probe = fam.get(0, 0, 1);
    for (int s : {1, -1}) {
        auto c = commutator(derivation_operator(t, s), probe) - probe;
        if (c.restricted().is_zero()) {
            rep.sign = s;
            break;
        }
    }
    if (rep.sign == 0) return rep;
    rep.consistent = true;
    auto d = derivation_operator(t, rep.sign);
    for (int a = -modes; a <= modes; ++a)
        for (int i = 0; i < t.r; ++i)
            for (int j = 0; j < t.r; ++j) {
                const auto& g = fam.get(i, j, a);
                ++rep.checked;
                if (!(commutator(d, g) - BigInt(a) * g).restricted().is_zero()) {
                    rep.consistent = false;
                    rep.failed.push_back("[d,e_" + std::to_string(i) + std::to_string(j) + "^" + std::to_string(a) + "]");
                }
            }
    return rep;
}

} // namespace fermionlab
