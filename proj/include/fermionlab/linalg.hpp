#pragma once

#include "bigint.hpp"
#include "sparse_map.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fermionlab {

using RatRow = std::map<std::size_t, BigRational>;
using IntVec = std::vector<BigInt>;

/// Incremental rational row echelon form; rows are kept with leading entry 1.
class Echelon {
  public:
    explicit Echelon(std::size_t ncols) : ncols_(ncols) {}

    /// Reduces row against the current pivots and keeps it if independent.
    bool insert(RatRow row) {
        reduce(row);
        if (row.empty()) return false;
        auto lead = row.begin()->first;
        BigRational inv = 1 / row.begin()->second;
        for (auto& [c, v] : row) v *= inv;
        pivots_.emplace(lead, std::move(row));
        return true;
    }

    void reduce(RatRow& row) const {
        auto it = row.begin();
        while (it != row.end()) {
            auto p = pivots_.find(it->first);
            if (p == pivots_.end()) {
                ++it;
                continue;
            }
            BigRational factor = it->second;
            std::size_t col = it->first;
            for (const auto& [c, v] : p->second) {
                auto& slot = row[c];
                slot -= factor * v;
            }
            for (auto jt = row.begin(); jt != row.end();)
                jt = (jt->second == 0) ? row.erase(jt) : std::next(jt);
            it = row.upper_bound(col);
        }
    }

    std::size_t rank() const { return pivots_.size(); }
    std::size_t ncols() const { return ncols_; }

    /// Fully reduced rows, ordered by pivot column.
    std::vector<std::pair<std::size_t, RatRow>> reduced() const {
        std::map<std::size_t, RatRow> rows(pivots_.begin(), pivots_.end());
        for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
            for (auto jt = std::next(it); jt != rows.rend(); ++jt) {
                auto& upper = jt->second;
                auto f = upper.find(it->first);
                if (f == upper.end()) continue;
                BigRational factor = f->second;
                for (const auto& [c, v] : it->second) upper[c] -= factor * v;
                for (auto kt = upper.begin(); kt != upper.end();)
                    kt = (kt->second == 0) ? upper.erase(kt) : std::next(kt);
            }
        }
        return {rows.begin(), rows.end()};
    }

  private:
    std::size_t ncols_;
    std::map<std::size_t, RatRow> pivots_;
};

inline Echelon row_echelon(const SparseIntMap& a) {
    auto t = a.transpose();
    Echelon e(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto& col = t.column(i);
        if (col.empty()) continue;
        RatRow row;
        for (const auto& [j, v] : col) row.emplace(j, BigRational(v));
        e.insert(std::move(row));
    }
    return e;
}

inline std::size_t rank(const SparseIntMap& a) { return row_echelon(a).rank(); }

/// Dense integer matrix, row-major.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, BigInt(0)) {}

    static DenseMatrix from_sparse(const SparseIntMap& m) {
        DenseMatrix d(m.rows(), m.cols());
        m.for_each([&](std::size_t i, std::size_t j, const BigInt& v) { d(i, j) = v; });
        return d;
    }

    SparseIntMap to_sparse() const {
        SparseIntMap m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0) m.set(i, j, (*this)(i, j));
        return m;
    }

    BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BigInt> a_;
};

/// Fraction-free Bareiss elimination.
inline BigInt determinant(DenseMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    std::size_t n = m.rows();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t s = k + 1;
            while (s < n && m(s, k) == 0) ++s;
            if (s == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(s, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                BigInt t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = t;
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

inline BigInt determinant(const SparseIntMap& m) { return determinant(DenseMatrix::from_sparse(m)); }

/// Every column has a single entry, equal to +-1, and no two columns share a row.
inline bool is_signed_injection(const SparseIntMap& m) {
    std::vector<char> used(m.rows(), 0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const auto& c = m.column(j);
        if (c.size() != 1 || !is_unit(c.begin()->second) || used[c.begin()->first]) return false;
        used[c.begin()->first] = 1;
    }
    return true;
}

inline bool is_injective(const SparseIntMap& m) { return is_signed_injection(m) || rank(m) == m.cols(); }

inline bool is_unimodular(const SparseIntMap& m) {
    if (m.rows() != m.cols()) return false;
    if (is_signed_injection(m)) return true;
    if (rank(m) != m.rows()) return false;
    return is_unit(determinant(m));
}

namespace detail {

// Column-style Hermite reduction: returns a Z-basis of {x in Z^n : rows * x = 0}.
inline std::vector<IntVec> integer_kernel_hnf(std::vector<IntVec> rows, std::size_t n) {
    std::vector<IntVec> u(n, IntVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
    // columns of the working matrix are indexed by j; u[j] is the transform column j
    std::vector<char> dead(n, 0);
    for (const auto& row0 : rows) {
        // current row image under the transform
        IntVec row(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (dead[j]) continue;
            BigInt s = 0;
            for (std::size_t k = 0; k < n; ++k)
                if (u[j][k] != 0 && row0[k] != 0) s += u[j][k] * row0[k];
            row[j] = s;
        }
        std::optional<std::size_t> piv;
        for (std::size_t j = 0; j < n; ++j) {
            if (dead[j] || row[j] == 0) continue;
            if (!piv) {
                piv = j;
                continue;
            }
            std::size_t p = *piv;
            BigInt g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), row[p].get_mpz_t(), row[j].get_mpz_t());
            BigInt ap = row[p] / g, aj = row[j] / g;
            for (std::size_t k = 0; k < n; ++k) {
                BigInt np = s * u[p][k] + t * u[j][k];
                BigInt nj = ap * u[j][k] - aj * u[p][k];
                u[p][k] = np;
                u[j][k] = nj;
            }
            row[p] = g;
            row[j] = 0;
        }
        if (piv) dead[*piv] = 1;
    }
    std::vector<IntVec> out;
    for (std::size_t j = 0; j < n; ++j)
        if (!dead[j]) out.push_back(u[j]);
    return out;
}

} // namespace detail

/// Saturated Z-basis of ker(a) as columns of an n x k matrix.
inline SparseIntMap integer_kernel(const SparseIntMap& a) {
    const std::size_t n = a.cols();
    auto ech = row_echelon(a);
    auto red = ech.reduced();
    std::vector<char> is_pivot(n, 0);
    bool integral = true;
    for (const auto& [p, row] : red) {
        is_pivot[p] = 1;
        for (const auto& [c, v] : row)
            if (v.get_den() != 1) integral = false;
    }
    std::vector<IntVec> basis;
    if (integral) {
        for (std::size_t fcol = 0; fcol < n; ++fcol) {
            if (is_pivot[fcol]) continue;
            IntVec x(n, 0);
            x[fcol] = 1;
            for (const auto& [p, row] : red) {
                auto it = row.find(fcol);
                if (it != row.end()) x[p] = -it->second.get_num();
            }
            basis.push_back(std::move(x));
        }
    } else {
        std::vector<IntVec> rows;
        for (const auto& [p, row] : red) {
            BigInt l = 1;
            for (const auto& [c, v] : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
            IntVec x(n, 0);
            for (const auto& [c, v] : row) x[c] = BigRational(v * l).get_num();
            rows.push_back(std::move(x));
        }
        basis = detail::integer_kernel_hnf(std::move(rows), n);
    }
    SparseIntMap k(n, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            if (basis[j][i] != 0) k.set(i, j, basis[j][i]);
    return k;
}

/// Kernel of the intersection of several maps sharing a domain.
inline SparseIntMap common_kernel(const std::vector<SparseIntMap>& maps, std::size_t domain_dim) {
    if (maps.empty()) return SparseIntMap::identity(domain_dim);
    return integer_kernel(SparseIntMap::vstack(maps));
}

/// Solves a x = b over Q; returns x if a solution exists.
inline std::optional<std::vector<BigRational>> rational_solve(const SparseIntMap& a, const IntVec& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("rational_solve: dimension mismatch");
    const std::size_t n = a.cols();
    auto aug = SparseIntMap::hconcat(a, [&] {
        SparseIntMap c(a.rows(), 1);
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b[i] != 0) c.set(i, 0, b[i]);
        return c;
    }());
    auto red = row_echelon(aug).reduced();
    std::vector<BigRational> x(n, 0);
    for (const auto& [p, row] : red) {
        if (p == n) return std::nullopt;
        auto it = row.find(n);
        if (it != row.end()) x[p] = it->second;
    }
    return x;
}

/// Integral solution of a x = b if one exists among the rational solutions with free variables 0.
inline std::optional<IntVec> integer_solve(const SparseIntMap& a, const IntVec& b) {
    auto x = rational_solve(a, b);
    if (!x) return std::nullopt;
    IntVec out(x->size());
    for (std::size_t i = 0; i < x->size(); ++i) {
        if ((*x)[i].get_den() != 1) return std::nullopt;
        out[i] = (*x)[i].get_num();
    }
    return out;
}

/// Inverse of a unimodular matrix (throws otherwise).
inline SparseIntMap unimodular_inverse(const SparseIntMap& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("unimodular_inverse: not square");
    const std::size_t n = m.rows();
    auto aug = SparseIntMap::hconcat(m, SparseIntMap::identity(n));
    auto red = row_echelon(aug).reduced();
    if (red.size() != n) throw std::domain_error("unimodular_inverse: singular matrix");
    SparseIntMap inv(n, n);
    for (const auto& [p, row] : red) {
        if (p >= n) throw std::domain_error("unimodular_inverse: singular matrix");
        for (const auto& [c, v] : row) {
            if (c < n) continue;
            if (v.get_den() != 1) throw std::domain_error("unimodular_inverse: inverse not integral");
            inv.set(p, c - n, v.get_num());
        }
    }
    return inv;
}

/// True when the columns of a generate Z^rows.
inline bool columns_generate_lattice(const SparseIntMap& a) {
    if (rank(a) != a.rows()) return false;
    // Column Hermite form of a: reduce columns of a (as rows of a^T) by unimodular ops.
    std::size_t m = a.rows();
    std::vector<IntVec> cols;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        IntVec c(m, 0);
        for (const auto& [i, v] : a.column(j)) c[i] = v;
        cols.push_back(std::move(c));
    }
    std::size_t used = 0;
    for (std::size_t i = 0; i < m; ++i) {
        std::optional<std::size_t> piv;
        for (std::size_t j = used; j < cols.size(); ++j) {
            if (cols[j][i] == 0) continue;
            if (!piv) {
                piv = j;
                continue;
            }
            std::size_t p = *piv;
            BigInt g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), cols[p][i].get_mpz_t(), cols[j][i].get_mpz_t());
            BigInt ap = cols[p][i] / g, aj = cols[j][i] / g;
            for (std::size_t k = 0; k < m; ++k) {
                BigInt np = s * cols[p][k] + t * cols[j][k];
                BigInt nj = ap * cols[j][k] - aj * cols[p][k];
                cols[p][k] = np;
                cols[j][k] = nj;
            }
        }
        if (!piv) return false;
        if (!is_unit(cols[*piv][i])) return false;
        std::swap(cols[*piv], cols[used]);
        ++used;
    }
    return true;
}

} // namespace fermionlab
