#pragma once

#include "bigint.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fermionlab {

/// Ordered list of basis labels with O(1) reverse lookup.
template <class Label, class Hash = std::hash<Label>>
class BasisRegistry {
  public:
    BasisRegistry() = default;
    explicit BasisRegistry(std::vector<Label> labels) {
        for (auto& l : labels) insert(std::move(l));
    }

    /// Returns the index of l, appending it if new.
    std::size_t insert(Label l) {
        auto it = index_.find(l);
        if (it != index_.end()) return it->second;
        std::size_t k = labels_.size();
        index_.emplace(l, k);
        labels_.push_back(std::move(l));
        return k;
    }

    std::optional<std::size_t> find(const Label& l) const {
        auto it = index_.find(l);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const Label& l) const { return index_.count(l) != 0; }
    const Label& operator[](std::size_t k) const { return labels_[k]; }
    std::size_t size() const { return labels_.size(); }
    const std::vector<Label>& labels() const { return labels_; }

  private:
    std::vector<Label> labels_;
    std::unordered_map<Label, std::size_t, Hash> index_;
};

class DenseMatrix;

/// Integer linear map Z^cols -> Z^rows stored column-wise; zeros are never stored.
class SparseIntMap {
  public:
    using Column = std::map<std::size_t, BigInt>;

    SparseIntMap() = default;
    SparseIntMap(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(cols) {}

    static SparseIntMap identity(std::size_t n) {
        SparseIntMap m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace(i, 1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Column& column(std::size_t j) const { return data_.at(j); }

    void set_column(std::size_t j, Column c) {
        for (auto it = c.begin(); it != c.end();) {
            if (it->first >= rows_) throw std::out_of_range("SparseIntMap::set_column: row out of range");
            if (it->second == 0)
                it = c.erase(it);
            else
                ++it;
        }
        data_.at(j) = std::move(c);
    }

    void add_to(std::size_t i, std::size_t j, const BigInt& v) {
        if (i >= rows_ || j >= cols_) throw std::out_of_range("SparseIntMap::add_to");
        if (v == 0) return;
        auto& col = data_[j];
        auto [it, inserted] = col.emplace(i, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) col.erase(it);
        }
    }

    void set(std::size_t i, std::size_t j, const BigInt& v) {
        if (i >= rows_ || j >= cols_) throw std::out_of_range("SparseIntMap::set");
        if (v == 0)
            data_[j].erase(i);
        else
            data_[j][i] = v;
    }

    BigInt at(std::size_t i, std::size_t j) const {
        const auto& col = data_.at(j);
        auto it = col.find(i);
        return it == col.end() ? BigInt(0) : it->second;
    }

    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& c : data_) n += c.size();
        return n;
    }

    bool is_zero() const { return nonzeros() == 0; }

    BigInt max_abs() const {
        BigInt m = 0;
        for (const auto& c : data_)
            for (const auto& [i, v] : c)
                if (abs(v) > m) m = abs(v);
        return m;
    }

    SparseIntMap transpose() const {
        SparseIntMap t(cols_, rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : data_[j]) t.data_[i].emplace(j, v);
        return t;
    }

    std::vector<BigInt> apply(const std::vector<BigInt>& x) const {
        if (x.size() != cols_) throw std::invalid_argument("SparseIntMap::apply: dimension mismatch");
        std::vector<BigInt> y(rows_, 0);
        for (std::size_t j = 0; j < cols_; ++j) {
            if (x[j] == 0) continue;
            for (const auto& [i, v] : data_[j]) y[i] += v * x[j];
        }
        return y;
    }

    friend SparseIntMap operator*(const SparseIntMap& a, const SparseIntMap& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("SparseIntMap: composition dimension mismatch");
        SparseIntMap c(a.rows_, b.cols_);
        for (std::size_t j = 0; j < b.cols_; ++j) {
            Column acc;
            for (const auto& [k, bv] : b.data_[j])
                for (const auto& [i, av] : a.data_[k]) acc[i] += av * bv;
            for (auto it = acc.begin(); it != acc.end();)
                it = (it->second == 0) ? acc.erase(it) : std::next(it);
            c.data_[j] = std::move(acc);
        }
        return c;
    }

    SparseIntMap& operator+=(const SparseIntMap& b) {
        check_same_shape(b);
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : b.data_[j]) add_to(i, j, v);
        return *this;
    }

    SparseIntMap& operator-=(const SparseIntMap& b) {
        check_same_shape(b);
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : b.data_[j]) add_to(i, j, -v);
        return *this;
    }

    SparseIntMap& operator*=(const BigInt& s) {
        if (s == 0) {
            for (auto& c : data_) c.clear();
            return *this;
        }
        for (auto& c : data_)
            for (auto& [i, v] : c) v *= s;
        return *this;
    }

    friend SparseIntMap operator+(SparseIntMap a, const SparseIntMap& b) { return a += b; }
    friend SparseIntMap operator-(SparseIntMap a, const SparseIntMap& b) { return a -= b; }
    friend SparseIntMap operator*(const BigInt& s, SparseIntMap a) { return a *= s; }
    friend SparseIntMap operator-(SparseIntMap a) { return a *= BigInt(-1); }

    friend bool operator==(const SparseIntMap& a, const SparseIntMap& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Horizontal concatenation [a | b].
    static SparseIntMap hconcat(const SparseIntMap& a, const SparseIntMap& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("hconcat: row mismatch");
        SparseIntMap c(a.rows_, a.cols_ + b.cols_);
        for (std::size_t j = 0; j < a.cols_; ++j) c.data_[j] = a.data_[j];
        for (std::size_t j = 0; j < b.cols_; ++j) c.data_[a.cols_ + j] = b.data_[j];
        return c;
    }

    /// Vertical concatenation of blocks sharing the column count.
    static SparseIntMap vstack(const std::vector<SparseIntMap>& blocks) {
        if (blocks.empty()) return {};
        std::size_t cols = blocks.front().cols_, rows = 0;
        for (const auto& b : blocks) {
            if (b.cols_ != cols) throw std::invalid_argument("vstack: column mismatch");
            rows += b.rows_;
        }
        SparseIntMap c(rows, cols);
        std::size_t off = 0;
        for (const auto& b : blocks) {
            for (std::size_t j = 0; j < cols; ++j)
                for (const auto& [i, v] : b.data_[j]) c.data_[j].emplace(off + i, v);
            off += b.rows_;
        }
        return c;
    }

    /// Kronecker product a (x) b with index (ia * b.rows + ib, ja * b.cols + jb).
    static SparseIntMap kron(const SparseIntMap& a, const SparseIntMap& b) {
        SparseIntMap c(a.rows_ * b.rows_, a.cols_ * b.cols_);
        for (std::size_t ja = 0; ja < a.cols_; ++ja)
            for (const auto& [ia, va] : a.data_[ja])
                for (std::size_t jb = 0; jb < b.cols_; ++jb)
                    for (const auto& [ib, vb] : b.data_[jb])
                        c.data_[ja * b.cols_ + jb].emplace(ia * b.rows_ + ib, va * vb);
        return c;
    }

    /// Visits nonzero entries in column-major order.
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : data_[j]) f(i, j, v);
    }

  private:
    void check_same_shape(const SparseIntMap& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("SparseIntMap: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Column> data_;
};

/// Commutator and anticommutator of square maps.
inline SparseIntMap commutator(const SparseIntMap& a, const SparseIntMap& b) { return a * b - b * a; }
inline SparseIntMap anticommutator(const SparseIntMap& a, const SparseIntMap& b) { return a * b + b * a; }

/// A map realized on a finite window of an infinite module. Column j is exact
/// when no part of the true image of basis vector j fell outside the window.
struct TruncatedOperator {
    SparseIntMap map;
    std::vector<char> exact;

    TruncatedOperator() = default;
    TruncatedOperator(SparseIntMap m, std::vector<char> e) : map(std::move(m)), exact(std::move(e)) {
        if (exact.size() != map.cols()) throw std::invalid_argument("TruncatedOperator: exactness flags mismatch");
    }

    static TruncatedOperator exact_map(SparseIntMap m) {
        std::vector<char> e(m.cols(), 1);
        return {std::move(m), std::move(e)};
    }

    static TruncatedOperator identity(std::size_t n) { return exact_map(SparseIntMap::identity(n)); }

    std::size_t rows() const { return map.rows(); }
    std::size_t cols() const { return map.cols(); }

    std::size_t exact_count() const {
        std::size_t n = 0;
        for (char c : exact) n += (c != 0);
        return n;
    }

    /// Same map with every inexact column cleared.
    SparseIntMap restricted() const {
        SparseIntMap out(map.rows(), map.cols());
        for (std::size_t j = 0; j < map.cols(); ++j)
            if (exact[j]) out.set_column(j, map.column(j));
        return out;
    }

    friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
        std::vector<char> e(b.cols(), 0);
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (!b.exact[j]) continue;
            bool ok = true;
            for (const auto& [k, v] : b.map.column(j))
                if (!a.exact[k]) {
                    ok = false;
                    break;
                }
            e[j] = ok;
        }
        return {a.map * b.map, std::move(e)};
    }

    friend TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
        std::vector<char> e(a.cols());
        for (std::size_t j = 0; j < a.cols(); ++j) e[j] = a.exact[j] && b.exact.at(j);
        return {a.map + b.map, std::move(e)};
    }

    friend TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
        std::vector<char> e(a.cols());
        for (std::size_t j = 0; j < a.cols(); ++j) e[j] = a.exact[j] && b.exact.at(j);
        return {a.map - b.map, std::move(e)};
    }

    friend TruncatedOperator operator*(const BigInt& s, TruncatedOperator a) {
        a.map *= s;
        return a;
    }
};

inline TruncatedOperator commutator(const TruncatedOperator& a, const TruncatedOperator& b) {
    return a * b - b * a;
}
inline TruncatedOperator anticommutator(const TruncatedOperator& a, const TruncatedOperator& b) {
    return a * b + b * a;
}

/// True when x restricted to its exact columns equals y there (y's exactness is ignored).
inline bool equal_on_exact(const TruncatedOperator& x, const SparseIntMap& y) {
    for (std::size_t j = 0; j < x.cols(); ++j)
        if (x.exact[j] && x.map.column(j) != y.column(j)) return false;
    return true;
}

/// Columns where both are exact must agree.
inline bool equal_on_common_exact(const TruncatedOperator& x, const TruncatedOperator& y) {
    for (std::size_t j = 0; j < x.cols(); ++j)
        if (x.exact[j] && y.exact.at(j) && x.map.column(j) != y.map.column(j)) return false;
    return true;
}

} // namespace fermionlab
