#pragma once

#include "bigint.hpp"
#include "fock.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fermionlab {

/// Integer Laurent polynomial in x, y stored densely over [x_lo, x_lo+nx) x [y_lo, y_lo+ny).
class LaurentPoly {
public:
    LaurentPoly() = default;
    static LaurentPoly constant(const BigInt& c) { return monomial(0, 0, c); }
    static LaurentPoly monomial(int i, int j, const BigInt& c = 1) {
        LaurentPoly p;
        if (c != 0) {
            p.x_lo_ = i;
            p.y_lo_ = j;
            p.nx_ = p.ny_ = 1;
            p.a_.assign(1, c);
        }
        return p;
    }

    bool is_zero() const { return nx_ == 0; }
    int x_lo() const { return x_lo_; }
    int y_lo() const { return y_lo_; }
    int x_hi() const { return x_lo_ + nx_ - 1; }
    int y_hi() const { return y_lo_ + ny_ - 1; }

    BigInt at(int i, int j) const {
        if (is_zero() || i < x_lo_ || i > x_hi() || j < y_lo_ || j > y_hi()) return 0;
        return a_[std::size_t(i - x_lo_) * ny_ + (j - y_lo_)];
    }

    void add(int i, int j, const BigInt& c) {
        if (c == 0) return;
        grow(i, j);
        a_[std::size_t(i - x_lo_) * ny_ + (j - y_lo_)] += c;
        trim();
    }

    template <class F>
    void for_each(F&& f) const {
        for (int i = 0; i < nx_; ++i)
            for (int j = 0; j < ny_; ++j) {
                const auto& c = a_[std::size_t(i) * ny_ + j];
                if (c != 0) f(x_lo_ + i, y_lo_ + j, c);
            }
    }

    std::size_t terms() const {
        std::size_t n = 0;
        for_each([&](int, int, const BigInt&) { ++n; });
        return n;
    }

    /// Lowest term in (x, y) lexicographic order.
    std::optional<std::pair<int, int>> leading() const {
        std::optional<std::pair<int, int>> out;
        for_each([&](int i, int j, const BigInt&) {
            if (!out) out = std::make_pair(i, j);
        });
        return out;
    }

    /// Sum of all coefficients.
    BigInt evaluate_at_one() const {
        BigInt s = 0;
        for_each([&](int, int, const BigInt& c) { s += c; });
        return s;
    }

    /// x -> x^a y^b, y -> x^c y^d.
    LaurentPoly substitute(int a, int b, int c, int d) const {
        LaurentPoly out;
        for_each([&](int i, int j, const BigInt& v) { out.add(i * a + j * c, i * b + j * d, v); });
        return out;
    }

    LaurentPoly shifted(int di, int dj) const {
        LaurentPoly p = *this;
        if (!p.is_zero()) {
            p.x_lo_ += di;
            p.y_lo_ += dj;
        }
        return p;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        o.for_each([&](int i, int j, const BigInt& c) { add(i, j, c); });
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        o.for_each([&](int i, int j, const BigInt& c) { add(i, j, -c); });
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const BigInt& s, const LaurentPoly& p) {
        LaurentPoly out;
        if (s != 0) {
            out = p;
            for (auto& c : out.a_) c *= s;
        }
        return out;
    }
    friend LaurentPoly operator*(const LaurentPoly& p, const LaurentPoly& q) {
        LaurentPoly out;
        if (p.is_zero() || q.is_zero()) return out;
        out.x_lo_ = p.x_lo_ + q.x_lo_;
        out.y_lo_ = p.y_lo_ + q.y_lo_;
        out.nx_ = p.nx_ + q.nx_ - 1;
        out.ny_ = p.ny_ + q.ny_ - 1;
        out.a_.assign(std::size_t(out.nx_) * out.ny_, 0);
        for (int i = 0; i < p.nx_; ++i)
            for (int j = 0; j < p.ny_; ++j) {
                const auto& c = p.a_[std::size_t(i) * p.ny_ + j];
                if (c == 0) continue;
                for (int k = 0; k < q.nx_; ++k)
                    for (int l = 0; l < q.ny_; ++l) {
                        const auto& d = q.a_[std::size_t(k) * q.ny_ + l];
                        if (d != 0) out.a_[std::size_t(i + k) * out.ny_ + (j + l)] += c * d;
                    }
            }
        out.trim();
        return out;
    }
    friend bool operator==(const LaurentPoly& p, const LaurentPoly& q) {
        return p.x_lo_ == q.x_lo_ && p.y_lo_ == q.y_lo_ && p.nx_ == q.nx_ && p.ny_ == q.ny_ && p.a_ == q.a_;
    }

private:
    void grow(int i, int j) {
        if (is_zero()) {
            x_lo_ = i;
            y_lo_ = j;
            nx_ = ny_ = 1;
            a_.assign(1, 0);
            return;
        }
        int xl = std::min(x_lo_, i), xh = std::max(x_hi(), i);
        int yl = std::min(y_lo_, j), yh = std::max(y_hi(), j);
        if (xl == x_lo_ && xh == x_hi() && yl == y_lo_ && yh == y_hi()) return;
        int nx = xh - xl + 1, ny = yh - yl + 1;
        std::vector<BigInt> b(std::size_t(nx) * ny, 0);
        for (int a = 0; a < nx_; ++a)
            for (int c = 0; c < ny_; ++c)
                b[std::size_t(a + x_lo_ - xl) * ny + (c + y_lo_ - yl)] = std::move(a_[std::size_t(a) * ny_ + c]);
        a_ = std::move(b);
        x_lo_ = xl;
        y_lo_ = yl;
        nx_ = nx;
        ny_ = ny;
    }

    void trim() {
        if (is_zero()) return;
        int xl = nx_, xh = -1, yl = ny_, yh = -1;
        for (int i = 0; i < nx_; ++i)
            for (int j = 0; j < ny_; ++j)
                if (a_[std::size_t(i) * ny_ + j] != 0) {
                    xl = std::min(xl, i);
                    xh = std::max(xh, i);
                    yl = std::min(yl, j);
                    yh = std::max(yh, j);
                }
        if (xh < 0) {
            *this = LaurentPoly();
            return;
        }
        if (xl == 0 && yl == 0 && xh == nx_ - 1 && yh == ny_ - 1) return;
        int nx = xh - xl + 1, ny = yh - yl + 1;
        std::vector<BigInt> b(std::size_t(nx) * ny);
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) b[std::size_t(i) * ny + j] = std::move(a_[std::size_t(i + xl) * ny_ + (j + yl)]);
        a_ = std::move(b);
        x_lo_ += xl;
        y_lo_ += yl;
        nx_ = nx;
        ny_ = ny;
    }

    int x_lo_ = 0, y_lo_ = 0, nx_ = 0, ny_ = 0;
    std::vector<BigInt> a_;
};

/// q^(offset/24) * sum_{n=0}^{order} c_n q^n, exact through q^order.
class BiSeries {
public:
    BiSeries() = default;
    BiSeries(int offset24, int order) : off_(offset24), c_(std::size_t(check_order(order)) + 1) {}

    static BiSeries one(int order) {
        BiSeries s(0, order);
        s.c_[0] = LaurentPoly::constant(1);
        return s;
    }
    static BiSeries monomial(int offset24, int i, int j, int order, const BigInt& c = 1) {
        BiSeries s(offset24, order);
        s.c_[0] = LaurentPoly::monomial(i, j, c);
        return s;
    }

    int offset24() const { return off_; }
    int order() const { return int(c_.size()) - 1; }
    const LaurentPoly& coeff(int n) const { return c_.at(std::size_t(n)); }
    LaurentPoly& coeff(int n) { return c_.at(std::size_t(n)); }
    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](const LaurentPoly& p) { return p.is_zero(); });
    }
    std::optional<int> first_nonzero() const {
        for (std::size_t n = 0; n < c_.size(); ++n)
            if (!c_[n].is_zero()) return int(n);
        return std::nullopt;
    }

    /// Same series with the order lowered.
    BiSeries truncated(int order) const {
        if (order > this->order()) throw std::invalid_argument("BiSeries: cannot raise truncation order");
        BiSeries s = *this;
        s.c_.resize(std::size_t(order) + 1);
        return s;
    }

    /// Multiplies by q^k for integer k >= 0; the order is kept relative to the new offset.
    BiSeries times_q(int k) const {
        BiSeries s = *this;
        s.off_ += 24 * k;
        return s;
    }

    BiSeries substitute(int a, int b, int c, int d) const {
        BiSeries s = *this;
        for (auto& p : s.c_) p = p.substitute(a, b, c, d);
        return s;
    }

    /// Sets x = y = 1.
    BiSeries at_one() const {
        BiSeries s = *this;
        for (auto& p : s.c_) p = LaurentPoly::constant(p.evaluate_at_one());
        return s;
    }

    friend BiSeries operator+(const BiSeries& a, const BiSeries& b) { return combine(a, b, 1); }
    friend BiSeries operator-(const BiSeries& a, const BiSeries& b) { return combine(a, b, -1); }

    friend BiSeries operator*(const BiSeries& a, const BiSeries& b) {
        int order = std::min(a.order(), b.order());
        BiSeries s(a.off_ + b.off_, order);
        parallel_for(std::size_t(order) + 1, [&](std::size_t n) {
            LaurentPoly acc;
            for (std::size_t k = 0; k <= n; ++k)
                if (!a.c_[k].is_zero() && !b.c_[n - k].is_zero()) acc += a.c_[k] * b.c_[n - k];
            s.c_[n] = std::move(acc);
        });
        return s;
    }

    friend BiSeries operator*(const BigInt& k, BiSeries s) {
        for (auto& p : s.c_) p = k * p;
        return s;
    }

    /// Inverse; the constant coefficient must be +-1 times a monomial.
    BiSeries inverse() const {
        const auto& c0 = c_.at(0);
        if (c0.terms() != 1 || !is_unit(c0.at(c0.x_lo(), c0.y_lo())))
            throw std::domain_error("BiSeries: leading coefficient is not a unit monomial");
        auto inv0 = LaurentPoly::monomial(-c0.x_lo(), -c0.y_lo(), c0.at(c0.x_lo(), c0.y_lo()));
        BiSeries s(-off_, order());
        s.c_[0] = inv0;
        for (int n = 1; n <= order(); ++n) {
            LaurentPoly acc;
            for (int k = 1; k <= n; ++k)
                if (!c_[k].is_zero() && !s.c_[n - k].is_zero()) acc += c_[k] * s.c_[n - k];
            s.c_[n] = BigInt(-1) * (inv0 * acc);
        }
        return s;
    }

    BiSeries pow(int k) const {
        if (k < 0) return inverse().pow(-k);
        auto out = one(order());
        for (int i = 0; i < k; ++i) out = out * *this;
        return out;
    }

    friend bool operator==(const BiSeries& a, const BiSeries& b) {
        return a.off_ == b.off_ && a.c_ == b.c_;
    }

private:
    static int check_order(int order) {
        if (order < 0) throw std::invalid_argument("BiSeries: negative order");
        return order;
    }

    static BiSeries combine(const BiSeries& a, const BiSeries& b, int sign) {
        if ((a.off_ - b.off_) % 24 != 0) throw std::invalid_argument("BiSeries: offsets differ by a fractional power");
        int base = std::min(a.off_, b.off_);
        int sa = (a.off_ - base) / 24, sb = (b.off_ - base) / 24;
        int order = std::min(a.order() + sa, b.order() + sb);
        BiSeries s(base, order);
        for (int n = 0; n <= order; ++n) {
            LaurentPoly p;
            if (n >= sa) p += a.c_[n - sa];
            if (n >= sb) {
                if (sign > 0)
                    p += b.c_[n - sb];
                else
                    p -= b.c_[n - sb];
            }
            s.c_[n] = std::move(p);
        }
        return s;
    }

    int off_ = 0;
    std::vector<LaurentPoly> c_{1};
};

/// Integer coefficients of the q-expansion, for series without x and y.
inline std::vector<BigInt> integer_coefficients(const BiSeries& s) {
    std::vector<BigInt> out;
    for (int n = 0; n <= s.order(); ++n) {
        const auto& p = s.coeff(n);
        if (!p.is_zero() && (p.terms() != 1 || p.x_lo() != 0 || p.y_lo() != 0))
            throw std::invalid_argument("integer_coefficients: series depends on x or y");
        out.push_back(p.at(0, 0));
    }
    return out;
}

/// prod_{n=1}^{order} (1 - m q^n) with m = x^i y^j raised to n.
inline BiSeries euler_product(int order, int xi = 0, int yj = 0) {
    auto s = BiSeries::one(order);
    for (int n = 1; n <= order; ++n) {
        BiSeries f(0, order);
        f.coeff(0) = LaurentPoly::constant(1);
        if (n <= order) f.coeff(n) = LaurentPoly::monomial(xi * n, yj * n, -1);
        s = s * f;
    }
    return s;
}

inline BiSeries eta(int order) {
    auto s = euler_product(order);
    BiSeries out(1, order);
    for (int n = 0; n <= order; ++n) out.coeff(n) = s.coeff(n);
    return out;
}

/// sum_{n in Z + a/2} q^(n^2).
inline BiSeries theta(int a, int order) {
    if (a != 0 && a != 1) throw std::invalid_argument("theta: a must be 0 or 1");
    BiSeries s(a == 0 ? 0 : 6, order);
    for (long long k = -order - 1; k <= order + 1; ++k) {
        long long e = a == 0 ? k * k : k * k + k;
        if (e <= order) s.coeff(int(e)) += LaurentPoly::constant(1);
    }
    return s;
}

/// Numerator sum_n (xy)^((m^2-m)/2) q^(m^2/4), m = 2n + a, divided by q^(1/12) prod (1 - (xy)^(2n) q^n)^2.
inline BiSeries blowup_Z(int a, int order) {
    if (a != 0 && a != 1) throw std::invalid_argument("blowup_Z: a must be 0 or 1");
    BiSeries num(a == 0 ? 0 : 6, order);
    for (long long n = -order - 2; n <= order + 2; ++n) {
        long long m = 2 * n + a;
        long long e = (m * m - a) / 4;
        if (e < 0 || e > order) continue;
        int xy = int((m * m - m) / 2);
        num.coeff(int(e)) += LaurentPoly::monomial(xy, xy);
    }
    auto den = euler_product(order, 2, 2);
    auto inv = (den * den).inverse();
    auto z = num * inv;
    BiSeries out(z.offset24() - 2, order);
    for (int n = 0; n <= order; ++n) out.coeff(n) = z.coeff(n);
    return out;
}

enum class CharacterGrading { Weight, WeightCoho };

/// sum over diagrams of charge l and weight <= order of q^weight (times x^coho).
inline BiSeries fock_character(int r, int l, int order, CharacterGrading g = CharacterGrading::Weight) {
    BiSeries s(0, order);
    for (int n = 0; n <= order; ++n)
        for (const auto& d : enumerate_basis(r, l, n)) {
            int x = g == CharacterGrading::WeightCoho ? int(coho(d)) : 0;
            s.coeff(n) += LaurentPoly::monomial(x, 0);
        }
    return s;
}

/// sum over k in Z^r with sum k = l of q^((|k|^2 + l)/2), divided by prod (1 - q^m)^r.
inline BiSeries lattice_character(int r, int l, int order) {
    if (r < 1) throw std::invalid_argument("lattice_character: rank must be positive");
    BiSeries num(0, order);
    const long long budget = 2LL * order - l;
    std::vector<int> k(std::size_t(r), 0);
    auto rec = [&](auto&& self, int idx, long long rest, long long sq) -> void {
        if (sq > budget) return;
        if (idx == r - 1) {
            long long s = l + sq + rest * rest;
            if (s >= 0 && s % 2 == 0 && s / 2 <= order) num.coeff(int(s / 2)) += LaurentPoly::constant(1);
            return;
        }
        long long b = 0;
        while ((b + 1) * (b + 1) <= budget - sq) ++b;
        for (long long v = -b; v <= b; ++v) self(self, idx + 1, rest - v, sq + v * v);
    };
    rec(rec, 0, l, 0);
    auto den = BiSeries::one(order), e = euler_product(order);
    for (int i = 0; i < r; ++i) den = den * e;
    return num * den.inverse();
}

struct MonomialShift {
    int q24 = 0;
    int dx = 0, dy = 0;
    std::string q_str() const {
        int g = std::gcd(std::abs(q24), 24);
        if (q24 == 0) return "0";
        return std::to_string(q24 / g) + (24 / g == 1 ? "" : "/" + std::to_string(24 / g));
    }
    friend bool operator==(const MonomialShift&, const MonomialShift&) = default;
};

/// The monomial q^(q24/24) x^dx y^dy with s1 = shift * s2 on the common range, if one exists.
inline std::optional<MonomialShift> compare_up_to_monomial(const BiSeries& s1, const BiSeries& s2) {
    auto k1 = s1.first_nonzero(), k2 = s2.first_nonzero();
    if (!k1 || !k2) return std::nullopt;
    auto l1 = s1.coeff(*k1).leading(), l2 = s2.coeff(*k2).leading();
    MonomialShift m{s1.offset24() + 24 * *k1 - s2.offset24() - 24 * *k2, l1->first - l2->first, l1->second - l2->second};
    int span = std::min(s1.order() - *k1, s2.order() - *k2);
    for (int n = 0; n <= span; ++n)
        if (!(s1.coeff(*k1 + n) == s2.coeff(*k2 + n).shifted(m.dx, m.dy))) return std::nullopt;
    return m;
}

} // namespace fermionlab
