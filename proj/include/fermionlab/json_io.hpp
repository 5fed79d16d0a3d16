#pragma once

#include "fock.hpp"
#include "orthogonalization.hpp"
#include "qseries.hpp"
#include "sparse_map.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace fermionlab {

using Json = nlohmann::json;

class JsonFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Json subset_json(Mask b, int r) {
    Json a = Json::array();
    for (int x : IndexSubset(b, r).elements()) a.push_back(x);
    return a;
}

inline Mask subset_from_json(const Json& j, int r) {
    if (!j.is_array()) throw JsonFormatError("subset: expected an array");
    Mask b = 0;
    int prev = -1;
    for (const auto& x : j) {
        int i = x.get<int>();
        if (i <= prev || i >= r) throw JsonFormatError("subset: entries must be ascending and inside [r]");
        b |= Mask(1) << i;
        prev = i;
    }
    return b;
}

/// Labels 0..n-1 when none are supplied.
inline Json index_labels(std::size_t n) {
    Json a = Json::array();
    for (std::size_t k = 0; k < n; ++k) a.push_back(k);
    return a;
}

inline Json subset_labels(int r) {
    Json a = Json::array();
    for (Mask b = 0; b < (Mask(1) << r); ++b) a.push_back(subset_json(b, r));
    return a;
}

/// Entries sorted by (row, col).
inline Json operator_json(const SparseIntMap& m, Json rows, Json cols) {
    if (rows.size() != m.rows() || cols.size() != m.cols()) throw JsonFormatError("operator: label count mismatch");
    std::vector<std::tuple<std::size_t, std::size_t, BigInt>> es;
    m.for_each([&](std::size_t i, std::size_t j, const BigInt& v) { es.emplace_back(i, j, v); });
    std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    Json entries = Json::array();
    for (const auto& [i, j, v] : es) entries.push_back(Json::array({i, j, to_string(v)}));
    return Json{{"rows", std::move(rows)}, {"cols", std::move(cols)}, {"entries", std::move(entries)}};
}

inline Json operator_json(const SparseIntMap& m) { return operator_json(m, index_labels(m.rows()), index_labels(m.cols())); }

inline SparseIntMap operator_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw JsonFormatError("operator: expected rows, cols and entries");
    SparseIntMap m(j.at("rows").size(), j.at("cols").size());
    for (const auto& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 3 || !e[2].is_string())
            throw JsonFormatError("operator: entries are [row, col, \"integer\"]");
        auto i = e[0].get<std::size_t>(), c = e[1].get<std::size_t>();
        if (i >= m.rows() || c >= m.cols()) throw JsonFormatError("operator: entry index out of range");
        try {
            m.add_to(i, c, big_from_string(e[2].get<std::string>()));
        } catch (const std::invalid_argument&) {
            throw JsonFormatError("operator: entry is not an integer string");
        }
    }
    return m;
}

inline Json maya_json(const MayaDiagram& d) {
    Json lv = Json::array();
    for (Mask b : d.levels()) lv.push_back(subset_json(b, d.rank()));
    return Json{{"r", d.rank()}, {"m_lo", d.m_lo()}, {"levels", std::move(lv)}};
}

inline MayaDiagram maya_from_json(const Json& j) {
    int r = j.at("r").get<int>();
    std::vector<Mask> lv;
    for (const auto& s : j.at("levels")) lv.push_back(subset_from_json(s, r));
    return MayaDiagram(r, j.at("m_lo").get<int>(), std::move(lv));
}

inline Json series_json(const BiSeries& s) {
    Json coeffs = Json::array();
    for (int n = 0; n <= s.order(); ++n) {
        if (s.coeff(n).is_zero()) continue;
        Json terms = Json::array();
        s.coeff(n).for_each([&](int i, int k, const BigInt& c) { terms.push_back(Json{{"x", i}, {"y", k}, {"c", to_string(c)}}); });
        coeffs.push_back(Json{{"q", n}, {"terms", std::move(terms)}});
    }
    return Json{{"offset_num", s.offset24()}, {"offset_den", 24}, {"order", s.order()}, {"coeffs", std::move(coeffs)}};
}

inline BiSeries series_from_json(const Json& j) {
    if (j.at("offset_den").get<int>() != 24) throw JsonFormatError("series: offset_den must be 24");
    int order = j.at("order").get<int>();
    BiSeries s(j.at("offset_num").get<int>(), order);
    for (const auto& c : j.at("coeffs")) {
        int n = c.at("q").get<int>();
        if (n < 0 || n > order) throw JsonFormatError("series: q exponent outside the truncation");
        for (const auto& t : c.at("terms"))
            s.coeff(n).add(t.at("x").get<int>(), t.at("y").get<int>(), big_from_string(t.at("c").get<std::string>()));
    }
    return s;
}

inline Json order_json(const TotalOrder& o) {
    Json seq = Json::array();
    for (Mask b : o.seq) seq.push_back(subset_json(b, o.r));
    return seq;
}

inline TotalOrder order_from_json(const Json& j, int r) {
    std::vector<Mask> seq;
    for (const auto& s : j) seq.push_back(subset_from_json(s, r));
    try {
        return TotalOrder::from_sequence(r, std::move(seq));
    } catch (const std::invalid_argument& e) {
        throw JsonFormatError(e.what());
    }
}

/// {"r", "w_dim", "v_dim", "order", "e": {label: op}, "f": {label: op}}
inline Json family_json(int r, std::size_t w_dim, std::size_t v_dim, const std::vector<SparseIntMap>& e,
                        const std::vector<SparseIntMap>& f, const Json& order) {
    Json je = Json::object(), jf = Json::object();
    for (Mask I = 0; I < (Mask(1) << r); ++I) {
        je[subset_label(I, r)] = operator_json(e[I]);
        jf[subset_label(I, r)] = operator_json(f[I]);
    }
    return Json{{"r", r}, {"w_dim", w_dim}, {"v_dim", v_dim}, {"order", order}, {"e", std::move(je)}, {"f", std::move(jf)}};
}

inline Json family_json(const SemiOrthFamily& fam) {
    return family_json(fam.r, fam.w_dim, fam.v_dim, fam.e, fam.f, order_json(fam.order));
}

inline Json family_json(const OrthFamily& o, const TotalOrder& order) {
    return family_json(o.r, o.w_dim, o.v_dim, o.e, o.f, order_json(order));
}

inline SemiOrthFamily family_from_json(const Json& j) {
    SemiOrthFamily fam;
    fam.r = j.at("r").get<int>();
    if (fam.r < 0 || fam.r > 8) throw JsonFormatError("family: rank out of range");
    fam.w_dim = j.at("w_dim").get<std::size_t>();
    fam.v_dim = j.at("v_dim").get<std::size_t>();
    fam.order = j.contains("order") ? order_from_json(j.at("order"), fam.r) : TotalOrder::lex(fam.r);
    for (Mask I = 0; I < (Mask(1) << fam.r); ++I) {
        auto key = subset_label(I, fam.r);
        if (!j.at("e").contains(key) || !j.at("f").contains(key)) throw JsonFormatError("family: missing map " + key);
        fam.e.push_back(operator_from_json(j.at("e").at(key)));
        fam.f.push_back(operator_from_json(j.at("f").at(key)));
    }
    try {
        fam.validate();
    } catch (const std::invalid_argument& e) {
        throw JsonFormatError(e.what());
    }
    return fam;
}

} // namespace fermionlab
