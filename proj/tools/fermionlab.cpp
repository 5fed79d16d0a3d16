#include <fermionlab/affine.hpp>
#include <fermionlab/clifford.hpp>
#include <fermionlab/colimit.hpp>
#include <fermionlab/fock.hpp>
#include <fermionlab/json_io.hpp>
#include <fermionlab/orthogonalization.hpp>
#include <fermionlab/qseries.hpp>
#include <fermionlab/schubert.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace fermionlab;

namespace {

constexpr int kMaxRank = 8;
constexpr int kMaxWeight = 40;
constexpr int kMaxOrder = 200;
constexpr const char* kVersion = "1.0.0";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string output;
    std::uint64_t seed = 0;
    bool timing = false;
};

struct Result {
    Json body;
    bool passed = true;
    std::string text;
};

Json conventions() {
    return Json{{"koszul_sign", "sum of |I_k| over levels k > a"},
                {"derivation_sign", -1},
                {"lex_order", "numeric bitmask order"},
                {"series_offset_den", 24}};
}

Json failures_json(const std::vector<std::string>& f) { return Json(f); }

void merge_report(Json& out, const std::string& key, const RelationReport& rep, bool& passed) {
    out[key] = Json{{"ok", rep.ok}, {"checked", rep.checked}, {"failures", failures_json(rep.failures)}};
    passed = passed && rep.ok;
}

Result run_relations(int r, int charge, int weight) {
    Result res;
    auto spin = spin_representation(r);
    merge_report(res.body, "clifford", check_relations(spin), res.passed);
    bool l45 = restriction_identity(spin);
    bool comp = completeness_identity(spin);
    auto hodge = hodge_conjugation_table(r);
    res.body["restriction_identity"] = l45;
    res.body["completeness_identity"] = comp;
    res.body["hodge_conjugation_consistent"] = hodge.consistent;
    res.passed = res.passed && l45 && comp && hodge.consistent;

    FockTruncation t(r, -charge, charge, weight);
    auto id = SparseIntMap::identity(t.size());
    SparseIntMap zero(t.size(), t.size());
    std::map<std::pair<int, int>, TruncatedOperator> P, Q;
    const int a_lo = -1, a_hi = 2;
    for (int a = a_lo; a <= a_hi; ++a)
        for (int i = 0; i < r; ++i) {
            P[{a, i}] = realize(t, op_fermion(GenKind::P, a, i));
            Q[{a, i}] = realize(t, op_fermion(GenKind::Q, a, i));
        }
    RelationReport fock;
    std::size_t exact_columns = 0;
    for (int a = a_lo; a <= a_hi; ++a)
        for (int b = a_lo; b <= a_hi; ++b)
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    auto tag = "_" + std::to_string(a) + "," + std::to_string(i) + " " + std::to_string(b) + "," + std::to_string(j);
                    auto pq = anticommutator(P[{a, i}], Q[{b, j}]);
                    exact_columns += pq.exact_count();
                    fock.record(equal_on_exact(pq, a == b && i == j ? id : zero), "{P,Q}" + tag);
                    fock.record(equal_on_exact(anticommutator(P[{a, i}], P[{b, j}]), zero), "{P,P}" + tag);
                    fock.record(equal_on_exact(anticommutator(Q[{a, i}], Q[{b, j}]), zero), "{Q,Q}" + tag);
                }
    merge_report(res.body, "fock_clifford", fock, res.passed);
    res.body["fock_window"] = Json{{"charge", {-charge, charge}}, {"weight", weight}, {"modes", {a_lo, a_hi}},
                                   {"basis", t.size()}, {"exact_columns", exact_columns}};
    if (exact_columns == 0) res.passed = false;
    return res;
}

SemiOrthFamily read_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    try {
        return family_from_json(Json::parse(in));
    } catch (const Json::exception& e) {
        throw UsageError(std::string("malformed family JSON: ") + e.what());
    } catch (const JsonFormatError& e) {
        throw UsageError(std::string("malformed family JSON: ") + e.what());
    }
}

Result run_orthogonalize(const std::string& input, int r, int w, int defect, const std::string& order, std::uint64_t seed) {
    Result res;
    SemiOrthFamily fam;
    if (!input.empty()) {
        fam = read_family(input);
        res.body["source"] = input;
    } else {
        std::mt19937_64 rng(seed);
        auto o = order == "weight" ? TotalOrder::weight_compatible(r) : TotalOrder::lex(r);
        fam = random_family(r, std::size_t(w), std::size_t(defect), o, rng);
        res.body["source"] = "random";
        res.body["input"] = family_json(fam);
    }
    if (auto bad = semi_orth_witness(fam)) {
        res.passed = false;
        res.body["error"] = "family is not semi-orthogonal";
        res.body["witness"] = Json{{"larger", subset_json(bad->first, fam.r)}, {"smaller", subset_json(bad->second, fam.r)}};
        return res;
    }
    auto o = orthogonalize(fam);
    auto rep = family_equivalence(fam);
    res.body["family"] = family_json(o, fam.order);
    res.body["gamma_rank"] = rep.gamma_rank;
    res.body["orthogonality_verified"] = true;
    res.body["equivalence"] = Json{{"ehat_bijective", rep.ehat_bijective},
                                   {"gamma_zero", rep.gamma_zero},
                                   {"clifford_model", rep.clifford_model},
                                   {"agree", rep.agree},
                                   {"model_failures", failures_json(rep.model_failures)}};
    res.passed = rep.agree;
    return res;
}

Result run_affine(int r, int modes, int weight, int charge, const std::string& central) {
    Result res;
    auto policy = central == "identity" ? CentralPolicy::Identity : CentralPolicy::Charge;
    FockTruncation t(r, -charge, charge, weight);
    AffineFamily fam(t);
    auto rep = affine_check(fam, modes, policy);
    auto der = derivation_sign(fam, modes);
    Json rs = Json::array();
    for (const auto& x : rep.residuals)
        rs.push_back(Json{{"relation", x.name}, {"residual", to_string(x.max_abs)}, {"exact_columns", x.exact_columns}});
    res.body["central_term"] = central_name(policy);
    res.body["window"] = Json{{"charge", {-charge, charge}}, {"weight", weight}, {"basis", t.size()}};
    res.body["relations"] = rep.relations;
    res.body["failures"] = rep.failures;
    res.body["vacuous"] = rep.vacuous;
    res.body["safe_columns"] = rep.exact_columns;
    res.body["max_residual"] = to_string(rep.max_residual);
    res.body["residuals"] = std::move(rs);
    res.body["failed"] = failures_json(rep.failed);
    res.body["derivation"] = Json{{"sign", der.sign}, {"consistent", der.consistent}, {"checked", der.checked},
                                  {"failed", failures_json(der.failed)}};
    res.body["all_residuals_zero"] = rep.failures == 0;
    res.passed = rep.failures == 0 && rep.vacuous == 0 && der.consistent;
    return res;
}

Result run_blowup(int a, int order, bool check) {
    Result res;
    auto z = blowup_Z(a, order);
    auto sj = series_json(z);
    for (auto& [k, v] : sj.items()) res.body[k] = v;
    res.body["offset"] = MonomialShift{z.offset24(), 0, 0}.q_str();
    res.body["a"] = a;
    if (check) {
        auto e = eta(order);
        bool ok = z.substitute(1, 0, -1, 0) * e * e == theta(a, order);
        res.body["identity_verified"] = ok;
        res.passed = ok;
    }
    return res;
}

Result run_character(int r, int l, int order, const std::string& grading) {
    Result res;
    auto g = grading == "coho" ? CharacterGrading::WeightCoho : CharacterGrading::Weight;
    auto ch = fock_character(r, l, order, g);
    res.body["series"] = series_json(ch);
    res.body["grading"] = grading;
    Json dims = Json::array();
    for (const auto& c : integer_coefficients(ch.at_one())) dims.push_back(to_string(c));
    res.body["dimensions"] = dims;
    auto lat = lattice_character(r, l, order);
    bool match = ch.at_one() == lat;
    res.body["lattice_match"] = match;
    auto next = fock_character(r, l + r, order, g);
    auto shift = compare_up_to_monomial(next, ch);
    if (shift)
        res.body["periodicity"] = Json{{"q", shift->q_str()}, {"x", shift->dx}, {"y", shift->dy}};
    else
        res.body["periodicity"] = nullptr;
    res.passed = match && shift.has_value();
    return res;
}

Result run_schubert(int n, int d) {
    Result res;
    auto p = duality_pairing(n, d);
    Json labels = Json::array(), rows = Json::array();
    for (const auto& l : p.labels) labels.push_back(l.parts());
    for (const auto& row : p.m) {
        Json jr = Json::array();
        for (const auto& v : row) jr.push_back(to_string(v));
        rows.push_back(jr);
    }
    bool id = p.is_identity();
    res.body["labels"] = labels;
    res.body["matrix"] = rows;
    res.body["identity"] = id;
    res.passed = id;
    return res;
}

Result run_colimit(int r, int L, int N, const std::vector<std::size_t>& mult) {
    Result res;
    StandardModel V(r, mult, 0);
    Json pieces = Json::array();
    bool all = true;
    for (int l = -L; l <= L; ++l)
        for (int n = 0; n <= N; ++n) {
            auto [m, full] = model_saturation(V, {l, n});
            auto s = h_infinity(V, {l, n}, m + 3);
            bool ok = s.stab_index && *s.stab_index == m && s.colimit_rank == full;
            all = all && ok;
            Json ranks = Json::array();
            for (auto x : s.ranks) ranks.push_back(x);
            pieces.push_back(Json{{"l", l},
                                  {"n", n},
                                  {"ranks", ranks},
                                  {"stabilization_index", s.stab_index ? Json(*s.stab_index) : Json(nullptr)},
                                  {"saturation_index", m},
                                  {"colimit_rank", s.colimit_rank},
                                  {"full_rank", full},
                                  {"ok", ok}});
        }
    auto fs = fock_structure(V, -L, L, N);
    res.body["multiplicities"] = mult;
    res.body["window"] = Json{{"charge", {-L, L}}, {"weight", N}};
    res.body["pieces"] = pieces;
    res.body["fock_structure"] = Json{{"ok", fs.ok}, {"level", fs.level}, {"rank_checks", fs.rank_checks},
                                      {"operator_checks", fs.operator_checks}, {"failures", failures_json(fs.failures)}};
    res.passed = all && fs.ok;
    return res;
}

Result run_trajectory(int r, int l, int n, int steps, const std::string& svg, bool text) {
    Result res;
    Bidegree o{l, n};
    auto pts = trajectory(r, o, 0, steps);
    Json jp = Json::array();
    bool all = true;
    for (const auto& p : pts) {
        bool on = on_parabola(r, o, p.x(), p.y());
        all = all && on;
        jp.push_back(Json{{"step", p.step}, {"l", p.at.l}, {"n", p.at.n}, {"x", p.x()}, {"y", p.y()}, {"on_parabola", on}});
    }
    res.body["origin"] = Json{{"l", l}, {"n", n}};
    res.body["parabola"] = "2r(x - n) = (y + l)(y - r - l), (x, y) = (n_m, -l_m)";
    res.body["points"] = jp;
    if (l <= 0) {
        auto [base, m] = trajectory_origin(r, o);
        res.body["normal_origin"] = Json{{"l", base.l}, {"n", base.n}, {"step", m}};
    }
    if (!svg.empty()) {
        std::ofstream out(svg);
        if (!out) throw UsageError("cannot write " + svg);
        out << trajectory_svg(r, o, pts);
        res.body["svg"] = svg;
    }
    if (text) res.text = trajectory_ascii(pts);
    res.passed = all;
    return res;
}

void emit(const std::string& path, const std::string& s) {
    if (path.empty()) {
        std::cout << s;
        return;
    }
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks for Clifford, Fock, affine and Schubert structures"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", kVersion);
    Common common;
    auto add_common = [&](CLI::App* s) {
        s->add_option("-o,--output", common.output, "write the report to this file");
        s->add_option("--seed", common.seed, "seed for randomized inputs");
        s->add_flag("--timing", common.timing, "include wall-clock seconds in the report");
    };
    auto rank_opt = [](CLI::App* s, int& r, int hi = kMaxRank) {
        return s->add_option("--rank,-r", r, "rank")->check(CLI::Range(1, hi));
    };

    int r = 3, charge = 1, weight = 4, modes = 2, a = 0, order = 30, l = 0, n = 0, steps = 8, w = 2, defect = 0, d = 1;
    int n_grass = 4;
    std::vector<int> window{2, 5};
    std::vector<std::size_t> mult{1};
    std::string input, ord = "lex", central = "charge", grading = "weight", svg, format = "json";
    bool check_theta = false;

    auto* rel = app.add_subcommand("relations", "Clifford relations on F(r) and fermion relations on a Fock window");
    rank_opt(rel, r);
    rel->add_option("--charge", charge, "charge window |l| <= L")->check(CLI::Range(0, 4));
    auto* rel_weight = rel->add_option("--weight,-N", weight, "weight bound; defaults to 4, 2, 1 for r <= 3, 5, 8")
                           ->check(CLI::Range(0, kMaxWeight));

    auto* ort = app.add_subcommand("orthogonalize", "orthogonalize a semi-orthogonal family");
    ort->add_option("--input,-i", input, "family JSON; a random family is generated when absent");
    rank_opt(ort, r, 4);
    ort->add_option("--w", w, "rank of W for random families")->check(CLI::Range(1, 8));
    ort->add_option("--defect", defect, "extra coordinates missed by the embeddings")->check(CLI::Range(0, 4));
    ort->add_option("--order", ord, "total order")->check(CLI::IsMember({"lex", "weight"}));

    auto* aff = app.add_subcommand("affine-check", "affine gl_r residuals on a Fock window");
    rank_opt(aff, r, 4);
    aff->add_option("--modes", modes, "modes |a|,|b| <= M")->check(CLI::Range(0, 4));
    aff->add_option("--weight,-N", weight, "weight bound")->check(CLI::Range(0, kMaxWeight));
    aff->add_option("--charge", charge, "charge window |l| <= L")->check(CLI::Range(0, 4));
    aff->add_option("--central", central, "central term")->check(CLI::IsMember({"charge", "identity"}));

    auto* blw = app.add_subcommand("blowup-series", "expand the blow-up series Z_a");
    blw->add_option("--a", a, "parity")->check(CLI::IsMember({0, 1}));
    blw->add_option("--order", order, "q-order")->check(CLI::Range(0, kMaxOrder));
    blw->add_flag("--check-theta", check_theta, "verify Z_a(x, 1/x, q) eta^2 = theta_a");

    auto* chr = app.add_subcommand("character", "character of a fixed-charge Fock sector");
    rank_opt(chr, r, 4);
    chr->add_option("--l", l, "charge")->check(CLI::Range(-16, 16));
    chr->add_option("--order,-N", order, "weight bound")->check(CLI::Range(0, kMaxWeight));
    chr->add_option("--grading", grading, "grading")->check(CLI::IsMember({"weight", "coho"}));

    auto* sch = app.add_subcommand("schubert-pair", "duality pairing on Gr(n, d)");
    sch->add_option("--n", n_grass, "ambient dimension")->check(CLI::Range(1, kMaxRank));
    sch->add_option("--d", d, "subspace dimension")->check(CLI::Range(0, kMaxRank));

    auto* col = app.add_subcommand("colimit-check", "stabilization of H_infinity on a standard model");
    rank_opt(col, r, 3);
    col->add_option("--window", window, "charge bound L and weight bound N")->expected(2)->check(CLI::Range(0, kMaxWeight));
    col->add_option("--multiplicity", mult, "ranks of the multiplicity spaces by weight");

    auto* trj = app.add_subcommand("trajectory", "parabolic trajectory of the shift action");
    rank_opt(trj, r);
    trj->add_option("--l", l, "charge of the origin")->check(CLI::Range(-1000, 1000));
    trj->add_option("--n", n, "weight of the origin")->check(CLI::Range(-1000, 1000));
    trj->add_option("--steps", steps, "number of steps")->check(CLI::Range(0, 200));
    trj->add_option("--svg", svg, "write the figure to this SVG file");
    trj->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));

    for (auto* s : {rel, ort, aff, blw, chr, sch, col, trj}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const auto t0 = std::chrono::steady_clock::now();
    Result res;
    Json config = Json::object();
    try {
        if (name == "relations") {
            if (rel_weight->count() == 0) weight = r <= 3 ? 4 : r <= 5 ? 2 : 1;
            config = {{"rank", r}, {"charge", charge}, {"weight", weight}};
            res = run_relations(r, charge, weight);
        } else if (name == "orthogonalize") {
            config = {{"input", input}, {"rank", r}, {"w", w}, {"defect", defect}, {"order", ord}, {"seed", common.seed}};
            res = run_orthogonalize(input, r, w, defect, ord, common.seed);
        } else if (name == "affine-check") {
            config = {{"rank", r}, {"modes", modes}, {"weight", weight}, {"charge", charge}, {"central", central}};
            res = run_affine(r, modes, weight, charge, central);
        } else if (name == "blowup-series") {
            config = {{"a", a}, {"order", order}, {"check_theta", check_theta}};
            res = run_blowup(a, order, check_theta);
        } else if (name == "character") {
            config = {{"rank", r}, {"l", l}, {"order", order}, {"grading", grading}};
            res = run_character(r, l, order, grading);
        } else if (name == "schubert-pair") {
            if (d > n_grass) throw UsageError("--d must not exceed --n");
            config = {{"n", n_grass}, {"d", d}};
            res = run_schubert(n_grass, d);
        } else if (name == "colimit-check") {
            config = {{"rank", r}, {"window", window}, {"multiplicity", mult}};
            res = run_colimit(r, window[0], window[1], mult);
        } else if (name == "trajectory") {
            config = {{"rank", r}, {"l", l}, {"n", n}, {"steps", steps}, {"svg", svg}, {"format", format}};
            res = run_trajectory(r, l, n, steps, svg, format == "text");
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        res.passed = false;
        res.body = Json{{"error", e.what()}};
    }

    Json out = res.body;
    out["command"] = name;
    out["version"] = kVersion;
    out["config"] = config;
    out["conventions"] = conventions();
    out["passed"] = res.passed;
    if (common.timing)
        out["timing"] = Json{{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    try {
        emit(common.output, res.text.empty() ? out.dump(2) + "\n" : res.text);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return res.passed ? 0 : 1;
}
