// Command-line surface: define and inspect Weil algebras, evaluate lifted
// maps (derivatives/jets via algebra points), and run the law, limit,
// microlinearity, transversality, and vertical-functor suites.
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 input error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "weil/weil.hpp"

namespace {

using namespace weil;

// ---- small utilities -------------------------------------------------------

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        } else if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            --depth;
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::syntax_error, "cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(errc::syntax_error, "invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

void emit_json(const Json& j, const std::string& dest) {
    const std::string text = j.dump(2) + "\n";
    if (dest == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(dest);
    if (!out) fail(errc::syntax_error, "cannot write '" + dest + "'");
    out << text;
}

std::string double_str(double v) {
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

// ---- session persistence ----------------------------------------------------

struct SessionFile {
    std::string path;
    Session session;

    void load() {
        if (path.empty()) return;
        std::ifstream probe(path);
        if (!probe.good()) return;  // fresh session file
        probe.close();
        session = Session::from_json(read_json_file(path));
    }
    void save() const {
        if (path.empty()) return;
        emit_json(session.to_json(), path);
    }
};

// ---- algebra subcommands -----------------------------------------------------

void print_algebra(const std::string& label, const AlgebraPtr& w) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < w->n_gens(); ++i) names.push_back("x" + std::to_string(i));
    std::string basis = "[";
    for (std::size_t i = 0; i < w->basis().size(); ++i) {
        if (i) basis += ", ";
        basis += w->basis()[i].str(names);
    }
    basis += "]";
    std::cout << label << ": dim " << w->dim() << ", basis " << basis
              << ", k = " << w->nilpotency_index() << "\n";
    if (!w->relation_strings().empty()) {
        std::cout << "relations:";
        for (const auto& r : w->relation_strings()) std::cout << " " << r;
        std::cout << "\n";
    }
}

int cmd_algebra_define(SessionFile& sf, const std::string& file,
                       const std::string& name_flag) {
    const Json doc = read_json_file(file);
    const AlgebraPtr w = algebra_from_json(doc);
    std::string name = name_flag;
    if (name.empty() && doc.contains("name")) name = doc["name"].get<std::string>();
    if (name.empty())
        fail(errc::syntax_error,
             "algebra document has no name; pass --name or add a \"name\" field");
    sf.session.register_algebra(name, w);
    print_algebra(name, w);
    sf.save();
    return 0;
}

int cmd_algebra_show(SessionFile& sf, const std::string& spec) {
    print_algebra(spec, sf.session.algebra(spec));
    return 0;
}

int cmd_algebra_tensor(SessionFile& sf, const std::string& a, const std::string& b,
                       const std::string& kw, const std::string& name) {
    if (kw != "as")
        fail(errc::syntax_error, "usage: algebra tensor <A> <B> as <NAME>");
    const AlgebraPtr t = tensor(sf.session.algebra(a), sf.session.algebra(b));
    sf.session.register_algebra(name, t);
    print_algebra(name, t);
    sf.save();
    return 0;
}

// ---- eval ---------------------------------------------------------------------

struct EvalRequest {
    std::string map_text;
    std::string algebra_spec;
    std::string point_text;
    std::string extract;  // "", "jet", "gradient", "hessian"
    std::string json_dest;
};

template <class S>
Json eval_typed(const SmoothMap& f, const AlgebraPtr& w,
                const std::vector<Element<Rat>>& exact_components) {
    std::vector<Element<S>> comps;
    for (const auto& c : exact_components) {
        if constexpr (std::is_same_v<S, Rat>) {
            comps.push_back(c);
        } else {
            std::vector<S> coords;
            for (const auto& q : c.coords()) coords.push_back(scalar_traits<S>::from_rat(q));
            comps.emplace_back(w, std::move(coords));
        }
    }
    const WeilPoint<S> out = lift_map(f, w)(WeilPoint<S>(w, std::move(comps)));

    auto scalar_text = [](const S& v) {
        if constexpr (std::is_same_v<S, Rat>)
            return to_string(v);
        else
            return double_str(v);
    };

    Json result;
    result["format_version"] = kFormatVersion;
    result["mode"] = std::is_same_v<S, Rat> ? "rational" : "float";
    result["components"] = Json::array();
    for (std::size_t j = 0; j < out.arity(); ++j) {
        Json coords = Json::array();
        for (const auto& v : out.component(j).coords()) coords.push_back(scalar_text(v));
        result["components"].push_back(coords);
        std::cout << "y" << j << " = [";
        const auto& cs = out.component(j).coords();
        for (std::size_t t = 0; t < cs.size(); ++t)
            std::cout << (t ? ", " : "") << scalar_text(cs[t]);
        std::cout << "]\n";
    }
    return result;
}

int cmd_eval(SessionFile& sf, const EvalRequest& req) {
    const AlgebraPtr w = sf.session.algebra(req.algebra_spec);

    std::vector<std::string> point_parts;
    for (const auto& p : split_commas(req.point_text)) {
        const std::string t = trim(p);
        if (t.empty()) fail(errc::syntax_error, "empty component in --point");
        point_parts.push_back(t);
    }
    const std::size_t arity = point_parts.size();

    std::vector<std::string> map_parts;
    for (const auto& p : split_commas(req.map_text)) {
        const std::string t = trim(p);
        if (t.empty()) fail(errc::syntax_error, "empty component in the map");
        map_parts.push_back(t);
    }
    const SmoothMap f = SmoothMap::from_strings(map_parts, arity);

    std::vector<Element<Rat>> comps;
    for (const auto& part : point_parts)
        comps.push_back(element(w, parse_polynomial(part, w->n_gens())));

    const bool exact = f.is_polynomial();
    Json result = exact ? eval_typed<Rat>(f, w, comps) : eval_typed<double>(f, w, comps);

    if (req.extract == "jet" || req.extract == "gradient" || req.extract == "hessian") {
        // Re-run the lift to post-process coordinates (cheap at these sizes).
        auto emit = [&](const char* key, auto&& rows) {
            result[key] = rows;
            std::cout << key << ":";
            std::cout << " " << Json(rows).dump() << "\n";
        };
        if (req.extract == "hessian" && w->n_gens() != arity)
            fail(errc::arity_violation,
                 "hessian extraction needs an algebra with one generator per map input");
        if (exact) {
            const WeilPoint<Rat> out = lift_map(f, w)(WeilPoint<Rat>(w, comps));
            for (std::size_t j = 0; j < out.arity(); ++j) {
                std::vector<std::string> one;
                std::vector<std::vector<std::string>> grid;
                if (req.extract == "jet")
                    for (const auto& v : extract_jet(out.component(j))) one.push_back(to_string(v));
                if (req.extract == "gradient")
                    for (const auto& v : extract_gradient(out.component(j)))
                        one.push_back(to_string(v));
                if (req.extract == "hessian")
                    for (const auto& row : extract_hessian(out.component(j))) {
                        grid.emplace_back();
                        for (const auto& v : row) grid.back().push_back(to_string(v));
                    }
                const std::string key = req.extract + "(y" + std::to_string(j) + ")";
                if (!grid.empty())
                    emit(key.c_str(), grid);
                else
                    emit(key.c_str(), one);
            }
        } else {
            std::vector<Element<double>> dcomps;
            for (const auto& c : comps) {
                std::vector<double> coords;
                for (const auto& q : c.coords()) coords.push_back(to_double(q));
                dcomps.emplace_back(w, std::move(coords));
            }
            const WeilPoint<double> out =
                lift_map(f, w)(WeilPoint<double>(w, std::move(dcomps)));
            for (std::size_t j = 0; j < out.arity(); ++j) {
                std::vector<double> one;
                std::vector<std::vector<double>> grid;
                if (req.extract == "jet") one = extract_jet(out.component(j));
                if (req.extract == "gradient") one = extract_gradient(out.component(j));
                if (req.extract == "hessian") grid = extract_hessian(out.component(j));
                const std::string key = req.extract + "(y" + std::to_string(j) + ")";
                if (!grid.empty())
                    emit(key.c_str(), grid);
                else
                    emit(key.c_str(), one);
            }
        }
    } else if (!req.extract.empty()) {
        fail(errc::syntax_error, "--extract must be jet, gradient or hessian");
    }

    if (!req.json_dest.empty()) emit_json(result, req.json_dest);
    return 0;
}

// ---- laws ----------------------------------------------------------------------

int cmd_laws(const std::string& suite, const SuiteOptions& opt,
             const std::string& json_dest, const std::string& inject) {
    static const std::vector<std::string> known = {
        "all",           "composition",     "alpha",
        "coherence",     "embedding",       "alpha-functoriality",
        "alpha-on-R",    "naturality",      "functoriality",
        "product-preservation", "identity-functor", "tensor-dimension",
        "construction-guards"};
    bool ok_name = false;
    for (const auto& k : known) ok_name = ok_name || suite == k;
    if (!ok_name) {
        std::string msg = "unknown suite '" + suite + "'; expected one of";
        for (const auto& k : known) msg += " " + k;
        fail(errc::unknown_identifier, msg);
    }
    if (!inject.empty() && !faults::set_by_name(inject))
        fail(errc::unknown_identifier, "unknown fault '" + inject + "'");

    const std::vector<LawReport> reports = run_law_suite(suite, opt);
    bool all_pass = true;
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.law << "  (trials=" << r.trials
                  << ", seed=" << r.seed << ")\n";
        if (!r.pass) std::cout << "       " << r.counterexample << "\n";
    }
    std::cout << (all_pass ? "all laws hold\n" : "law violations found\n");
    if (!json_dest.empty()) emit_json(report_to_json(reports), json_dest);
    return all_pass ? 0 : 1;
}

// ---- limits ---------------------------------------------------------------------

WeilDiagram resolve_diagram(SessionFile& sf, const std::string& spec) {
    if (spec == "pullback-D2") return builtin_pullback_D2();
    if (spec == "equalizer-vertical") return builtin_equalizer_vertical();
    return diagram_from_json(read_json_file(spec),
                             [&](const std::string& n) { return sf.session.algebra(n); });
}

int cmd_limits_compute(SessionFile& sf, const std::string& diagram,
                       const std::string& json_dest) {
    const WeilDiagram d = resolve_diagram(sf, diagram);
    const ConeCertificate cert = compute_limit(d);
    print_algebra("apex", cert.apex);
    std::cout << "solution dimension: " << cert.solution_dim << "\n";
    for (std::size_t r = 0; r < cert.legs.size(); ++r) {
        std::cout << "leg " << r << ":";
        for (const auto& img : cert.legs[r].gen_images()) std::cout << " " << img.str() << ";";
        std::cout << "\n";
    }
    std::cout << (cert.is_limit ? "limit verified\n"
                                : "not a limit: " + cert.witness + "\n");
    if (!json_dest.empty()) {
        Json j;
        j["format_version"] = kFormatVersion;
        j["apex"] = algebra_to_json(cert.apex);
        j["apex"].erase("format_version");
        j["solution_dim"] = cert.solution_dim;
        j["is_limit"] = cert.is_limit;
        if (!cert.is_limit) j["witness"] = cert.witness;
        emit_json(j, json_dest);
    }
    return cert.is_limit ? 0 : 1;
}

// Chart spec grammar: R<n> (whole chart) or (a,b)^<n> (open box power).
std::pair<std::size_t, std::optional<OpenBox>> parse_chart(const std::string& spec) {
    if (spec.size() >= 2 && spec[0] == 'R') {
        std::size_t n = 0;
        if (detail::parse_uint(spec.substr(1), n)) return {n, std::nullopt};
    }
    const auto close = spec.find(')');
    if (spec.size() >= 5 && spec[0] == '(' && close != std::string::npos &&
        close + 1 < spec.size() && spec[close + 1] == '^') {
        const auto comma = spec.find(',');
        if (comma != std::string::npos && comma < close) {
            std::size_t n = 0;
            if (!detail::parse_uint(spec.substr(close + 2), n) || n == 0)
                fail(errc::syntax_error, "bad chart power in '" + spec + "'");
            const Rat lo = parse_rational(trim(spec.substr(1, comma - 1)));
            const Rat hi = parse_rational(trim(spec.substr(comma + 1, close - comma - 1)));
            OpenBox box;
            for (std::size_t i = 0; i < n; ++i) box.intervals.emplace_back(lo, hi);
            return {n, box};
        }
    }
    fail(errc::syntax_error,
         "bad chart spec '" + spec + "'; expected R<n> or (lo,hi)^<n>");
}

int print_report_and_exit(const LawReport& r) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.law << "  (trials=" << r.trials
              << ")\n";
    if (!r.probes.empty()) {
        std::cout << "probes:";
        for (const auto& p : r.probes) std::cout << " " << p;
        std::cout << "\n";
    }
    if (!r.pass) std::cout << r.counterexample << "\n";
    return r.pass ? 0 : 1;
}

int cmd_limits_microlinear(SessionFile& sf, const std::string& chart,
                           const std::string& diagram, std::uint64_t seed) {
    const auto [arity, box] = parse_chart(chart);
    const WeilDiagram d = resolve_diagram(sf, diagram);
    const ConeCertificate cert = compute_limit(d);
    std::cout << "diagram limit: apex dim " << cert.apex->dim() << "\n";
    return print_report_and_exit(check_microlinear_chart(arity, box, d, cert, seed));
}

std::vector<PresetAlgebra> resolve_probes(SessionFile& sf, const std::string& csv) {
    if (csv.empty()) return preset_family();
    std::vector<PresetAlgebra> out;
    for (const auto& part : split_commas(csv)) {
        const std::string spec = trim(part);
        out.push_back({spec, sf.session.algebra(spec)});
    }
    return out;
}

ChartCone builtin_product_cone() {
    ChartCone cone;
    cone.apex = {2, std::nullopt};
    cone.diagram.nodes = {{1, std::nullopt}, {1, std::nullopt}};
    cone.legs.push_back(SmoothMap::from_strings({"x0"}, 2));
    cone.legs.push_back(SmoothMap::from_strings({"x1"}, 2));
    return cone;
}

int cmd_limits_transversal(SessionFile& sf, const std::string& cone_spec,
                           const std::string& probes_csv, std::uint64_t seed) {
    const ChartCone cone = cone_spec == "product-R2"
                               ? builtin_product_cone()
                               : chart_cone_from_json(read_json_file(cone_spec));
    return print_report_and_exit(
        check_transversal(cone, resolve_probes(sf, probes_csv), seed));
}

int cmd_limits_vertical(SessionFile& sf, std::size_t base, std::size_t fiber,
                        const std::string& algebra_spec, const std::string& probes_csv,
                        std::uint64_t seed) {
    Bundle b;
    b.base_dims = base;
    b.fiber_dims = fiber;
    const AlgebraPtr w = sf.session.algebra(algebra_spec);
    const auto probes = resolve_probes(sf, probes_csv);

    const VerticalWeil v = vertical_weil(b, w, probes, seed);
    std::cout << "vertical carrier: R^" << base << " x W^" << fiber << " inside W^"
              << (base + fiber) << "  (chart dim " << v.carrier_dim << ", nilpotent coords "
              << v.nilpotent_coords << ")\n";
    const int t = print_report_and_exit(v.transversality);
    const int e = print_report_and_exit(
        check_vertical_embedding(b, w, probes, splitmix64(seed ^ 1)));
    return t != 0 || e != 0 ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weil-algebra toolkit: jets, lifted maps, and functor laws"};
    app.require_subcommand(1);
    std::string session_path;
    app.add_option("--session", session_path, "session file to load and persist");

    // algebra
    auto* algebra = app.add_subcommand("algebra", "define and inspect algebras");
    algebra->fallthrough();
    algebra->require_subcommand(1);
    auto* a_define = algebra->add_subcommand("define", "register an algebra from a JSON file");
    a_define->fallthrough();
    std::string define_file, define_name;
    a_define->add_option("file", define_file, "presentation document")->required();
    a_define->add_option("--name", define_name, "registry name override");
    auto* a_show = algebra->add_subcommand("show", "print basis, dimension, nilpotency");
    a_show->fallthrough();
    std::string show_spec;
    a_show->add_option("algebra", show_spec, "name or preset spec")->required();
    auto* a_tensor = algebra->add_subcommand("tensor", "register a tensor product");
    a_tensor->fallthrough();
    std::string t_a, t_b, t_kw, t_name;
    a_tensor->add_option("A", t_a)->required();
    a_tensor->add_option("B", t_b)->required();
    a_tensor->add_option("as", t_kw, "the literal word 'as'")->required();
    a_tensor->add_option("NAME", t_name)->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a map on an algebra point");
    eval_cmd->fallthrough();
    EvalRequest req;
    eval_cmd->add_option("map", req.map_text, "comma-separated components")->required();
    eval_cmd->add_option("algebra", req.algebra_spec)->required();
    eval_cmd->add_option("--point", req.point_text, "comma-separated element polynomials")
        ->required();
    eval_cmd->add_option("--extract", req.extract, "jet | gradient | hessian");
    eval_cmd->add_option("--json", req.json_dest, "write a result document (path or -)");

    // laws
    auto* laws_cmd = app.add_subcommand("laws", "run the law suites");
    laws_cmd->fallthrough();
    std::string suite = "all", laws_json, inject;
    SuiteOptions opt;
    laws_cmd->add_option("suite", suite, "composition | alpha | coherence | embedding | all");
    laws_cmd->add_option("--seed", opt.seed, "PRNG seed");
    laws_cmd->add_option("--trials", opt.trials, "random points per configuration");
    laws_cmd->add_option("--maps", opt.maps, "random maps per configuration");
    laws_cmd->add_option("--json", laws_json, "write the report document (path or -)");
    laws_cmd->add_option("--inject-fault", inject,
                         "test-only: enable a documented fault before running");

    // limits
    auto* limits_cmd = app.add_subcommand("limits", "limit computations and verdicts");
    limits_cmd->fallthrough();
    limits_cmd->require_subcommand(1);
    auto* l_compute = limits_cmd->add_subcommand("compute", "compute a diagram limit");
    l_compute->fallthrough();
    std::string diagram_spec, compute_json;
    l_compute->add_option("diagram", diagram_spec, "pullback-D2 | equalizer-vertical | file")
        ->required();
    l_compute->add_option("--json", compute_json, "write a certificate document");
    auto* l_micro = limits_cmd->add_subcommand("microlinear", "chart microlinearity verdict");
    l_micro->fallthrough();
    std::string chart_spec = "R1", micro_diagram = "pullback-D2";
    std::uint64_t micro_seed = 424243;
    l_micro->add_option("--chart", chart_spec, "R<n> or (lo,hi)^<n>");
    l_micro->add_option("--diagram", micro_diagram);
    l_micro->add_option("--seed", micro_seed);
    auto* l_trans = limits_cmd->add_subcommand("transversal", "probe-stability verdict");
    l_trans->fallthrough();
    std::string cone_spec = "product-R2", trans_probes;
    std::uint64_t trans_seed = 424243;
    l_trans->add_option("--cone", cone_spec, "product-R2 | cone document file");
    l_trans->add_option("--probes", trans_probes, "comma-separated algebra specs");
    l_trans->add_option("--seed", trans_seed);
    auto* l_vert = limits_cmd->add_subcommand("vertical", "vertical Weil functor");
    l_vert->fallthrough();
    std::size_t vert_base = 0, vert_fiber = 0;
    std::string vert_algebra, vert_probes;
    std::uint64_t vert_seed = 424243;
    l_vert->add_option("--base", vert_base, "base dimensions m")->required();
    l_vert->add_option("--fiber", vert_fiber, "fiber dimensions n")->required();
    l_vert->add_option("--algebra", vert_algebra, "Weil algebra spec")->required();
    l_vert->add_option("--probes", vert_probes, "comma-separated algebra specs");
    l_vert->add_option("--seed", vert_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    SessionFile sf{session_path, {}};
    try {
        sf.load();
        if (a_define->parsed()) return cmd_algebra_define(sf, define_file, define_name);
        if (a_show->parsed()) return cmd_algebra_show(sf, show_spec);
        if (a_tensor->parsed()) return cmd_algebra_tensor(sf, t_a, t_b, t_kw, t_name);
        if (eval_cmd->parsed()) return cmd_eval(sf, req);
        if (laws_cmd->parsed()) return cmd_laws(suite, opt, laws_json, inject);
        if (l_compute->parsed()) return cmd_limits_compute(sf, diagram_spec, compute_json);
        if (l_micro->parsed())
            return cmd_limits_microlinear(sf, chart_spec, micro_diagram, micro_seed);
        if (l_trans->parsed())
            return cmd_limits_transversal(sf, cone_spec, trans_probes, trans_seed);
        if (l_vert->parsed())
            return cmd_limits_vertical(sf, vert_base, vert_fiber, vert_algebra,
                                       vert_probes, vert_seed);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
