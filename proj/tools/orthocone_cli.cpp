// Command-line front end. Every subcommand is a thin adapter over the library and prints one JSON record
// (or CSV with --format csv). Exit codes: 0 ok, 1 usage, 2 invalid input, 3 numerical failure, 4 verify mismatch.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "orthocone/orthocone.hpp"

namespace oc = orthocone;
using json = nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exit 4 carrier for verify.
struct VerifyMismatch {
    json record;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) out.push_back(cur), cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_double(const std::string& tok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw UsageError("not a number: " + tok);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("not a number: " + tok);
    }
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> v;
    for (const auto& t : split_list(s)) v.push_back(parse_double(t));
    return v;
}

std::vector<std::size_t> parse_indices(const std::string& s) {
    std::vector<std::size_t> v;
    for (const auto& t : split_list(s)) {
        const double x = parse_double(t);
        if (x < 0 || x != std::floor(x)) throw UsageError("not a vertex index: " + t);
        v.push_back(static_cast<std::size_t>(x));
    }
    return v;
}

// Accepts "+,-" and "1,-1" interchangeably.
std::vector<int> parse_eps(const std::string& s, std::size_t d) {
    if (s.empty()) return std::vector<int>(d, 1);
    std::vector<int> v;
    for (const auto& t : split_list(s)) {
        if (t == "+" || t == "1" || t == "+1") v.push_back(1);
        else if (t == "-" || t == "-1") v.push_back(-1);
        else throw UsageError("eps entries must be +, -, 1 or -1: " + t);
    }
    if (v.size() != d) throw UsageError("--eps needs one entry per lambda");
    return v;
}

oc::VertexSet read_vertices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open vertex file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::vector<std::vector<double>> rows;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        json j;
        try {
            j = json::parse(text);
            rows = j.get<std::vector<std::vector<double>>>();
        } catch (const json::exception& e) {
            throw UsageError(std::string("bad JSON vertex file: ") + e.what());
        }
    } else {
        std::istringstream ls(text);
        std::string line;
        while (std::getline(ls, line)) {
            if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
            auto r = parse_doubles(line);
            if (!r.empty()) rows.push_back(r);
        }
    }
    oc::VertexSet V;
    for (const auto& r : rows) V.push_back(Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())));
    return V;
}

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json real_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json angle_json(const oc::AngleResult& r) {
    return {{"value", r.value}, {"err_estimate", r.err_estimate}, {"branch", oc::to_string(r.branch)}};
}

json mc_json(const oc::mc::McEstimate& e) {
    return {{"mean", e.mean}, {"stderr", e.std_error}, {"n_samples", e.n_samples}};
}

json params_json(const oc::ConeParams& p) {
    return {{"lambda0", p.lambda0}, {"lambdas", p.lambdas}, {"eps", p.eps}};
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out.emplace_back(prefix, j.is_string() ? j.get<std::string>() : j.dump());
    }
}

// RFC 4180 quoting: fields with commas, quotes or line breaks are wrapped and inner quotes doubled.
std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\r\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + '"';
}

void emit(const json& record, const std::string& format) {
    if (format == "csv") {
        std::vector<std::pair<std::string, std::string>> rows;
        flatten(record, "", rows);
        std::cout << "key,value\n";
        for (const auto& [k, v] : rows) std::cout << csv_field(k) << ',' << csv_field(v) << '\n';
    } else {
        std::cout << record.dump(2) << '\n';
    }
}

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (std::uint64_t{rd()} << 32) ^ rd();
}

// Combined standard error of an MC estimate and a closed-form value; floored so exact agreement gives z = 0.
double z_score(const oc::mc::McEstimate& e, double exact, double exact_err) {
    const double s = std::sqrt(e.std_error * e.std_error + exact_err * exact_err);
    return (e.mean - exact) / std::max(s, 1e-12);
}

struct Options {
    // g / cones
    double lambda0 = 1.0;
    std::string lambdas, eps;
    // simplex
    std::string cls, tau, vertices, face;
    int k = -1;
    bool with_special = false, without_special = false, all = false;
    double tol = 1e-9;
    // gauss
    std::size_t d = 2, n = 3;
    // quadrature
    oc::QuadratureConfig quad;
    // randomized
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned jobs = 1;
    std::string target;
    std::string format = "json";
};

oc::ConeParams cone_params(const Options& o) {
    oc::ConeParams p;
    p.lambda0 = o.lambda0;
    p.lambdas = parse_doubles(o.lambdas);
    p.eps = parse_eps(o.eps, p.lambdas.size());
    return p;
}

oc::GaussianPolytopeSpec gauss_spec(const Options& o) {
    return {o.d, o.n, parse_doubles(o.tau)};
}

json cmd_gd(const Options& o) {
    const auto p = cone_params(o);
    const auto r = oc::g(p, o.quad);
    return {{"inputs", params_json(p)}, {"results", angle_json(r)}};
}

oc::SimplexClass parse_class(const std::string& s) {
    if (s == "acute") return oc::SimplexClass::Acute;
    if (s == "obtuse") return oc::SimplexClass::Obtuse;
    if (s == "rectangular") return oc::SimplexClass::Rectangular;
    throw UsageError("--class must be acute, obtuse or rectangular");
}

json classification_json(const oc::SimplexClassification& c) {
    json mu = json::array();
    for (double m : c.mu) mu.push_back(real_or_null(m));
    return {{"verdict", oc::to_string(c.verdict)},
            {"special_index", c.special_index < 0 ? json(nullptr) : json(c.special_index)},
            {"orthocenter", vec_json(c.orthocenter)},
            {"c", c.c},
            {"mu", mu},
            {"canonical_tau", c.canonical_tau},
            {"permutation", c.permutation},
            {"residual", c.residual},
            {"boundary_warning", c.boundary_warning}};
}

json cmd_classify(const Options& o) {
    if (o.vertices.empty()) throw UsageError("classify needs --vertices");
    const auto V = read_vertices(o.vertices);
    const auto c = oc::classify(V, o.tol);
    return {{"inputs", {{"vertices", o.vertices}, {"tol", o.tol}}}, {"results", classification_json(c)}};
}

json cmd_angles(const Options& o) {
    json inputs, results;
    oc::CanonicalSimplex s;
    oc::SimplexClassification c;
    const bool from_file = !o.vertices.empty();
    if (from_file) {
        c = oc::classify(read_vertices(o.vertices), o.tol);
        inputs["vertices"] = o.vertices;
        results["classification"] = classification_json(c);
        if (c.verdict == oc::SimplexClass::NotOrthocentric)
            throw oc::InvalidParams("vertex set is not orthocentric (residual " + std::to_string(c.residual) + ")");
        s = c.canonical();
    } else {
        if (o.cls.empty() || o.tau.empty()) throw UsageError("angles needs --class and --tau, or --vertices");
        s = {parse_class(o.cls), parse_doubles(o.tau)};
        inputs["class"] = o.cls;
        inputs["tau"] = s.tau;
    }
    const std::size_t d = s.dim();

    // Faces in canonical positions; `shown` is what the user sees (input indices for vertex files).
    std::vector<std::pair<oc::FaceSelector, std::vector<std::size_t>>> faces;
    auto add_canonical = [&](oc::FaceSelector f) {
        std::vector<std::size_t> shown = f.vertices;
        if (from_file)
            for (auto& v : shown) v = c.permutation.at(v);
        std::sort(shown.begin(), shown.end());
        faces.emplace_back(std::move(f), std::move(shown));
    };
    if (o.all) {
        for (std::size_t mask = 1; mask < (std::size_t{1} << (d + 1)); ++mask) {
            oc::FaceSelector f;
            for (std::size_t i = 0; i <= d; ++i)
                if (mask >> i & 1) f.vertices.push_back(i);
            add_canonical(f);
        }
    } else if (!o.face.empty()) {
        const auto idx = parse_indices(o.face);
        if (from_file) {
            auto f = oc::face_from_input(c, idx);
            faces.emplace_back(f, idx);
        } else {
            add_canonical({idx});
        }
    } else if (o.k >= 0) {
        const auto k = static_cast<std::size_t>(o.k);
        if (o.without_special) {
            add_canonical(oc::FaceSelector::without_special(k));
        } else if (o.with_special || s.cls == oc::SimplexClass::Acute) {
            add_canonical(oc::FaceSelector::with_special(k));
        } else {
            throw UsageError("choose --face-with-origin or --face-without-origin for this class");
        }
    } else {
        throw UsageError("select a face with --face, --k or --all");
    }
    inputs["faces"] = json::array();
    for (const auto& f : faces) inputs["faces"].push_back(f.second);

    results["class"] = oc::to_string(s.cls);
    results["canonical_tau"] = s.tau;
    results["faces"] = json::array();
    for (const auto& [f, shown] : faces) {
        const auto b = oc::internal_angle(s, f, o.quad);
        const auto gm = oc::external_angle(s, f, o.quad);
        results["faces"].push_back({{"vertices", shown},
                                    {"canonical_vertices", f.vertices},
                                    {"k", f.vertices.size() - 1},
                                    {"beta", angle_json(b)},
                                    {"gamma", angle_json(gm)}});
    }
    return {{"inputs", inputs}, {"results", results}};
}

json cmd_conic_volumes(const Options& o) {
    const auto p = cone_params(o);
    const oc::OrthocentricCone cone(p);
    const auto v = oc::conic_intrinsic_volumes(cone, o.quad);
    const auto a = oc::solid_angle(cone, o.quad);
    return {{"inputs", params_json(p)},
            {"results", {{"values", v.values}, {"errors", v.errors}, {"solid_angle", angle_json(a)}}}};
}

json gauss_inputs(const oc::GaussianPolytopeSpec& s) { return {{"d", s.d}, {"n", s.n}, {"tau", s.tau}}; }

json cmd_gauss_f(const Options& o) {
    const auto s = gauss_spec(o);
    const auto f = oc::expected_f_vector(s, o.quad);
    return {{"inputs", gauss_inputs(s)}, {"results", {{"values", f.values}, {"errors", f.errors}}}};
}

json cmd_gauss_volume(const Options& o) {
    const auto s = gauss_spec(o);
    const auto v = oc::expected_volume(s, o.quad);
    return {{"inputs", gauss_inputs(s)}, {"results", {{"value", v.value}, {"err_estimate", v.error}}}};
}

json cmd_verify(const Options& o) {
    const oc::mc::McOptions mo{o.samples, {o.seed, 0}, o.jobs};
    json inputs{{"target", o.target}, {"samples", o.samples}}, rows = json::array();
    auto add = [&](const std::string& name, double exact, double exact_err, const oc::mc::McEstimate& e) {
        rows.push_back({{"quantity", name},
                        {"closed_form", exact},
                        {"closed_form_err", exact_err},
                        {"mc", mc_json(e)},
                        {"z", z_score(e, exact, exact_err)}});
    };
    if (o.target == "gd") {
        const auto p = cone_params(o);
        inputs["params"] = params_json(p);
        const auto r = oc::g(p, o.quad);
        add("g", r.value, r.err_estimate, oc::mc::orthant_probability(p, mo));
    } else if (o.target == "solid-angle") {
        const auto p = cone_params(o);
        inputs["params"] = params_json(p);
        const oc::OrthocentricCone cone(p);
        const auto r = oc::solid_angle(cone, o.quad);
        add("solid_angle", r.value, r.err_estimate, oc::mc::solid_angle(oc::cone_generators(p), mo));
    } else if (o.target == "conic-volumes") {
        const auto p = cone_params(o);
        inputs["params"] = params_json(p);
        const oc::OrthocentricCone cone(p);
        const auto v = oc::conic_intrinsic_volumes(cone, o.quad);
        const auto e = oc::mc::conic_intrinsic_volumes(oc::cone_generators(p), mo);
        for (std::size_t k = 0; k < e.size(); ++k) add("v" + std::to_string(k), v.values[k], v.errors[k], e[k]);
    } else if (o.target == "gauss-f" || o.target == "gauss-volume") {
        const auto s = gauss_spec(o);
        inputs["polytope"] = gauss_inputs(s);
        if (s.d != 2) throw UsageError("the polytope oracle is planar; use --d 2");
        const auto h = oc::mc::empirical_hull_stats_2d(s.tau, mo);
        if (o.target == "gauss-f") {
            const auto f = oc::expected_f_vector(s, o.quad);
            add("f0", f.values[0], f.errors[0], h.f0);
            add("f1", f.values[1], f.errors[1], h.f1);
        } else {
            const auto v = oc::expected_volume(s, o.quad);
            add("volume", v.value, v.error, h.area);
        }
    } else {
        throw UsageError("verify target must be gd, solid-angle, conic-volumes, gauss-f or gauss-volume");
    }
    double zmax = 0.0;
    for (const auto& r : rows) zmax = std::max(zmax, std::fabs(r["z"].get<double>()));
    json record{{"inputs", inputs}, {"results", {{"rows", rows}, {"max_abs_z", zmax}, {"pass", zmax <= 5.0}}}};
    if (zmax > 5.0) throw VerifyMismatch{record};
    return record;
}

std::pair<std::string, std::string> split_error(const std::string& what) {
    const auto colon = what.find(": ");
    if (colon == std::string::npos) return {"error", what};
    return {what.substr(0, colon), what.substr(colon + 2)};
}

int exit_code_for(const std::string& type) {
    static const std::vector<std::string> numerical = {"QuadratureFailure", "DomainTooLarge", "CholeskyFailure",
                                                       "SingularGenerators", "ProjectionNonConvergence"};
    return std::find(numerical.begin(), numerical.end(), type) != numerical.end() ? 3 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthocentric cone and simplex calculator"};
    app.require_subcommand(1);
    Options o;

    auto add_quad = [&](CLI::App* s) {
        s->add_option("--abs-tol", o.quad.abs_tol, "absolute quadrature tolerance");
        s->add_option("--rel-tol", o.quad.rel_tol, "relative quadrature tolerance");
        s->add_option("--max-depth", o.quad.max_depth, "maximum bisection depth");
    };
    auto add_format = [&](CLI::App* s) {
        s->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_cone = [&](CLI::App* s, bool required) {
        auto* l0 = s->add_option("--lambda0", o.lambda0, "lambda_0");
        if (required) l0->required();
        s->add_option("--lambdas", o.lambdas, "comma-separated lambda_1..lambda_d");
        s->add_option("--eps", o.eps, "comma-separated signs (+,- or 1,-1); default all +");
    };
    auto add_gauss = [&](CLI::App* s) {
        s->add_option("--d", o.d, "ambient dimension")->required();
        s->add_option("--n", o.n, "number of points")->required();
        s->add_option("--tau", o.tau, "comma-separated tau_1..tau_n")->required();
    };
    auto add_random = [&](CLI::App* s) {
        s->add_option("--samples", o.samples, "Monte-Carlo sample count");
        s->add_option("--seed", o.seed, "RNG seed (generated and echoed when omitted)");
        s->add_option("--jobs", o.jobs, "worker threads; results do not depend on this");
    };

    auto* gd = app.add_subcommand("gd", "evaluate g_d(lambda0; lambdas; eps)");
    add_cone(gd, true);
    add_quad(gd);
    add_format(gd);

    auto* angles = app.add_subcommand("angles", "internal and external angles of an orthocentric simplex");
    angles->add_option("--class", o.cls, "acute, obtuse or rectangular");
    angles->add_option("--tau", o.tau, "canonical tau list");
    angles->add_option("--vertices", o.vertices, "CSV or JSON vertex file");
    angles->add_option("--tol", o.tol, "classification tolerance");
    angles->add_option("--face", o.face, "vertex indices of the face (canonical positions, or input rows for --vertices)");
    angles->add_option("--k", o.k, "face dimension");
    angles->add_flag("--face-with-origin,--face-with-special", o.with_special, "face through the special vertex");
    angles->add_flag("--face-without-origin,--face-without-special", o.without_special,
                     "face avoiding the special vertex");
    angles->add_flag("--all", o.all, "table over all faces");
    add_quad(angles);
    add_format(angles);

    auto* classify = app.add_subcommand("classify", "classify a vertex set");
    classify->add_option("--vertices", o.vertices, "CSV or JSON vertex file")->required();
    classify->add_option("--tol", o.tol, "relative tolerance");
    add_format(classify);

    auto* conic = app.add_subcommand("conic-volumes", "conic intrinsic volumes of C_d(lambda0; lambdas; eps)");
    add_cone(conic, true);
    add_quad(conic);
    add_format(conic);

    auto* gf = app.add_subcommand("gauss-f", "expected f-vector of [g_1/tau_1, ..., g_n/tau_n]");
    add_gauss(gf);
    add_quad(gf);
    add_format(gf);

    auto* gv = app.add_subcommand("gauss-volume", "expected volume of [g_1/tau_1, ..., g_n/tau_n]");
    add_gauss(gv);
    add_quad(gv);
    add_format(gv);

    auto* verify = app.add_subcommand("verify", "closed form against Monte Carlo");
    verify->add_option("target", o.target, "gd, solid-angle, conic-volumes, gauss-f or gauss-volume")->required();
    add_cone(verify, false);
    verify->add_option("--d", o.d, "ambient dimension (gauss targets)");
    verify->add_option("--n", o.n, "number of points (gauss targets)");
    verify->add_option("--tau", o.tau, "tau list (gauss targets)");
    add_random(verify);
    add_quad(verify);
    add_format(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    json record;
    int code = 0;
    const auto t0 = std::chrono::steady_clock::now();
    if (name == "verify") {
        o.seed_given = sub->count("--seed") > 0;
        if (!o.seed_given) o.seed = fresh_seed();
    }
    try {
        if (name == "gd") record = cmd_gd(o);
        else if (name == "angles") record = cmd_angles(o);
        else if (name == "classify") record = cmd_classify(o);
        else if (name == "conic-volumes") record = cmd_conic_volumes(o);
        else if (name == "gauss-f") record = cmd_gauss_f(o);
        else if (name == "gauss-volume") record = cmd_gauss_volume(o);
        else record = cmd_verify(o);
    } catch (const UsageError& e) {
        std::cerr << name << ": " << e.what() << '\n';
        return 1;
    } catch (const VerifyMismatch& m) {
        record = m.record;
        code = 4;
    } catch (const oc::error& e) {
        const auto [type, reason] = split_error(e.what());
        record = {{"error", {{"type", type}, {"reason", reason}}}};
        code = exit_code_for(type);
        std::cerr << name << ": " << e.what() << '\n';
    }
    record["command"] = name;
    record["argv"] = std::vector<std::string>(argv + 1, argv + argc);
    if (name == "verify") record["seed"] = o.seed;
    record["wall_time_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(record, o.format);
    return code;
}
