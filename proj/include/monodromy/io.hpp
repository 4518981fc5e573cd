#pragma once

// JSON problem files and solution reports, CSV benchmark rows.

#include "monodromy/problems.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace monodromy {

using json = nlohmann::json;

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Residual bound a seed must meet when a problem file is loaded.
inline constexpr double seed_residual_tol = 1e-6;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError("complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json point_to_json(const Point& p) {
    json out = json::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) out.push_back(complex_to_json(p[i]));
    return out;
}

inline Point point_from_json(const json& j, std::optional<std::size_t> dim = std::nullopt) {
    if (!j.is_array()) throw SchemaError("a point is an array of complex numbers");
    if (dim && j.size() != *dim)
        throw SchemaError("point has " + std::to_string(j.size()) + " coordinates, expected " + std::to_string(*dim));
    Point p(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) p[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    return p;
}

inline json polynomial_to_json(const Polynomial& p) {
    json terms = json::array();
    for (const auto& m : p.terms()) terms.push_back({{"coeff", complex_to_json(m.coeff)}, {"exps", m.exponents}});
    return terms;
}

inline Polynomial polynomial_from_json(const json& j, const std::vector<std::string>& names) {
    if (!j.is_array()) throw SchemaError("a polynomial is a list of terms");
    std::vector<Monomial> terms;
    for (const auto& t : j) {
        if (!t.is_object() || !t.contains("coeff") || !t.contains("exps"))
            throw SchemaError("a term needs \"coeff\" and \"exps\"");
        const auto& e = t["exps"];
        if (!e.is_array() || e.size() != names.size())
            throw SchemaError("term exponent list must have " + std::to_string(names.size()) + " entries");
        Monomial m{complex_from_json(t["coeff"]), {}};
        for (const auto& k : e) {
            if (!k.is_number_integer() || k.get<long long>() < 0) throw SchemaError("exponents are nonnegative integers");
            m.exponents.push_back(k.get<int>());
        }
        terms.push_back(std::move(m));
    }
    return Polynomial(names, std::move(terms));
}

namespace detail {

inline std::vector<std::string> name_list(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw SchemaError(std::string("missing name list \"") + key + "\"");
    std::vector<std::string> out;
    for (const auto& s : j[key]) {
        if (!s.is_string()) throw SchemaError(std::string("\"") + key + "\" must hold strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

template <typename T>
json optional_to_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

}  // namespace detail

/// {"variables": [...], "parameters": [...], "equations": [[term, ...], ...]}
inline json system_to_json(const ParameterizedSystem& s) {
    json eqs = json::array();
    for (const auto& f : s.equations()) eqs.push_back(polynomial_to_json(f));
    return {{"variables", s.variables()}, {"parameters", s.parameters()}, {"equations", eqs}};
}

inline std::shared_ptr<const ParameterizedSystem> system_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("a system is a JSON object");
    auto vars = detail::name_list(j, "variables");
    auto params = detail::name_list(j, "parameters");
    if (!j.contains("equations") || !j["equations"].is_array()) throw SchemaError("missing \"equations\"");
    auto ring = detail::concat(vars, params);
    std::vector<Polynomial> eqs;
    for (const auto& e : j["equations"]) eqs.push_back(polynomial_from_json(e, ring));
    try {
        return std::make_shared<const ParameterizedSystem>(std::move(vars), std::move(params), std::move(eqs));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
}

/// Full problem file: the system plus alpha, line, seed and catalog fields.
inline json problem_to_json(const ProblemInstance& p) {
    json out = system_to_json(*p.system);
    out["name"] = p.name;
    if (p.alpha) {
        json comps = json::array();
        for (const auto& g : p.alpha->components()) comps.push_back(polynomial_to_json(g));
        out["alpha"] = comps;
    }
    out["line"] = {{"base", point_to_json(p.curve->line_base())},
                   {"direction", point_to_json(p.curve->line_direction())}};
    if (p.seed_x.size() > 0) out["seed"] = {{"x", point_to_json(p.seed_x)}, {"t", complex_to_json(p.seed_t)}};
    out["known_degree"] = detail::optional_to_json(p.known_degree);
    out["known_classes"] = detail::optional_to_json(p.known_classes);
    out["loop_radius"] = p.loop_radius;
    out["torus_only"] = p.torus_only;
    return out;
}

/// Builds and validates an instance. Without "line", a random direction is
/// drawn from `run_seed` and the line passes through seed.u at seed.t.
inline ProblemInstance problem_from_json(const json& j, std::uint64_t run_seed) {
    ProblemInstance inst;
    inst.system = system_from_json(j);
    const auto& sys = *inst.system;
    const std::size_t n = sys.num_variables();
    const std::size_t m = sys.num_parameters();
    if (sys.equations().size() != n) throw SchemaError("the system must be square");
    if (m == 0) throw SchemaError("the system needs at least one parameter");
    inst.name = j.value("name", std::string("file"));

    if (j.contains("alpha") && !j["alpha"].is_null()) {
        if (!j["alpha"].is_array()) throw SchemaError("\"alpha\" is a list of polynomials");
        std::vector<Polynomial> comps;
        for (const auto& g : j["alpha"]) {
            const bool with_params = !g.empty() && g[0].contains("exps") && g[0]["exps"].size() == n + m;
            if (!with_params) {
                comps.push_back(polynomial_from_json(g, sys.variables()));
                continue;
            }
            const auto full = polynomial_from_json(g, sys.ring_names());
            std::vector<Monomial> terms;
            for (const auto& t : full.terms()) {
                if (std::any_of(t.exponents.begin() + static_cast<std::ptrdiff_t>(n), t.exponents.end(),
                                [](int e) { return e != 0; }))
                    throw SchemaError("alpha mentions parameters");
                terms.push_back({t.coeff, {t.exponents.begin(), t.exponents.begin() + static_cast<std::ptrdiff_t>(n)}});
            }
            comps.emplace_back(sys.variables(), std::move(terms));
        }
        inst.alpha = AlphaMap(n, std::move(comps));
    }

    std::optional<Point> seed_u;
    if (j.contains("seed") && !j["seed"].is_null()) {
        const auto& s = j["seed"];
        if (!s.is_object() || !s.contains("x")) throw SchemaError("\"seed\" needs \"x\"");
        inst.seed_x = point_from_json(s["x"], n);
        inst.seed_t = s.contains("t") ? complex_from_json(s["t"]) : Complex{0.0, 0.0};
        if (s.contains("u")) seed_u = point_from_json(s["u"], m);
    }

    Point base, direction;
    if (j.contains("line") && !j["line"].is_null()) {
        const auto& l = j["line"];
        if (!l.is_object() || !l.contains("base") || !l.contains("direction"))
            throw SchemaError("\"line\" needs \"base\" and \"direction\"");
        base = point_from_json(l["base"], m);
        direction = point_from_json(l["direction"], m);
    } else {
        if (!seed_u) throw SchemaError("without \"line\" the seed must give its parameter point \"u\"");
        Rng rng(run_seed);
        direction = detail::random_point(m, rng);
        // Scaled with the seed so the line meets the discriminant at |t| of order one.
        direction *= std::max(1.0, seed_u->norm()) / direction.norm();
        base = *seed_u - inst.seed_t * direction;
    }
    try {
        inst.curve = restrict_to_line(inst.system, base, direction);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }

    if (inst.seed_x.size() > 0) {
        const double r = inst.seed_residual();
        if (!(r < seed_residual_tol))
            throw SchemaError("seed residual " + std::to_string(r) + " exceeds " + std::to_string(seed_residual_tol));
    }
    inst.known_degree = detail::optional_from_json<std::size_t>(j, "known_degree");
    inst.known_classes = detail::optional_from_json<std::size_t>(j, "known_classes");
    inst.loop_radius = j.value("loop_radius", 0.0);
    inst.torus_only = j.value("torus_only", false);
    return inst;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

inline ProblemInstance parse_problem_file(const std::string& path, std::uint64_t run_seed) {
    try {
        return problem_from_json(read_json_file(path), run_seed);
    } catch (const json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

inline void write_problem_file(const std::string& path, const ProblemInstance& p) {
    write_json_file(path, problem_to_json(p));
}

struct SolutionReport {
    std::string problem;
    std::string mode;
    std::uint64_t rng_seed = 0;
    json system;
    Point line_base;
    Point line_direction;
    Complex base;
    std::vector<Point> points;
    std::vector<Block> classes;
    // Decomposable runs: indices into points of the two factors.
    std::vector<std::size_t> a_factor;
    std::vector<std::size_t> b_factor;
    std::optional<DecompositionDegrees> degrees;
    std::optional<bool> complete;
    std::optional<std::size_t> known_degree;
    std::optional<std::size_t> known_classes;
    RunStats stats;
};

inline json stats_to_json(const RunStats& s) {
    return {{"loops_taken", s.loops_taken},     {"paths_tracked", s.paths_tracked}, {"path_failures", s.path_failures},
            {"points_found", s.points_found},   {"classes_found", s.classes_found}, {"wall_ms", s.wall_ms()}};
}

inline RunStats stats_from_json(const json& j) {
    RunStats s;
    s.loops_taken = j.at("loops_taken").get<std::size_t>();
    s.paths_tracked = j.at("paths_tracked").get<std::size_t>();
    s.path_failures = j.at("path_failures").get<std::size_t>();
    s.points_found = j.at("points_found").get<std::size_t>();
    s.classes_found = j.at("classes_found").get<std::size_t>();
    s.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::duration<double, std::milli>(j.at("wall_ms").get<double>()));
    return s;
}

inline json report_to_json(const SolutionReport& r) {
    json pts = json::array();
    for (const auto& p : r.points) pts.push_back(point_to_json(p));
    json out = {{"problem", r.problem},
                {"mode", r.mode},
                {"rng_seed", r.rng_seed},
                {"system", r.system},
                {"line", {{"base", point_to_json(r.line_base)}, {"direction", point_to_json(r.line_direction)}}},
                {"base", complex_to_json(r.base)},
                {"points", pts},
                {"classes", r.classes},
                {"degrees", r.degrees ? json{{"a", r.degrees->a}, {"b", r.degrees->b}} : json(nullptr)},
                {"complete", detail::optional_to_json(r.complete)},
                {"known_degree", detail::optional_to_json(r.known_degree)},
                {"known_classes", detail::optional_to_json(r.known_classes)},
                {"stats", stats_to_json(r.stats)}};
    if (r.mode == "decomposable") {
        out["a_factor"] = r.a_factor;
        out["b_factor"] = r.b_factor;
    }
    return out;
}

inline SolutionReport report_from_json(const json& j) {
    try {
        SolutionReport r;
        r.problem = j.at("problem").get<std::string>();
        r.mode = j.at("mode").get<std::string>();
        r.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        r.system = j.at("system");
        r.line_base = point_from_json(j.at("line").at("base"));
        r.line_direction = point_from_json(j.at("line").at("direction"));
        r.base = complex_from_json(j.at("base"));
        for (const auto& p : j.at("points")) r.points.push_back(point_from_json(p));
        r.classes = j.at("classes").get<std::vector<Block>>();
        if (!j.at("degrees").is_null())
            r.degrees = DecompositionDegrees{j["degrees"].at("a").get<std::size_t>(), j["degrees"].at("b").get<std::size_t>()};
        r.complete = detail::optional_from_json<bool>(j, "complete");
        r.known_degree = detail::optional_from_json<std::size_t>(j, "known_degree");
        r.known_classes = detail::optional_from_json<std::size_t>(j, "known_classes");
        if (j.contains("a_factor")) r.a_factor = j["a_factor"].get<std::vector<std::size_t>>();
        if (j.contains("b_factor")) r.b_factor = j["b_factor"].get<std::vector<std::size_t>>();
        r.stats = stats_from_json(j.at("stats"));
        return r;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed report: ") + e.what());
    }
}

/// Independent check of a report: rebuilds the curve from the embedded system
/// and line, and returns the largest residual over all points.
inline double report_max_residual(const SolutionReport& r) {
    const auto system = system_from_json(r.system);
    const auto curve = restrict_to_line(system, r.line_base, r.line_direction);
    double worst = 0.0;
    for (const auto& p : r.points) {
        if (static_cast<std::size_t>(p.size()) != curve->num_variables())
            throw SchemaError("report point has the wrong dimension");
        worst = std::max(worst, curve->evaluate(p, r.base).norm());
    }
    return worst;
}

/// Classes must partition the point indices.
inline bool classes_partition_points(const SolutionReport& r) {
    std::vector<int> seen(r.points.size(), 0);
    for (const auto& c : r.classes)
        for (auto i : c) {
            if (i >= seen.size() || seen[i]++) return false;
        }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

struct BenchRow {
    std::string problem;
    std::string mode;
    std::uint64_t seed = 0;
    RunStats stats;
};

inline constexpr const char* stats_csv_header =
    "problem,mode,seed,loops_taken,paths_tracked,path_failures,points_found,classes_found,wall_ms";

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string fmt_number(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

inline std::string stats_csv_row(const BenchRow& r) {
    const auto& s = r.stats;
    std::ostringstream os;
    os << detail::csv_field(r.problem) << ',' << r.mode << ',' << r.seed << ',' << s.loops_taken << ','
       << s.paths_tracked << ',' << s.path_failures << ',' << s.points_found << ',' << s.classes_found << ','
       << detail::fmt_number(s.wall_ms());
    return os.str();
}

struct BenchSummary {
    std::string problem;
    std::string mode;
    std::string statistic;  // best, average, median, worst
    double loops = 0, paths = 0, failures = 0, points = 0, classes = 0, wall_ms = 0;
};

/// Per (problem, mode): best/average/median/worst of each column, taken
/// column by column. Best means fewest loops, paths, failures and time.
inline std::vector<BenchSummary> summarize(const std::vector<BenchRow>& rows) {
    std::vector<std::pair<std::string, std::string>> groups;
    for (const auto& r : rows)
        if (std::find(groups.begin(), groups.end(), std::pair{r.problem, r.mode}) == groups.end())
            groups.emplace_back(r.problem, r.mode);

    std::vector<BenchSummary> out;
    for (const auto& [problem, mode] : groups) {
        std::vector<std::vector<double>> cols(6);
        for (const auto& r : rows) {
            if (r.problem != problem || r.mode != mode) continue;
            const auto& s = r.stats;
            const double vals[6] = {double(s.loops_taken),  double(s.paths_tracked), double(s.path_failures),
                                    double(s.points_found), double(s.classes_found), s.wall_ms()};
            for (int c = 0; c < 6; ++c) cols[c].push_back(vals[c]);
        }
        auto make = [&](const char* name, auto&& stat) {
            BenchSummary b{problem, mode, name};
            double* dst[6] = {&b.loops, &b.paths, &b.failures, &b.points, &b.classes, &b.wall_ms};
            for (int c = 0; c < 6; ++c) *dst[c] = stat(cols[c], c);
            out.push_back(b);
        };
        // Points and classes found are better when larger.
        auto larger_is_better = [](int c) { return c == 3 || c == 4; };
        make("best", [&](const std::vector<double>& v, int c) {
            return larger_is_better(c) ? *std::max_element(v.begin(), v.end()) : *std::min_element(v.begin(), v.end());
        });
        make("average", [](const std::vector<double>& v, int) {
            return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        });
        make("median", [](const std::vector<double>& v, int) { return detail::median_of(v); });
        make("worst", [&](const std::vector<double>& v, int c) {
            return larger_is_better(c) ? *std::min_element(v.begin(), v.end()) : *std::max_element(v.begin(), v.end());
        });
    }
    return out;
}

inline std::string summary_csv_row(const BenchSummary& b) {
    std::ostringstream os;
    os << detail::csv_field(b.problem) << ',' << b.mode << ',' << b.statistic;
    for (double v : {b.loops, b.paths, b.failures, b.points, b.classes, b.wall_ms}) os << ',' << detail::fmt_number(v);
    return os.str();
}

/// Header, one row per run, then the summary rows with the statistic name in
/// the seed column.
inline void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
    os << stats_csv_header << '\n';
    for (const auto& r : rows) os << stats_csv_row(r) << '\n';
    for (const auto& s : summarize(rows)) os << summary_csv_row(s) << '\n';
}

}  // namespace monodromy
