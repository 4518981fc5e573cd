// monodromy: solve parameterized polynomial systems by monodromy loops.
//
//   monodromy list
//   monodromy solve --problem cyclic5 --mode decomposable --rng-seed 7
//   monodromy bench --problem cyclic --n 5 --mode both --repeat 10 --stats-csv out.csv

#include "monodromy/all.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>

namespace {

using namespace monodromy;

constexpr int exit_config = 2;
constexpr int exit_io = 3;

struct Options {
    std::string problem;
    std::optional<int> n;
    std::optional<int> k;
    std::string input;
    std::string mode = "standard";
    std::optional<std::uint64_t> rng_seed;
    std::optional<std::size_t> max_loops;
    std::optional<std::size_t> stabilization;
    std::optional<std::size_t> target_count;
    bool target_known = false;
    bool grow_a = false;
    std::optional<double> tol;
    std::optional<double> tracker_tol;
    std::string out;
    std::string stats_csv;
    std::string export_problem;
    unsigned threads = 0;
    std::size_t repeat = 10;
};

std::uint64_t base_seed(const Options& o) {
    if (o.rng_seed) return *o.rng_seed;
    if (const char* env = std::getenv("MONODROMY_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string_view(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("MONODROMY_SEED is not an unsigned integer");
    }
    return 0;
}

// Accepts "cyclic", "cyclic5" and "cyclic(5)"; a size in the name wins over --n/--k.
ProblemInstance load_problem(const Options& o, std::uint64_t seed) {
    if (!o.input.empty() && !o.problem.empty()) throw std::invalid_argument("give either --problem or --input, not both");
    if (!o.input.empty()) return parse_problem_file(o.input, seed);
    if (o.problem.empty()) throw std::invalid_argument("one of --problem or --input is required");

    static const std::regex form(R"(([a-z]+)(?:\(?(\d+)\)?)?)");
    std::smatch m;
    if (!std::regex_match(o.problem, m, form)) throw std::invalid_argument("bad problem name '" + o.problem + "'");
    const std::string family = m[1];
    std::optional<int> size;
    if (m[2].matched) size = std::stoi(m[2]);
    if (family == "mixedvol") return mixed_volume_example(seed);
    if (!size) size = family == "gaussian" ? o.k : o.n;
    if (family != "power" && family != "cyclic" && family != "gaussian")
        throw std::invalid_argument("bad problem name '" + o.problem + "'");
    if (!size) throw std::invalid_argument(family + (family == "gaussian" ? " needs --k" : " needs --n"));
    return make_problem(family, *size, seed);
}

RunConfig make_config(const Options& o, const ProblemInstance& inst, Mode mode, std::uint64_t seed) {
    RunConfig cfg;
    cfg.mode = mode;
    cfg.rng_seed = seed;
    cfg.tracker.threads = o.threads;
    cfg.grow_alpha_factor = o.grow_a;
    if (o.tracker_tol) cfg.tracker.corrector_tol = *o.tracker_tol;
    if (o.tol) cfg.point_tol = *o.tol;
    if (o.max_loops || o.stabilization || o.target_count || o.target_known) {
        cfg.stop = {o.max_loops, o.target_count, o.stabilization};
        if (o.target_known) {
            const auto known = mode == Mode::standard ? inst.known_degree : inst.known_classes;
            if (!known) throw std::invalid_argument("--target-known: " + inst.name + " has no known count");
            cfg.stop.target_count = *known;
            if (!cfg.stop.max_loops) cfg.stop.max_loops = StoppingCriterion::defaults().max_loops;
        }
    }
    cfg.stop.validate();
    cfg.tracker.validate();
    return cfg;
}

std::vector<Mode> modes_of(const std::string& s, bool allow_both) {
    if (allow_both && s == "both") return {Mode::standard, Mode::decomposable};
    return {parse_mode(s)};
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

int cmd_list() {
    struct Entry {
        std::string family;
        int size;
        const char* source;
    };
    const std::vector<Entry> catalog{
        {"power", 2, "closed form x^n = 1 +- sqrt(1 - t)"},
        {"power", 5, "closed form x^n = 1 +- sqrt(1 - t)"},
        {"cyclic", 3, "generic root count"},
        {"cyclic", 5, "published benchmark count"},
        {"cyclic", 6, "published benchmark count"},
        {"cyclic", 7, "published benchmark count"},
        {"gaussian", 2, "9 classes of 2 label orderings"},
        {"gaussian", 3, "225 classes of 3! label orderings"},
        {"mixedvol", 0, "mixed volume 4, two alpha classes"},
    };
    auto count = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string("-"); };
    std::cout << "problem      vars params degree classes  notes\n";
    for (const auto& e : catalog) {
        const auto p = make_problem(e.family, e.size, 0);
        std::string label = p.name;
        label.resize(std::max<std::size_t>(label.size(), 12), ' ');
        std::cout << label << ' ' << std::setw(4) << p.system->num_variables() << ' ' << std::setw(6)
                  << p.system->num_parameters() << ' ' << std::setw(6) << count(p.known_degree) << ' ' << std::setw(7)
                  << count(p.known_classes) << "  " << e.source << '\n';
    }
    std::cout << "power(n) takes any n >= 2 (degree 2n, 2 classes); cyclic(n) takes 3 <= n <= 7.\n";
    return 0;
}

int cmd_solve(const Options& o) {
    const auto seed = base_seed(o);
    const auto inst = load_problem(o, seed);
    if (!o.export_problem.empty()) write_problem_file(o.export_problem, inst);
    const auto cfg = make_config(o, inst, parse_mode(o.mode), seed);
    const auto report = solve(inst, cfg);
    write_text(o.out, report_to_json(report).dump(2) + "\n");
    if (!o.stats_csv.empty()) {
        std::ostringstream csv;
        write_bench_csv(csv, {BenchRow{report.problem, report.mode, seed, report.stats}});
        write_text(o.stats_csv, csv.str());
    }
    return 0;
}

int cmd_bench(const Options& o) {
    if (o.repeat < 1) throw std::invalid_argument("--repeat must be at least 1");
    const auto base = base_seed(o);
    std::vector<BenchRow> rows;
    for (const auto mode : modes_of(o.mode, true)) {
        for (std::size_t i = 0; i < o.repeat; ++i) {
            const auto seed = base + i;
            const auto inst = load_problem(o, seed);
            const auto report = solve(inst, make_config(o, inst, mode, seed));
            rows.push_back({report.problem, report.mode, seed, report.stats});
        }
    }
    std::ostringstream csv;
    write_bench_csv(csv, rows);
    write_text(o.stats_csv.empty() ? o.out : o.stats_csv, csv.str());
    return 0;
}

void add_run_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--problem", o.problem, "power | cyclic | gaussian | mixedvol, optionally with size: cyclic5, cyclic(5)");
    cmd->add_option("--n", o.n, "size for power and cyclic");
    cmd->add_option("--k", o.k, "number of mixture components for gaussian");
    cmd->add_option("--input", o.input, "problem file (JSON)");
    cmd->add_option("--rng-seed", o.rng_seed, "base seed; overrides MONODROMY_SEED");
    cmd->add_option("--max-loops", o.max_loops, "stop after this many loops");
    cmd->add_option("--stabilization", o.stabilization, "stop after this many loops without new points");
    cmd->add_option("--target-count", o.target_count, "stop at this many points (standard) or classes (decomposable)");
    cmd->add_flag("--target-known", o.target_known, "use the problem's known count as the target");
    cmd->add_option("--tol", o.tol, "point equality tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tracker-tol", o.tracker_tol, "Newton corrector tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output file (default: standard output)");
    cmd->add_option("--stats-csv", o.stats_csv, "write run statistics as CSV");
    cmd->add_flag("--grow-a", o.grow_a, "decomposable: also grow the seed's alpha block");
    cmd->add_option("--threads", o.threads, "tracker worker cap (0: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical monodromy solver with decomposable projections"};
    app.require_subcommand(1);
    Options o;

    app.add_subcommand("list", "list built-in problems");
    auto* solve_cmd = app.add_subcommand("solve", "run one solve and print a JSON report");
    add_run_options(solve_cmd, o);
    solve_cmd->add_option("--mode", o.mode, "standard | decomposable");
    solve_cmd->add_option("--export-problem", o.export_problem, "also write the problem instance as JSON");
    auto* bench_cmd = app.add_subcommand("bench", "repeat runs with seeds base+i and write CSV statistics");
    add_run_options(bench_cmd, o);
    bench_cmd->add_option("--mode", o.mode, "standard | decomposable | both");
    bench_cmd->add_option("--repeat", o.repeat, "runs per mode");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (app.got_subcommand("list")) return cmd_list();
        if (*solve_cmd) return cmd_solve(o);
        return cmd_bench(o);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }
}
