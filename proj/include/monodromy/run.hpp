#pragma once

// One solver run on a problem instance, packaged as a report.

#include "monodromy/io.hpp"

#include <stdexcept>
#include <string>

namespace monodromy {

enum class Mode { standard, decomposable };

inline std::string_view to_string(Mode m) { return m == Mode::standard ? "standard" : "decomposable"; }

inline Mode parse_mode(std::string_view s) {
    if (s == "standard") return Mode::standard;
    if (s == "decomposable") return Mode::decomposable;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

struct RunConfig {
    Mode mode = Mode::standard;
    std::uint64_t rng_seed = 0;
    StoppingCriterion stop = StoppingCriterion::defaults();
    TrackerConfig tracker;
    double point_tol = default_point_tol;
    /// Decomposable mode: also start A from the seed, so A grows to the seed's block.
    bool grow_alpha_factor = false;
};

/// Standard mode loops from the seed alone. Decomposable mode starts with
/// B = {seed}, and with A = {seed} too when asked; degrees are reported for
/// decomposable runs only when A was grown.
inline SolutionReport solve(const ProblemInstance& inst, const RunConfig& cfg) {
    if (inst.seed_x.size() == 0) throw std::invalid_argument("problem '" + inst.name + "' has no seed solution");
    if (cfg.mode == Mode::decomposable && !inst.alpha)
        throw std::invalid_argument("decomposable mode needs an alpha map");

    SolutionReport r;
    r.problem = inst.name;
    r.mode = std::string(to_string(cfg.mode));
    r.rng_seed = cfg.rng_seed;
    r.system = system_to_json(*inst.system);
    r.line_base = inst.curve->line_base();
    r.line_direction = inst.curve->line_direction();
    r.base = inst.base();
    r.known_degree = inst.known_degree;
    r.known_classes = inst.known_classes;

    Rng rng(cfg.rng_seed);
    const auto opts = inst.options(cfg.point_tol);
    if (cfg.mode == Mode::standard) {
        auto res = standard_monodromy(*inst.curve, inst.base(), {inst.seed_x}, cfg.stop, cfg.tracker, rng, opts);
        r.points = std::move(res.points);
        r.stats = res.stats;
        if (inst.known_degree) r.complete = r.points.size() == *inst.known_degree;
    } else {
        std::vector<Point> a_seed;
        if (cfg.grow_alpha_factor) a_seed.push_back(inst.seed_x);
        auto res = decomposable_monodromy(*inst.curve, inst.base(), a_seed, {inst.seed_x}, *inst.alpha,
                                          cfg.stop, cfg.tracker, rng, opts);
        r.points = res.b_points;
        for (std::size_t i = 0; i < r.points.size(); ++i) r.b_factor.push_back(i);
        Rng local(7);
        PointRegistry in_b(inst.curve->num_variables(), local, cfg.point_tol);
        for (const auto& p : res.b_points) in_b.insert(p);
        for (const auto& p : res.a_points) {
            if (auto idx = in_b.find(p)) {
                r.a_factor.push_back(*idx);
            } else {
                r.a_factor.push_back(r.points.size());
                r.points.push_back(p);
            }
        }
        r.stats = res.stats;
        if (inst.known_classes) {
            r.complete = res.b_points.size() == *inst.known_classes;
            if (inst.known_degree && cfg.grow_alpha_factor)
                *r.complete = *r.complete && res.a_points.size() * res.b_points.size() == *inst.known_degree;
        }
    }

    if (inst.alpha) {
        r.classes = partition_by_alpha(r.points, *inst.alpha, cfg.point_tol);
        r.stats.classes_found = r.classes.size();
    } else {
        for (std::size_t i = 0; i < r.points.size(); ++i) r.classes.push_back({i});
        r.stats.classes_found = r.classes.size();
    }

    if (r.complete.value_or(false) && inst.alpha) {
        if (cfg.mode == Mode::standard) {
            try {
                r.degrees = decomposition_degrees(r.points, *inst.alpha, cfg.point_tol);
            } catch (const NonUniformPartition&) {
            }
        } else if (cfg.grow_alpha_factor) {
            r.degrees = DecompositionDegrees{r.a_factor.size(), r.b_factor.size()};
        }
    }
    return r;
}

}  // namespace monodromy
