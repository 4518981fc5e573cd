#pragma once

// Monodromy loops in the t-line and the two collection algorithms: standard
// monodromy over the whole fiber, and decomposable monodromy that keeps one
// representative per alpha class.

#include "monodromy/tracking.hpp"
#include "monodromy/witness.hpp"

#include <chrono>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace monodromy {

/// Closed piecewise-linear path w_0 -> w_1 -> ... -> w_r = w_0 in the t-line.
struct LoopSpec {
    std::vector<Complex> waypoints;

    Complex base() const { return waypoints.front(); }

    void validate() const {
        if (waypoints.size() < 2) throw std::invalid_argument("loop needs at least two waypoints");
        if (waypoints.front() != waypoints.back()) throw std::invalid_argument("loop must be closed");
        for (std::size_t i = 1; i < waypoints.size(); ++i)
            if (waypoints[i] == waypoints[i - 1]) throw std::invalid_argument("consecutive loop waypoints must differ");
    }
};

inline double default_loop_radius(Complex q) { return std::max(3.0, 2.0 * std::abs(q)); }

/// Triangle q -> w1 -> w2 -> q with w1, w2 uniform in the disk of the given
/// radius about q, redrawn when within 1e-3 * radius of q or of each other.
inline LoopSpec random_loop(Complex q, Rng& rng, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("loop radius must be positive");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double min_gap = 1e-3 * radius;
    auto draw = [&] {
        for (;;) {
            const double r = radius * std::sqrt(unit(rng));
            const double theta = 2.0 * std::numbers::pi * unit(rng);
            const Complex w = q + std::polar(r, theta);
            if (std::abs(w - q) >= min_gap) return w;
        }
    };
    const Complex w1 = draw();
    Complex w2 = draw();
    while (std::abs(w2 - w1) < min_gap) w2 = draw();
    return LoopSpec{{q, w1, w2, q}};
}

/// Any satisfied bound stops the run.
struct StoppingCriterion {
    std::optional<std::size_t> max_loops;
    std::optional<std::size_t> target_count;
    std::optional<std::size_t> stabilization;

    static StoppingCriterion defaults() { return {200, std::nullopt, 10}; }

    void validate() const {
        if (!max_loops && !target_count && !stabilization)
            throw std::invalid_argument("stopping criterion needs at least one finite bound");
    }

    bool fires(std::size_t loops, std::size_t count, std::size_t unproductive) const {
        if (max_loops && loops >= *max_loops) return true;
        if (target_count && count >= *target_count) return true;
        if (stabilization && unproductive >= *stabilization) return true;
        return false;
    }
};

/// sigma_gamma restricted to the tracked start points: image[i] is the index
/// of the start point that path i ended on, if any.
struct Permutation {
    std::vector<std::optional<std::size_t>> image;

    static Permutation identity(std::size_t n) {
        Permutation p;
        for (std::size_t i = 0; i < n; ++i) p.image.emplace_back(i);
        return p;
    }

    bool is_total() const {
        return std::all_of(image.begin(), image.end(), [](const auto& v) { return v.has_value(); });
    }

    bool is_bijection() const {
        if (!is_total()) return false;
        std::vector<bool> hit(image.size(), false);
        for (const auto& v : image) {
            if (*v >= image.size() || hit[*v]) return false;
            hit[*v] = true;
        }
        return true;
    }

    bool is_identity() const {
        for (std::size_t i = 0; i < image.size(); ++i)
            if (image[i] != i) return false;
        return true;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;
};

struct RunStats {
    std::size_t loops_taken = 0;
    std::size_t paths_tracked = 0;
    std::size_t path_failures = 0;
    std::size_t points_found = 0;
    std::size_t classes_found = 0;
    std::chrono::nanoseconds wall_time{0};

    double wall_ms() const { return std::chrono::duration<double, std::milli>(wall_time).count(); }
};

struct LoopResult {
    std::vector<std::optional<Point>> endpoints;
    Permutation permutation;
    std::size_t failures = 0;
};

struct MonodromyOptions {
    double point_tol = default_point_tol;
    /// Loop radius about the base; zero selects max(1, |q|).
    double loop_radius = 0.0;
    /// Each loop's radius is drawn log-uniformly from [r, spread * r].
    double radius_spread = 1.0;
    /// Endpoints rejected here never enter a registry.
    std::function<bool(const Point&)> admit;
};

/// Tracks each start point through every segment of the loop. Failed paths
/// are left empty and counted.
inline LoopResult monodromy_loop(const CurveSystem& curve, const std::vector<Point>& points, const LoopSpec& loop,
                                 const TrackerConfig& cfg, double point_tol = default_point_tol) {
    loop.validate();
    LoopResult out;
    out.endpoints.resize(points.size());
    detail::parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
        Point x = points[i];
        for (std::size_t seg = 0; seg + 1 < loop.waypoints.size(); ++seg) {
            auto r = track_segment(curve, x, loop.waypoints[seg], loop.waypoints[seg + 1], cfg);
            if (!r.ok()) return;
            x = std::move(r.endpoint);
        }
        out.endpoints[i] = std::move(x);
    });

    Rng rng(11);
    PointRegistry starts(curve.num_variables(), rng, point_tol);
    for (const auto& p : points) starts.insert(p);
    out.permutation.image.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!out.endpoints[i]) {
            ++out.failures;
            continue;
        }
        out.permutation.image[i] = starts.find(*out.endpoints[i]);
    }
    return out;
}

namespace detail {

inline bool verified(const CurveSystem& curve, const Point& p, Complex q, const TrackerConfig& cfg) {
    return is_finite(p) && curve.evaluate(p, q).norm() < cfg.corrector_tol;
}

inline bool admitted(const MonodromyOptions& opts, const Point& p) { return !opts.admit || opts.admit(p); }

inline double radius_for(const MonodromyOptions& opts, Complex q) {
    return opts.loop_radius > 0.0 ? opts.loop_radius : default_loop_radius(q);
}

inline LoopSpec next_loop(const MonodromyOptions& opts, Complex q, Rng& rng) {
    if (!(opts.radius_spread >= 1.0)) throw std::invalid_argument("radius spread must be at least 1");
    double radius = radius_for(opts, q);
    if (opts.radius_spread > 1.0)
        radius *= std::exp(std::uniform_real_distribution<double>(0.0, std::log(opts.radius_spread))(rng));
    return random_loop(q, rng, radius);
}

}  // namespace detail

struct StandardResult {
    std::vector<Point> points;
    RunStats stats;
};

/// Loops the whole partial witness set and appends every endpoint not yet
/// present, until the stopping criterion fires. Target counts apply to |S|.
inline StandardResult standard_monodromy(const CurveSystem& curve, Complex base, const std::vector<Point>& seeds,
                                         const StoppingCriterion& stop, const TrackerConfig& cfg, Rng& rng,
                                         const MonodromyOptions& opts = {}) {
    if (seeds.empty()) throw std::invalid_argument("standard monodromy needs a nonempty start set");
    stop.validate();
    cfg.validate();
    const auto started = std::chrono::steady_clock::now();

    PointRegistry s(curve.num_variables(), rng, opts.point_tol);
    for (const auto& p : seeds) {
        if (!detail::verified(curve, p, base, cfg)) throw std::invalid_argument("start point is not a verified fiber point");
        s.insert(p);
    }

    RunStats stats;
    std::size_t unproductive = 0;
    while (!stop.fires(stats.loops_taken, s.size(), unproductive)) {
        const auto loop = detail::next_loop(opts, base, rng);
        const std::vector<Point> starts = s.points();
        auto result = monodromy_loop(curve, starts, loop, cfg, opts.point_tol);
        ++stats.loops_taken;
        stats.paths_tracked += starts.size();
        stats.path_failures += result.failures;

        bool grew = false;
        for (const auto& e : result.endpoints) {
            if (!e || !detail::verified(curve, *e, base, cfg) || !detail::admitted(opts, *e)) continue;
            grew |= s.insert(*e).second;
        }
        unproductive = grew ? 0 : unproductive + 1;
    }

    stats.points_found = s.size();
    stats.wall_time = std::chrono::steady_clock::now() - started;
    return {s.points(), stats};
}

struct DecomposableResult {
    std::vector<Point> a_points;
    std::vector<Point> b_points;
    RunStats stats;
};

/// Tracks only (A \ B) u B each loop; endpoints extend A when they share the
/// fixed representative's alpha image and extend B when their alpha image is
/// new. Target counts apply to |B|.
inline DecomposableResult decomposable_monodromy(const CurveSystem& curve, Complex base,
                                                 const std::vector<Point>& a_seed, const std::vector<Point>& b_seed,
                                                 const AlphaMap& alpha, const StoppingCriterion& stop,
                                                 const TrackerConfig& cfg, Rng& rng,
                                                 const MonodromyOptions& opts = {}) {
    if (a_seed.empty() && b_seed.empty()) throw std::invalid_argument("decomposable monodromy needs A or B nonempty");
    if (alpha.arity() != curve.num_variables()) throw DimensionError("alpha does not match the curve's variables");
    stop.validate();
    cfg.validate();
    const auto started = std::chrono::steady_clock::now();

    AlphaFactor a_factor(curve.num_variables(), rng, opts.point_tol);
    BetaFactor b_factor(alpha, rng, opts.point_tol);
    for (const auto& p : a_seed) {
        if (!detail::verified(curve, p, base, cfg)) throw std::invalid_argument("A seed is not a verified fiber point");
        if (!a_factor.empty() && !alpha_equivalent(alpha, p, a_factor.representative(), opts.point_tol))
            throw std::invalid_argument("A seed points must share one alpha image");
        a_factor.add(p);
    }
    for (const auto& p : b_seed) {
        if (!detail::verified(curve, p, base, cfg)) throw std::invalid_argument("B seed is not a verified fiber point");
        if (!b_factor.add(p, alpha.image(p))) throw std::invalid_argument("B seed points must have distinct alpha images");
    }
    const std::optional<Point> a_rep =
        a_factor.empty() ? std::nullopt : std::optional<Point>(a_factor.representative());

    auto start_set = [&] {
        std::vector<Point> s;
        Rng local(3);
        PointRegistry in_b(curve.num_variables(), local, opts.point_tol);
        for (const auto& p : b_factor.points()) in_b.insert(p);
        for (const auto& p : a_factor.points())
            if (!in_b.contains(p)) s.push_back(p);
        s.insert(s.end(), b_factor.points().begin(), b_factor.points().end());
        return s;
    };

    RunStats stats;
    std::size_t unproductive = 0;
    while (!stop.fires(stats.loops_taken, b_factor.size(), unproductive)) {
        const auto starts = start_set();
        const auto loop = detail::next_loop(opts, base, rng);
        auto result = monodromy_loop(curve, starts, loop, cfg, opts.point_tol);
        ++stats.loops_taken;
        stats.paths_tracked += starts.size();
        stats.path_failures += result.failures;

        bool grew = false;
        for (const auto& e : result.endpoints) {
            if (!e || !detail::verified(curve, *e, base, cfg) || !detail::admitted(opts, *e)) continue;
            const auto action = classify_endpoint(*e, a_factor, b_factor, a_rep, alpha, opts.point_tol);
            if (action.append_to_a) grew |= a_factor.add(*e);
            if (action.append_to_b) grew |= b_factor.add(*e, alpha.image(*e));
        }
        unproductive = grew ? 0 : unproductive + 1;
    }

    Rng local(5);
    PointRegistry all(curve.num_variables(), local, opts.point_tol);
    for (const auto& p : a_factor.points()) all.insert(p);
    for (const auto& p : b_factor.points()) all.insert(p);
    stats.points_found = all.size();
    stats.classes_found = b_factor.size();
    stats.wall_time = std::chrono::steady_clock::now() - started;
    return {a_factor.points(), b_factor.points(), stats};
}

/// One permutation of the complete fiber per loop whose paths all succeed.
inline std::vector<Permutation> collect_generators(const WitnessSet& w, std::size_t loops, const TrackerConfig& cfg,
                                                   Rng& rng, const MonodromyOptions& opts = {}) {
    std::vector<Permutation> gens;
    for (std::size_t i = 0; i < loops; ++i) {
        const auto loop = detail::next_loop(opts, w.base, rng);
        auto result = monodromy_loop(*w.curve, w.points, loop, cfg, opts.point_tol);
        if (result.failures == 0) gens.push_back(std::move(result.permutation));
    }
    return gens;
}

/// Orbit count of the group generated by the permutations (transitive iff 1).
inline std::size_t orbit_count(std::size_t n, const std::vector<Permutation>& gens) {
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = root(parent[i]);
    };
    for (const auto& g : gens)
        for (std::size_t i = 0; i < g.image.size() && i < n; ++i)
            if (g.image[i] && *g.image[i] < n) parent[root(i)] = root(*g.image[i]);
    std::size_t orbits = 0;
    for (std::size_t i = 0; i < n; ++i) orbits += root(i) == i;
    return orbits;
}

}  // namespace monodromy
