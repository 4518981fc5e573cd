#pragma once

// Predictor-corrector path tracking along straight segments of the t-line.

#include "monodromy/algebra.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <vector>

namespace monodromy {

struct TrackerConfig {
    double initial_step = 0.05;
    double min_step = 1e-7;
    double max_step = 0.1;
    double corrector_tol = 1e-9;
    int newton_max_iters = 3;
    double step_shrink = 0.5;
    double step_grow = 2.0;
    int grow_after = 5;
    long max_steps = 100000;
    /// Coordinates above this magnitude are treated as having left the affine chart.
    double divergence_threshold = 1e10;
    /// Worker cap for batch tracking; 0 means hardware concurrency.
    unsigned threads = 0;

    void validate() const {
        if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step && max_step <= 1.0))
            throw std::invalid_argument("tracker steps must satisfy 0 < min_step <= initial_step <= max_step <= 1");
        if (!(corrector_tol > 0.0)) throw std::invalid_argument("corrector tolerance must be positive");
        if (newton_max_iters < 1) throw std::invalid_argument("newton_max_iters must be at least 1");
        if (!(step_shrink > 0.0 && step_shrink < 1.0)) throw std::invalid_argument("step_shrink must lie in (0,1)");
        if (!(step_grow > 1.0)) throw std::invalid_argument("step_grow must exceed 1");
        if (grow_after < 1 || max_steps < 1) throw std::invalid_argument("step counters must be positive");
    }
};

enum class PathOutcome { success, min_step_underflow, max_steps, corrector_divergence, nonfinite_value };

inline std::string_view to_string(PathOutcome o) {
    switch (o) {
        case PathOutcome::success: return "success";
        case PathOutcome::min_step_underflow: return "min-step-underflow";
        case PathOutcome::max_steps: return "max-steps";
        case PathOutcome::corrector_divergence: return "corrector-divergence";
        case PathOutcome::nonfinite_value: return "nonfinite-value";
    }
    return "unknown";
}

struct PathResult {
    PathOutcome outcome = PathOutcome::corrector_divergence;
    Point endpoint;  // meaningful only on success
    long steps_taken = 0;

    bool ok() const { return outcome == PathOutcome::success; }
};

enum class NewtonStatus { converged, singular_jacobian, not_converged, nonfinite };

struct NewtonResult {
    NewtonStatus status = NewtonStatus::not_converged;
    Point x;
    int iterations = 0;
    double residual = 0.0;

    bool ok() const { return status == NewtonStatus::converged; }
};

namespace detail {

// Reciprocal condition below this is treated as a singular Jacobian.
inline constexpr double singular_rcond = 1e-14;

inline double scale_of(const Point& x) { return std::max(1.0, x.cwiseAbs().maxCoeff()); }

inline NewtonResult newton(const CurveSystem& curve, CurveSystem::Workspace& ws, Point x, Complex t, double tol,
                           int max_iters) {
    NewtonResult r;
    Eigen::VectorXcd f;
    Matrix jac;
    double last_correction = -1.0;
    for (int k = 0;; ++k) {
        curve.evaluate_all(ws, x, t, &f, &jac, nullptr);
        r.residual = f.norm();
        if (!std::isfinite(r.residual) || !is_finite(x)) {
            r.status = NewtonStatus::nonfinite;
            break;
        }
        if (k > 0 && last_correction <= tol * scale_of(x) && r.residual < tol) {
            r.status = NewtonStatus::converged;
            break;
        }
        if (k == max_iters) {
            r.status = NewtonStatus::not_converged;
            break;
        }
        Eigen::PartialPivLU<Matrix> lu(jac);
        if (!(lu.rcond() > singular_rcond)) {
            r.status = NewtonStatus::singular_jacobian;
            break;
        }
        const Eigen::VectorXcd dx = lu.solve(-f);
        const double correction = dx.norm();
        // A corrector that stops contracting is heading somewhere else.
        if (last_correction >= 0.0 && correction > 0.5 * last_correction && correction > tol * scale_of(x)) {
            x += dx;
            r.iterations = k + 1;
            r.status = NewtonStatus::not_converged;
            break;
        }
        x += dx;
        last_correction = correction;
        r.iterations = k + 1;
    }
    r.x = std::move(x);
    return r;
}

// dx/ds for the Davidenko system with t(s) = t_a + s (t_b - t_a).
inline bool davidenko(const CurveSystem& curve, CurveSystem::Workspace& ws, const Point& x, Complex t, Complex dt,
                      Eigen::VectorXcd& out) {
    Matrix jac;
    Eigen::VectorXcd ft;
    curve.evaluate_all(ws, x, t, nullptr, &jac, &ft);
    Eigen::PartialPivLU<Matrix> lu(jac);
    if (!(lu.rcond() > singular_rcond)) return false;
    out = lu.solve(-ft * dt);
    return is_finite(out);
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
}

}  // namespace detail

/// Newton's method on F(., t) from x. Converged means the last correction is
/// below tol (relative to max(1, |x|)) and the residual norm is below tol.
inline NewtonResult newton_refine(const CurveSystem& curve, const Point& x, Complex t, double tol, int max_iters) {
    if (static_cast<std::size_t>(x.size()) != curve.num_variables()) throw DimensionError("point has wrong dimension");
    CurveSystem::Workspace ws;
    return detail::newton(curve, ws, x, t, tol, max_iters);
}

/// Tracks a fiber point from t_a to t_b along the straight segment between
/// them. RK4 on the Davidenko equation predicts, Newton corrects, and the
/// step in the segment parameter adapts to corrector success.
inline PathResult track_segment(const CurveSystem& curve, const Point& x_start, Complex t_a, Complex t_b,
                                const TrackerConfig& cfg) {
    if (static_cast<std::size_t>(x_start.size()) != curve.num_variables())
        throw DimensionError("start point has wrong dimension");
    CurveSystem::Workspace ws;
    PathResult result;

    auto start = detail::newton(curve, ws, x_start, t_a, cfg.corrector_tol, cfg.newton_max_iters);
    if (!start.ok()) {
        result.outcome = start.status == NewtonStatus::nonfinite ? PathOutcome::nonfinite_value
                                                                  : PathOutcome::corrector_divergence;
        return result;
    }
    Point x = std::move(start.x);
    if (t_a == t_b) {
        result.outcome = PathOutcome::success;
        result.endpoint = std::move(x);
        return result;
    }

    const Complex dt = t_b - t_a;
    double s = 0.0;
    double h = cfg.initial_step;
    int successes = 0;
    long attempts = 0;
    Eigen::VectorXcd k1, k2, k3, k4;

    while (s < 1.0) {
        if (attempts++ >= cfg.max_steps) {
            result.outcome = PathOutcome::max_steps;
            return result;
        }
        const bool last = h >= 1.0 - s;
        const double step = last ? 1.0 - s : h;
        const Complex t0 = t_a + s * dt;
        const Complex t_half = t_a + (s + 0.5 * step) * dt;
        const Complex t1 = last ? t_b : t_a + (s + step) * dt;

        bool predicted = detail::davidenko(curve, ws, x, t0, dt, k1) &&
                         detail::davidenko(curve, ws, x + 0.5 * step * k1, t_half, dt, k2) &&
                         detail::davidenko(curve, ws, x + 0.5 * step * k2, t_half, dt, k3) &&
                         detail::davidenko(curve, ws, x + step * k3, t1, dt, k4);
        bool accepted = false;
        if (predicted) {
            const Point guess = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            auto corrected = detail::newton(curve, ws, guess, t1, cfg.corrector_tol, cfg.newton_max_iters);
            if (corrected.ok()) {
                if (corrected.x.cwiseAbs().maxCoeff() > cfg.divergence_threshold) {
                    result.outcome = PathOutcome::nonfinite_value;
                    return result;
                }
                x = std::move(corrected.x);
                accepted = true;
            }
        }

        if (accepted) {
            s = last ? 1.0 : s + step;
            ++result.steps_taken;
            if (++successes >= cfg.grow_after) {
                h = std::min(h * cfg.step_grow, cfg.max_step);
                successes = 0;
            }
        } else {
            successes = 0;
            h *= cfg.step_shrink;
            if (h < cfg.min_step) {
                result.outcome = PathOutcome::min_step_underflow;
                return result;
            }
        }
    }

    result.outcome = PathOutcome::success;
    result.endpoint = std::move(x);
    return result;
}

/// Independent paths, results in input order. May run in parallel.
inline std::vector<PathResult> track_batch(const CurveSystem& curve, const std::vector<Point>& points, Complex t_a,
                                           Complex t_b, const TrackerConfig& cfg) {
    std::vector<PathResult> results(points.size());
    detail::parallel_for(points.size(), cfg.threads,
                         [&](std::size_t i) { results[i] = track_segment(curve, points[i], t_a, t_b, cfg); });
    return results;
}

}  // namespace monodromy
