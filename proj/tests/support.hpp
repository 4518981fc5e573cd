#pragma once

#include "monodromy/all.hpp"

#include <catch2/catch.hpp>

#include <algorithm>
#include <vector>

namespace testing {

using namespace monodromy;

inline double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double rel_err(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

inline Point random_point(std::size_t n, Rng& rng) {
    Point p(static_cast<Eigen::Index>(n));
    for (auto& z : p) z = random_complex_normal(rng);
    return p;
}

// Central differences in the complex direction; exact for holomorphic maps up to O(h^2).
inline Matrix fd_jacobian(const CurveSystem& c, const Point& x, Complex t, double h = 1e-6) {
    const auto n = static_cast<Eigen::Index>(c.num_variables());
    Matrix j(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Point xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        j.col(k) = (c.evaluate(xp, t) - c.evaluate(xm, t)) / (2.0 * h);
    }
    return j;
}

inline Eigen::VectorXcd fd_dt(const CurveSystem& c, const Point& x, Complex t, double h = 1e-6) {
    return (c.evaluate(x, t + h) - c.evaluate(x, t - h)) / (2.0 * h);
}

inline Point scalar_point(Complex z) { return Point::Constant(1, z); }

// Set equality under point tolerance, by greedy one-to-one matching.
inline bool same_point_set(const std::vector<Point>& a, const std::vector<Point>& b, double eps = 1e-6) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& p : a) {
        bool hit = false;
        for (std::size_t i = 0; i < b.size() && !hit; ++i)
            if (!used[i] && approx_equal(p, b[i], eps)) used[i] = hit = true;
        if (!hit) return false;
    }
    return true;
}

inline std::vector<Point> power_fiber(int n, Complex t) {
    std::vector<Point> out;
    for (auto r : power_curve_roots(n, t)) out.push_back(scalar_point(r));
    return out;
}

// Full fiber of a built-in problem by standard monodromy with the known degree as target.
inline std::vector<Point> full_fiber(const ProblemInstance& p, std::uint64_t seed = 1) {
    Rng rng(seed);
    StoppingCriterion stop{400, p.known_degree, std::nullopt};
    auto opts = p.options();
    auto res = standard_monodromy(*p.curve, p.base(), {p.seed_x}, stop, TrackerConfig{}, rng, opts);
    // Some instances keep their branch points far from the base; widen the loops.
    for (int widen = 0; widen < 2 && p.known_degree && res.points.size() < *p.known_degree; ++widen) {
        opts.loop_radius = 4.0 * (opts.loop_radius > 0.0 ? opts.loop_radius : default_loop_radius(p.base()));
        res = standard_monodromy(*p.curve, p.base(), res.points, stop, TrackerConfig{}, rng, opts);
    }
    return res.points;
}

}  // namespace testing
