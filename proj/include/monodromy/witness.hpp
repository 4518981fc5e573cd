#pragma once

// Witness sets of the projection to the t-line, alpha maps, and the alpha/beta
// factor bookkeeping used by decomposable monodromy.

#include "monodromy/algebra.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace monodromy {

inline constexpr double default_point_tol = 1e-6;

/// Componentwise comparison: |a_i - b_i| <= eps * max(1, |a_i|, |b_i|).
/// Relative for large coordinates, absolute below magnitude one.
inline bool approx_equal(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double eps) {
    if (a.size() != b.size()) throw DimensionError("compared points differ in dimension");
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
        if (!(std::abs(a[i] - b[i]) <= eps * scale)) return false;
    }
    return true;
}

/// A fixed random linear functional on coordinates. Two vectors that are
/// approx_equal always pass `may_equal`; the converse is not implied.
class GeneralCoordinate {
public:
    GeneralCoordinate() = default;

    GeneralCoordinate(std::size_t dim, Rng& rng) : coeffs_(static_cast<Eigen::Index>(dim)) {
        for (Eigen::Index i = 0; i < coeffs_.size(); ++i) coeffs_[i] = random_complex_normal(rng);
        l1_ = coeffs_.cwiseAbs().sum();
    }

    /// Deterministic functional for callers without a run RNG.
    static GeneralCoordinate fixed(std::size_t dim) {
        Rng rng(0x5eed0fa1u);
        return GeneralCoordinate(dim, rng);
    }

    std::size_t dimension() const { return static_cast<std::size_t>(coeffs_.size()); }

    Complex operator()(const Eigen::VectorXcd& v) const {
        if (v.size() != coeffs_.size()) throw DimensionError("general coordinate applied to wrong dimension");
        return coeffs_.dot(v);  // dot conjugates the left operand; still a fixed linear functional of v
    }

    bool may_equal(Complex key_a, double sup_a, Complex key_b, double sup_b, double eps) const {
        return std::abs(key_a - key_b) <= eps * l1_ * std::max({1.0, sup_a, sup_b});
    }

private:
    Eigen::VectorXcd coeffs_;
    double l1_ = 0.0;
};

/// Set of points distinct under approx_equal. Lookups compare the general
/// coordinate first and fall back to the full test only on a match.
class PointRegistry {
public:
    PointRegistry(std::size_t dim, Rng& rng, double eps = default_point_tol) : coord_(dim, rng), eps_(eps) {}
    PointRegistry(GeneralCoordinate coord, double eps) : coord_(std::move(coord)), eps_(eps) {}

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    double tolerance() const { return eps_; }
    const std::vector<Eigen::VectorXcd>& points() const { return points_; }
    const Eigen::VectorXcd& operator[](std::size_t i) const { return points_[i]; }

    std::optional<std::size_t> find(const Eigen::VectorXcd& p) const {
        const Complex key = coord_(p);
        const double sup = sup_norm(p);
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (coord_.may_equal(key, sup, keys_[i], sups_[i], eps_) && approx_equal(p, points_[i], eps_)) return i;
        return std::nullopt;
    }

    bool contains(const Eigen::VectorXcd& p) const { return find(p).has_value(); }

    /// Returns the index of p and whether it was newly added.
    std::pair<std::size_t, bool> insert(const Eigen::VectorXcd& p) {
        if (auto hit = find(p)) return {*hit, false};
        keys_.push_back(coord_(p));
        sups_.push_back(sup_norm(p));
        points_.push_back(p);
        return {points_.size() - 1, true};
    }

private:
    static double sup_norm(const Eigen::VectorXcd& p) { return p.size() == 0 ? 0.0 : p.cwiseAbs().maxCoeff(); }

    GeneralCoordinate coord_;
    double eps_;
    std::vector<Eigen::VectorXcd> points_;
    std::vector<Complex> keys_;
    std::vector<double> sups_;
};

/// Fiber of the curve over the base point q.
struct WitnessSet {
    std::shared_ptr<const CurveSystem> curve;
    Complex base;
    std::vector<Point> points;

    /// Residual check of every point and pairwise distinctness.
    void verify(double residual_tol, double eps = default_point_tol) const {
        Rng rng(1);
        PointRegistry seen(curve->num_variables(), rng, eps);
        for (const auto& p : points) {
            if (curve->evaluate(p, base).norm() >= residual_tol)
                throw std::runtime_error("witness point fails the residual check");
            if (!seen.insert(p).second) throw std::runtime_error("witness points are not distinct");
        }
    }
};

/// alpha(x, t) = (g_1(x), ..., g_l(x), t); the t coordinate is implicit.
/// An empty component list is the constant map, i.e. projection to t.
class AlphaMap {
public:
    AlphaMap() = default;

    AlphaMap(std::size_t num_variables, std::vector<Polynomial> components)
        : arity_(num_variables), components_(std::move(components)) {
        for (const auto& g : components_)
            if (g.arity() != arity_)
                throw DimensionError("alpha components must be polynomials in the solution variables only");
        compiled_.reserve(components_.size());
        for (const auto& g : components_) compiled_.emplace_back(g);
        max_exp_.assign(arity_, 0);
        for (const auto& g : components_)
            for (std::size_t v = 0; v < arity_; ++v) max_exp_[v] = std::max(max_exp_[v], g.degree_in(v));
        offsets_.resize(arity_);
        std::size_t off = 0;
        for (std::size_t v = 0; v < arity_; ++v) {
            offsets_[v] = off;
            off += static_cast<std::size_t>(max_exp_[v]) + 1;
        }
        table_size_ = off;
    }

    std::size_t arity() const { return arity_; }
    std::size_t dimension() const { return components_.size(); }
    const std::vector<Polynomial>& components() const { return components_; }

    Eigen::VectorXcd image(const Point& p) const {
        if (static_cast<std::size_t>(p.size()) != arity_) throw DimensionError("alpha applied to point of wrong dimension");
        std::vector<Complex> powers(table_size_);
        for (std::size_t v = 0; v < arity_; ++v) {
            Complex* row = powers.data() + offsets_[v];
            row[0] = 1.0;
            for (int k = 1; k <= max_exp_[v]; ++k) row[k] = row[k - 1] * p[static_cast<Eigen::Index>(v)];
        }
        Eigen::VectorXcd out(static_cast<Eigen::Index>(components_.size()));
        for (std::size_t i = 0; i < compiled_.size(); ++i)
            out[static_cast<Eigen::Index>(i)] = compiled_[i].evaluate(powers, offsets_);
        return out;
    }

    /// this after `inner`: components of this map read the coordinates of inner's image.
    AlphaMap after(const AlphaMap& inner) const {
        if (arity_ != inner.dimension()) throw DimensionError("alpha chain does not compose");
        if (inner.components_.empty()) throw std::invalid_argument("nothing can follow the projection to t in an alpha chain");
        const auto& names = inner.components_.front().names();
        std::vector<Polynomial> composed;
        composed.reserve(components_.size());
        for (const auto& g : components_) composed.push_back(compose(g, inner.components_, names));
        return AlphaMap(inner.arity_, std::move(composed));
    }

private:
    std::size_t arity_ = 0;
    std::vector<Polynomial> components_;
    std::vector<detail::CompiledPolynomial> compiled_;
    std::vector<int> max_exp_;
    std::vector<std::size_t> offsets_;
    std::size_t table_size_ = 0;
};

inline Eigen::VectorXcd alpha_image(const AlphaMap& alpha, const Point& p) { return alpha.image(p); }

inline bool alpha_equivalent(const AlphaMap& alpha, const Point& p, const Point& q, double eps = default_point_tol) {
    const auto a = alpha.image(p);
    const auto b = alpha.image(q);
    if (alpha.dimension() == 0) return true;
    static thread_local std::optional<GeneralCoordinate> coord;
    if (!coord || coord->dimension() != alpha.dimension()) coord = GeneralCoordinate::fixed(alpha.dimension());
    const double sa = a.cwiseAbs().maxCoeff();
    const double sb = b.cwiseAbs().maxCoeff();
    if (!coord->may_equal((*coord)(a), sa, (*coord)(b), sb, eps)) return false;
    return approx_equal(a, b, eps);
}

/// Points sharing one alpha image (a block of the monodromy action).
class AlphaFactor {
public:
    AlphaFactor(std::size_t dim, Rng& rng, double eps = default_point_tol) : registry_(dim, rng, eps) {}

    std::size_t size() const { return registry_.size(); }
    bool empty() const { return registry_.empty(); }
    bool contains(const Point& p) const { return registry_.contains(p); }
    const std::vector<Point>& points() const { return registry_.points(); }
    /// The fixed representative a: the first point ever added.
    const Point& representative() const { return registry_[0]; }
    bool add(const Point& p) { return registry_.insert(p).second; }

private:
    PointRegistry registry_;
};

/// Points with pairwise distinct alpha images, one per block.
class BetaFactor {
public:
    BetaFactor(const AlphaMap& alpha, Rng& rng, double eps = default_point_tol)
        : images_(alpha.dimension(), rng, eps) {}

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<Point>& points() const { return points_; }
    bool has_image(const Eigen::VectorXcd& image) const { return images_.contains(image); }

    /// Adds p unless its alpha image is already represented.
    bool add(const Point& p, const Eigen::VectorXcd& image) {
        if (!images_.insert(image).second) return false;
        points_.push_back(p);
        return true;
    }

private:
    PointRegistry images_;
    std::vector<Point> points_;
};

struct EndpointAction {
    bool append_to_a = false;
    bool append_to_b = false;

    bool discard() const { return !append_to_a && !append_to_b; }
};

/// The two conditionals of the decomposable monodromy inner loop:
/// e joins A if it is new to A and shares the representative's alpha image;
/// e joins B if its alpha image is not yet in alpha(B).
inline EndpointAction classify_endpoint(const Point& e, const AlphaFactor& a_factor, const BetaFactor& b_factor,
                                        const std::optional<Point>& a_rep, const AlphaMap& alpha,
                                        double eps = default_point_tol) {
    if (a_rep.has_value() == a_factor.empty())
        throw std::invalid_argument("representative must be present exactly when A is nonempty");
    EndpointAction action;
    const auto image = alpha.image(e);
    if (!a_factor.empty() && !a_factor.contains(e) && approx_equal(image, alpha.image(*a_rep), eps))
        action.append_to_a = true;
    if (!b_factor.empty() && !b_factor.has_image(image)) action.append_to_b = true;
    return action;
}

using Block = std::vector<std::size_t>;

/// Groups point indices by alpha image, blocks in order of first appearance.
inline std::vector<Block> partition_by_alpha(const std::vector<Point>& points, const AlphaMap& alpha,
                                             double eps = default_point_tol) {
    std::vector<Block> blocks;
    if (points.empty()) return blocks;
    Rng rng(7);
    PointRegistry images(alpha.dimension(), rng, eps);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [idx, fresh] = images.insert(alpha.image(points[i]));
        if (fresh) blocks.emplace_back();
        blocks[idx].push_back(i);
    }
    return blocks;
}

inline std::vector<Block> partition_by_alpha(const WitnessSet& w, const AlphaMap& alpha, double eps = default_point_tol) {
    return partition_by_alpha(w.points, alpha, eps);
}

class NonUniformPartition : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DecompositionDegrees {
    std::size_t a = 0;  // deg alpha: common block size
    std::size_t b = 0;  // deg beta: number of blocks

    friend bool operator==(const DecompositionDegrees&, const DecompositionDegrees&) = default;
};

/// Observed (deg alpha, deg beta) on a complete witness set.
inline DecompositionDegrees decomposition_degrees(const std::vector<Point>& points, const AlphaMap& alpha,
                                                  double eps = default_point_tol) {
    const auto blocks = partition_by_alpha(points, alpha, eps);
    if (blocks.empty()) throw std::invalid_argument("decomposition degrees need a nonempty witness set");
    const auto size = blocks.front().size();
    for (const auto& b : blocks)
        if (b.size() != size)
            throw NonUniformPartition("non-uniform partition: alpha classes have unequal sizes (" +
                                      std::to_string(size) + " vs " + std::to_string(b.size()) + ")");
    return {size, blocks.size()};
}

inline DecompositionDegrees decomposition_degrees(const WitnessSet& w, const AlphaMap& alpha,
                                                  double eps = default_point_tol) {
    return decomposition_degrees(w.points, alpha, eps);
}

struct FactorTower {
    /// levels[i] partitions the points by the i-th composite map.
    std::vector<std::vector<Block>> levels;
    /// One degree per map in the chain plus the final projection to t.
    std::vector<std::size_t> degrees;
};

/// Refinement tower for pi = alpha_1 o alpha_2 o ... o alpha_l o (projection to t).
/// Chain element i reads the coordinates of element i-1's image.
inline FactorTower multi_factor_classify(const std::vector<Point>& points, const std::vector<AlphaMap>& chain,
                                         double eps = default_point_tol) {
    if (chain.empty()) throw std::invalid_argument("alpha chain must be nonempty");
    if (points.empty()) throw std::invalid_argument("multi-factor classification needs a nonempty witness set");
    FactorTower tower;
    std::size_t previous_classes = points.size();
    std::vector<std::size_t> previous_owner(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) previous_owner[i] = i;

    AlphaMap composite = chain.front();
    for (std::size_t level = 0; level < chain.size(); ++level) {
        if (level > 0) composite = chain[level].after(composite);
        auto blocks = partition_by_alpha(points, composite, eps);

        std::vector<std::size_t> owner(points.size());
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (auto idx : blocks[b]) owner[idx] = b;
        // Each block must be a union of equally many blocks of the previous level.
        std::vector<std::vector<std::size_t>> children(blocks.size());
        for (std::size_t idx = 0; idx < points.size(); ++idx) {
            auto& c = children[owner[idx]];
            if (std::find(c.begin(), c.end(), previous_owner[idx]) == c.end()) c.push_back(previous_owner[idx]);
        }
        std::size_t child_total = 0;
        for (const auto& c : children) child_total += c.size();
        if (child_total != previous_classes)
            throw NonUniformPartition("alpha chain level " + std::to_string(level + 1) + " does not coarsen the previous level");
        const auto ratio = children.front().size();
        for (const auto& c : children)
            if (c.size() != ratio)
                throw NonUniformPartition("non-uniform partition at alpha chain level " + std::to_string(level + 1));

        tower.degrees.push_back(ratio);
        tower.levels.push_back(std::move(blocks));
        previous_classes = tower.levels.back().size();
        previous_owner = std::move(owner);
    }
    tower.degrees.push_back(previous_classes);
    return tower;
}

}  // namespace monodromy
