#pragma once

// Built-in parameterized families with seed solutions and symmetry-adapted
// alpha maps, plus the invariant-theory helpers used to build those maps.

#include "monodromy/solver.hpp"
#include "monodromy/witness.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace monodromy {

struct ProblemInstance {
    std::string name;
    std::shared_ptr<const ParameterizedSystem> system;
    std::shared_ptr<const CurveSystem> curve;
    Point seed_x;
    Complex seed_t;
    std::optional<AlphaMap> alpha;
    std::optional<std::size_t> known_degree;
    std::optional<std::size_t> known_classes;
    /// Zero selects the default radius about the base.
    double loop_radius = 0.0;
    double radius_spread = 1.0;
    /// Reject endpoints on the coordinate hyperplanes (|prod x_i| < 1e-8).
    bool torus_only = false;

    Complex base() const { return seed_t; }

    bool admits(const Point& p) const {
        if (!torus_only) return true;
        Complex prod{1.0, 0.0};
        for (Eigen::Index i = 0; i < p.size(); ++i) prod *= p[i];
        return std::abs(prod) >= 1e-8;
    }

    MonodromyOptions options(double point_tol = default_point_tol) const {
        MonodromyOptions opts;
        opts.point_tol = point_tol;
        opts.loop_radius = loop_radius;
        opts.radius_spread = radius_spread;
        if (torus_only) opts.admit = [this](const Point& p) { return admits(p); };
        return opts;
    }

    double seed_residual() const { return curve->evaluate(seed_x, seed_t).norm(); }
};

namespace detail {

inline std::vector<std::string> indexed_names(const std::string& stem, std::size_t count, std::size_t first = 0) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i) names.push_back(stem + std::to_string(first + i));
    return names;
}

inline std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline Point random_point(std::size_t n, Rng& rng) {
    Point p(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = random_complex_normal(rng);
    return p;
}

}  // namespace detail

/// Roots of x^{2n} - 2x^n + t from x^n = 1 +- sqrt(1 - t).
inline std::vector<Complex> power_curve_roots(int n, Complex t) {
    if (n < 1) throw std::invalid_argument("power curve exponent must be positive");
    if (t == Complex{0.0, 0.0} || t == Complex{1.0, 0.0}) throw std::invalid_argument("t is a branch point");
    const Complex root = std::sqrt(Complex{1.0, 0.0} - t);
    std::vector<Complex> roots;
    roots.reserve(2 * static_cast<std::size_t>(n));
    for (const Complex w : {Complex{1.0, 0.0} + root, Complex{1.0, 0.0} - root}) {
        const Complex principal = std::pow(w, 1.0 / n);
        for (int k = 0; k < n; ++k) roots.push_back(principal * std::polar(1.0, 2.0 * std::numbers::pi * k / n));
    }
    return roots;
}

/// The curve x^{2n} - 2x^n + t with alpha = (x^n); seeded at t = -3.
inline ProblemInstance power_curve(int n) {
    if (n < 2) throw std::invalid_argument("power curve needs n >= 2");
    const std::vector<std::string> ring{"x", "u"};
    Polynomial eq(ring, {Monomial{1.0, {2 * n, 0}}, Monomial{-2.0, {n, 0}}, Monomial{1.0, {0, 1}}});
    auto system = std::make_shared<const ParameterizedSystem>(std::vector<std::string>{"x"}, std::vector<std::string>{"u"},
                                                              std::vector<Polynomial>{eq});
    Point base = Point::Zero(1);
    Point dir = Point::Ones(1);

    ProblemInstance inst;
    inst.name = "power(" + std::to_string(n) + ")";
    inst.system = system;
    inst.curve = restrict_to_line(system, base, dir);
    inst.seed_t = -3.0;
    inst.seed_x = Point::Constant(1, std::pow(3.0, 1.0 / n));
    inst.alpha = AlphaMap(1, {Polynomial({"x"}, {Monomial{1.0, {n}}})});
    inst.known_degree = 2 * static_cast<std::size_t>(n);
    inst.known_classes = 2;
    // Loops about t = -3 must be able to wind around both branch points 0 and 1.
    inst.loop_radius = 50.0;
    return inst;
}

/// Signed permutation of variable labels: x_i -> sign_i * x_{perm_i}.
struct GroupElement {
    std::vector<std::size_t> perm;
    std::vector<int> signs;

    static GroupElement identity(std::size_t n) {
        GroupElement g{std::vector<std::size_t>(n), std::vector<int>(n, 1)};
        for (std::size_t i = 0; i < n; ++i) g.perm[i] = i;
        return g;
    }

    std::size_t size() const { return perm.size(); }

    /// (this * other)(x_i) = this(other(x_i)).
    GroupElement operator*(const GroupElement& other) const {
        GroupElement out = identity(size());
        for (std::size_t i = 0; i < size(); ++i) {
            out.perm[i] = perm[other.perm[i]];
            out.signs[i] = other.signs[i] * signs[other.perm[i]];
        }
        return out;
    }

    /// Acts on the first size() indeterminates of p; the rest are fixed.
    Polynomial apply(const Polynomial& p) const {
        if (p.arity() < size()) throw DimensionError("group acts on more variables than the polynomial has");
        std::vector<Monomial> terms;
        terms.reserve(p.terms().size());
        for (const auto& t : p.terms()) {
            Monomial m{t.coeff, t.exponents};
            for (std::size_t i = 0; i < size(); ++i) m.exponents[perm[i]] = t.exponents[i];
            for (std::size_t i = 0; i < size(); ++i)
                if (signs[i] < 0 && (t.exponents[i] % 2) != 0) m.coeff = -m.coeff;
            terms.push_back(std::move(m));
        }
        return Polynomial(p.names(), std::move(terms));
    }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// D_n acting on labels 0..n-1: rotations i -> i+k and reflections i -> k-i (mod n).
inline std::vector<GroupElement> dihedral_group(std::size_t n) {
    if (n < 3) throw std::invalid_argument("dihedral group needs n >= 3");
    std::vector<GroupElement> group;
    for (std::size_t k = 0; k < n; ++k) {
        auto g = GroupElement::identity(n);
        for (std::size_t i = 0; i < n; ++i) g.perm[i] = (i + k) % n;
        group.push_back(std::move(g));
    }
    for (std::size_t k = 0; k < n; ++k) {
        auto g = GroupElement::identity(n);
        for (std::size_t i = 0; i < n; ++i) g.perm[i] = (k + n - i) % n;
        group.push_back(std::move(g));
    }
    return group;
}

/// Exact group average (1/|G|) sum_g g(p).
inline Polynomial reynolds_average(const std::vector<GroupElement>& group, const Polynomial& p) {
    if (group.empty()) throw std::invalid_argument("group must be nonempty");
    Polynomial sum(p.names());
    for (const auto& g : group) sum += g.apply(p);
    return sum.scaled(1.0 / static_cast<double>(group.size()));
}

/// Invariant obtained by averaging, scaled so each input monomial contributes
/// its orbit sum with the monomial's own coefficient: x0*x2 under D_5 becomes
/// x3x0 + x4x1 + x0x2 + x1x3 + x2x4.
inline Polynomial reynolds_invariant(const std::vector<GroupElement>& group, const Polynomial& p) {
    if (group.empty()) throw std::invalid_argument("group must be nonempty");
    Polynomial out(p.names());
    for (const auto& term : p.terms()) {
        const Polynomial m(p.names(), {term});
        Polynomial sum(p.names());
        std::size_t stabilizer = 0;
        for (const auto& g : group) {
            const auto image = g.apply(m);
            if (image == m) ++stabilizer;
            sum += image;
        }
        out += sum.scaled(1.0 / static_cast<double>(stabilizer));
    }
    return out;
}

inline bool is_invariant(const std::vector<GroupElement>& group, const Polynomial& p) {
    return std::all_of(group.begin(), group.end(), [&](const GroupElement& g) { return g.apply(p) == p; });
}

/// Each equation maps to some equation of the system under every group element.
inline bool system_invariant(const std::vector<GroupElement>& group, const std::vector<Polynomial>& equations) {
    for (const auto& g : group)
        for (const auto& eq : equations) {
            const auto image = g.apply(eq);
            if (std::find(equations.begin(), equations.end(), image) == equations.end()) return false;
        }
    return true;
}

/// Cyclic n-roots with a general parameter on every equation:
/// f_k = sum_i prod_{j<=k} x_{i+j} + u_k.
inline ProblemInstance cyclic_system(std::size_t n, std::uint64_t seed) {
    if (n < 3 || n > 7) throw std::invalid_argument("cyclic system supports 3 <= n <= 7");
    const auto vars = detail::indexed_names("x", n);
    const auto params = detail::indexed_names("u", n);
    const auto ring = detail::concat(vars, params);

    std::vector<Polynomial> eqs;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Monomial> terms;
        const std::size_t starts = k + 1 == n ? 1 : n;
        for (std::size_t i = 0; i < starts; ++i) {
            std::vector<int> e(2 * n, 0);
            for (std::size_t j = 0; j <= k; ++j) e[(i + j) % n] = 1;
            terms.push_back({1.0, e});
        }
        std::vector<int> e(2 * n, 0);
        e[n + k] = 1;
        terms.push_back({1.0, e});
        eqs.emplace_back(ring, std::move(terms));
    }
    auto system = std::make_shared<const ParameterizedSystem>(vars, params, eqs);

    // Parameters enter linearly: pick x* and solve each equation for u_k.
    Rng rng(seed);
    const Point x = detail::random_point(n, rng);
    Point u(static_cast<Eigen::Index>(n));
    Point zero = Point::Zero(static_cast<Eigen::Index>(n));
    const auto at_zero = system->evaluate(x, zero);
    for (Eigen::Index k = 0; k < u.size(); ++k) u[k] = -at_zero[k];
    const Point dir = detail::random_point(n, rng);

    ProblemInstance inst;
    inst.name = "cyclic(" + std::to_string(n) + ")";
    inst.system = system;
    inst.curve = restrict_to_line(system, u, dir);
    inst.seed_x = x;
    inst.seed_t = 0.0;
    const auto group = dihedral_group(n);
    std::vector<int> x0x2(n, 0);
    x0x2[0] = x0x2[2] = 1;
    inst.alpha = AlphaMap(n, {reynolds_invariant(group, Polynomial(vars, {Monomial{1.0, x0x2}}))});
    switch (n) {
        case 3: inst.known_degree = 6; break;
        case 5: inst.known_degree = 70, inst.known_classes = 7; break;
        case 6: inst.known_degree = 156, inst.known_classes = 13; break;
        case 7: inst.known_degree = 924, inst.known_classes = 66; break;
        default: break;
    }
    inst.loop_radius = 5.0;
    return inst;
}

/// E[X^j] for X ~ N(mu, s): sum_i C(j, 2i) (2i-1)!! mu^{j-2i} s^i, as a
/// polynomial in the two given indeterminates of `ring`.
inline Polynomial gaussian_moment(const std::vector<std::string>& ring, std::size_t mu, std::size_t var, int j) {
    std::vector<Monomial> terms;
    double binom = 1.0;  // C(j, 2i), updated incrementally
    double dfact = 1.0;  // (2i-1)!!
    for (int i = 0; 2 * i <= j; ++i) {
        if (i > 0) {
            binom *= static_cast<double>(j - 2 * i + 2) * static_cast<double>(j - 2 * i + 1) /
                     (static_cast<double>(2 * i - 1) * static_cast<double>(2 * i));
            dfact *= static_cast<double>(2 * i - 1);
        }
        std::vector<int> e(ring.size(), 0);
        e[mu] = j - 2 * i;
        e[var] = i;
        terms.push_back({binom * dfact, e});
    }
    return Polynomial(ring, std::move(terms));
}

/// Method-of-moments system for a mixture of k univariate Gaussians:
/// sum a_i = 1 and sum_i a_i E[X_i^j] = m_j for j = 1..3k-1.
/// Variables a_1..a_k, mu_1..mu_k, s_1..s_k (s_i the variance).
inline ProblemInstance gaussian_moment_system(std::size_t k, std::uint64_t seed) {
    if (k != 2 && k != 3) throw std::invalid_argument("gaussian mixture supports k = 2 or k = 3");
    const auto vars = detail::concat(detail::concat(detail::indexed_names("a", k, 1), detail::indexed_names("mu", k, 1)),
                                     detail::indexed_names("s", k, 1));
    const std::size_t moments = 3 * k - 1;
    const auto params = detail::indexed_names("m", moments, 1);
    const auto ring = detail::concat(vars, params);

    std::vector<Polynomial> eqs;
    {
        Polynomial sum = Polynomial::constant(ring, -1.0);
        for (std::size_t i = 0; i < k; ++i) sum += Polynomial::variable(ring, i);
        eqs.push_back(sum);
    }
    for (std::size_t j = 1; j <= moments; ++j) {
        Polynomial eq = Polynomial::variable(ring, vars.size() + j - 1, -1.0);
        for (std::size_t i = 0; i < k; ++i)
            eq += Polynomial::variable(ring, i) * gaussian_moment(ring, k + i, 2 * k + i, static_cast<int>(j));
        eqs.push_back(eq);
    }
    auto system = std::make_shared<const ParameterizedSystem>(vars, params, eqs);

    Rng rng(seed);
    Point x(static_cast<Eigen::Index>(3 * k));
    Complex rest{1.0, 0.0};
    for (std::size_t i = 0; i + 1 < k; ++i) {
        x[static_cast<Eigen::Index>(i)] = random_complex_normal(rng);
        rest -= x[static_cast<Eigen::Index>(i)];
    }
    x[static_cast<Eigen::Index>(k - 1)] = rest;
    for (std::size_t i = k; i < 3 * k; ++i) x[static_cast<Eigen::Index>(i)] = random_complex_normal(rng);
    const Point zero = Point::Zero(static_cast<Eigen::Index>(moments));
    const auto at_zero = system->evaluate(x, zero);
    Point m(static_cast<Eigen::Index>(moments));
    for (std::size_t j = 0; j < moments; ++j) m[static_cast<Eigen::Index>(j)] = at_zero[static_cast<Eigen::Index>(j + 1)];
    const Point dir = detail::random_point(moments, rng);

    ProblemInstance inst;
    inst.name = "gaussian(" + std::to_string(k) + ")";
    inst.system = system;
    inst.curve = restrict_to_line(system, m, dir);
    inst.seed_x = x;
    inst.seed_t = 0.0;
    Polynomial mean_sum(vars);
    for (std::size_t i = 0; i < k; ++i) mean_sum += Polynomial::variable(vars, k + i);
    inst.alpha = AlphaMap(vars.size(), {mean_sum});
    // Branch points of the moment curves sit farther out than the unit disk.
    inst.loop_radius = 3.0;
    if (k == 2) {
        inst.known_degree = 18;
        inst.known_classes = 9;
    } else {
        inst.known_degree = 1350;
        inst.known_classes = 225;
    }
    return inst;
}

/// Label swap of mixture components i and j as a permutation of variables.
inline GroupElement gaussian_label_swap(std::size_t k, std::size_t i, std::size_t j) {
    auto g = GroupElement::identity(3 * k);
    for (std::size_t block = 0; block < 3; ++block) std::swap(g.perm[block * k + i], g.perm[block * k + j]);
    return g;
}

/// (u1 + u2 (x1 x2^2 + x1^2 x2)) x1 x2 = 0, u4 + u5 (x1 + x2) + u6 x1 x2 = 0,
/// with alpha = x1 + x2. Solutions on x1 x2 = 0 are extraneous.
inline ProblemInstance mixed_volume_example(std::uint64_t seed) {
    const std::vector<std::string> vars{"x1", "x2"};
    const std::vector<std::string> params{"u1", "u2", "u4", "u5", "u6"};
    const auto ring = detail::concat(vars, params);
    // exponent order: x1 x2 u1 u2 u4 u5 u6
    Polynomial f1(ring, {Monomial{1.0, {1, 1, 1, 0, 0, 0, 0}}, Monomial{1.0, {2, 3, 0, 1, 0, 0, 0}},
                         Monomial{1.0, {3, 2, 0, 1, 0, 0, 0}}});
    Polynomial f2(ring, {Monomial{1.0, {0, 0, 0, 0, 1, 0, 0}}, Monomial{1.0, {1, 0, 0, 0, 0, 1, 0}},
                         Monomial{1.0, {0, 1, 0, 0, 0, 1, 0}}, Monomial{1.0, {1, 1, 0, 0, 0, 0, 1}}});
    auto system = std::make_shared<const ParameterizedSystem>(vars, params, std::vector<Polynomial>{f1, f2});

    Rng rng(seed);
    const Point x = detail::random_point(2, rng);
    const Complex u2 = random_complex_normal(rng);
    const Complex u5 = random_complex_normal(rng);
    const Complex u6 = random_complex_normal(rng);
    const Complex s = x[0] + x[1];
    const Complex p = x[0] * x[1];
    Point u(5);
    u << -u2 * p * s, u2, -u5 * s - u6 * p, u5, u6;
    const Point dir = detail::random_point(5, rng);

    ProblemInstance inst;
    inst.name = "mixedvol";
    inst.system = system;
    inst.curve = restrict_to_line(system, u, dir);
    inst.seed_x = x;
    inst.seed_t = 0.0;
    inst.alpha = AlphaMap(2, {Polynomial(vars, {Monomial{1.0, {1, 0}}, Monomial{1.0, {0, 1}}})});
    inst.known_degree = 4;
    inst.known_classes = 2;
    inst.torus_only = true;
    inst.loop_radius = 5.0;
    return inst;
}

enum class InvariantCase { nontrivial_decomposition, fiber_fixed, alpha_constant_on_fiber };

inline std::string_view to_string(InvariantCase c) {
    switch (c) {
        case InvariantCase::nontrivial_decomposition: return "nontrivial-decomposition";
        case InvariantCase::fiber_fixed: return "fiber-fixed";
        case InvariantCase::alpha_constant_on_fiber: return "alpha-constant-on-fiber";
    }
    return "unknown";
}

struct InvariantClassification {
    InvariantCase kind;
    DecompositionDegrees degrees;
};

/// Trichotomy for an alpha built from invariants, keyed to the observed
/// degrees on a complete fiber: a = 1, a = d, or strictly between.
inline InvariantClassification classify_invariant_alpha(const std::vector<Point>& fiber, const AlphaMap& alpha,
                                                        double eps = default_point_tol) {
    const auto deg = decomposition_degrees(fiber, alpha, eps);
    const auto d = fiber.size();
    if (deg.a == 1) return {InvariantCase::fiber_fixed, deg};
    if (deg.a == d) return {InvariantCase::alpha_constant_on_fiber, deg};
    return {InvariantCase::nontrivial_decomposition, deg};
}

/// Built-in selector: "power", "cyclic", "gaussian", "mixedvol".
inline ProblemInstance make_problem(const std::string& family, int size, std::uint64_t seed) {
    if (family == "power") return power_curve(size);
    if (family == "cyclic") return cyclic_system(static_cast<std::size_t>(size), seed);
    if (family == "gaussian") return gaussian_moment_system(static_cast<std::size_t>(size), seed);
    if (family == "mixedvol") return mixed_volume_example(seed);
    throw std::invalid_argument("unknown problem '" + family + "'");
}

}  // namespace monodromy
