#include "support.hpp"

using namespace monodromy;
using namespace testing;

namespace {

const Complex I{0.0, 1.0};

std::vector<std::string> xs(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
    return out;
}

Polynomial monomial(std::size_t n, std::vector<int> e, Complex c = 1.0) { return Polynomial(xs(n), {Monomial{c, e}}); }

}  // namespace

TEST_CASE("every built-in seed verifies") {
    for (const auto& p : {power_curve(2), power_curve(10), cyclic_system(3, 1), cyclic_system(5, 2),
                          cyclic_system(6, 3), cyclic_system(7, 4), gaussian_moment_system(2, 5),
                          gaussian_moment_system(3, 6), mixed_volume_example(7)}) {
        INFO(p.name);
        CHECK(p.seed_residual() < 1e-9);
        CHECK(p.system->equations().size() == p.system->num_variables());
    }
    CHECK_THROWS(make_problem("nine-point", 1, 0));
}

TEST_CASE("power curve") {
    CHECK_THROWS(power_curve(1));
    const auto p = power_curve(2);
    CHECK(p.known_degree == 4u);
    CHECK(p.known_classes == 2u);

    const auto roots = power_curve_roots(2, -3.0);
    std::vector<Point> expected;
    for (Complex z : {Complex(std::sqrt(3.0)), Complex(-std::sqrt(3.0)), I, -I}) expected.push_back(scalar_point(z));
    CHECK(same_point_set(power_fiber(2, -3.0), expected, 1e-14));
    for (auto r : roots) {
        const Complex img = p.alpha->image(scalar_point(r))[0];
        CHECK((std::abs(img - 3.0) < 1e-12 || std::abs(img + 1.0) < 1e-12));
    }

    const auto p3 = power_curve(3);
    const auto r3 = power_curve_roots(3, 0.5);
    CHECK(r3.size() == 6);
    for (auto r : r3) CHECK(p3.curve->evaluate(scalar_point(r), 0.5).norm() < 1e-10);
    CHECK(partition_by_alpha(power_fiber(3, 0.5), *p3.alpha).size() == 2);

    CHECK_THROWS(power_curve_roots(2, 0.0));
    CHECK_THROWS(power_curve_roots(2, 1.0));
}

TEST_CASE("the power curve branches only over 0 and 1") {
    // f' = 2n x^{n-1} (x^n - 1): critical points x = 0 and x^n = 1, where f = t and f = t - 1.
    for (int n : {2, 3, 7}) {
        const auto p = power_curve(n);
        Rng rng(n);
        for (int i = 0; i < 10; ++i) {
            const Complex t = random_complex_normal(rng);
            CHECK(std::abs(p.curve->evaluate(Point::Zero(1), t)[0] - t) < 1e-15);
            for (int k = 0; k < n; ++k) {
                const Point w = scalar_point(std::polar(1.0, 2.0 * std::numbers::pi * k / n));
                CHECK(std::abs(p.curve->jacobian_x(w, t)(0, 0)) < 1e-12);
                CHECK(std::abs(p.curve->evaluate(w, t)[0] - (t - 1.0)) < 1e-12);
            }
            const auto roots = power_curve_roots(n, t);
            double gap = 1e300;
            for (std::size_t a = 0; a < roots.size(); ++a)
                for (std::size_t b = a + 1; b < roots.size(); ++b) gap = std::min(gap, std::abs(roots[a] - roots[b]));
            CHECK(gap > 1e-6);
        }
    }
}

TEST_CASE("monodromy recovers the closed-form power fiber") {
    for (int n : {2, 3, 5, 10}) {
        INFO(n);
        const auto p = power_curve(n);
        const auto fiber = full_fiber(p, 40 + n);
        REQUIRE(fiber.size() == static_cast<std::size_t>(2 * n));
        CHECK(same_point_set(fiber, power_fiber(n, -3.0)));
        Rng rng(n);
        for (int i = 0; i < 5; ++i) {
            const Complex t = -3.0 + 2.0 * random_complex_normal(rng);
            std::vector<Point> moved;
            for (const auto& r : track_batch(*p.curve, fiber, -3.0, t, TrackerConfig{})) {
                REQUIRE(r.ok());
                moved.push_back(r.endpoint);
            }
            CHECK(same_point_set(moved, power_fiber(n, t)));
        }
    }
}

TEST_CASE("dihedral group") {
    const auto d5 = dihedral_group(5);
    CHECK(d5.size() == 10);
    CHECK(std::find(d5.begin(), d5.end(), GroupElement::identity(5)) != d5.end());
    for (const auto& g : d5)
        for (const auto& h : d5) CHECK(std::find(d5.begin(), d5.end(), g * h) != d5.end());
    CHECK(d5[1].apply(monomial(5, {1, 0, 0, 0, 0})) == monomial(5, {0, 1, 0, 0, 0}));
    for (std::size_t k = 5; k < 10; ++k) CHECK(d5[k] * d5[k] == GroupElement::identity(5));
    CHECK_THROWS(dihedral_group(2));
    for (std::size_t n = 3; n <= 7; ++n) CHECK(dihedral_group(n).size() == 2 * n);
}

TEST_CASE("sign changes act on odd powers") {
    auto g = GroupElement::identity(2);
    g.signs[0] = -1;
    CHECK(g.apply(monomial(2, {1, 2})) == monomial(2, {1, 2}, -1.0));
    CHECK(g.apply(monomial(2, {2, 1})) == monomial(2, {2, 1}));
}

TEST_CASE("Reynolds invariants") {
    const auto d5 = dihedral_group(5);
    const auto r = reynolds_invariant(d5, monomial(5, {1, 0, 1, 0, 0}));
    const Polynomial expected(xs(5), {Monomial{1.0, {1, 0, 0, 1, 0}}, Monomial{1.0, {0, 1, 0, 0, 1}},
                                      Monomial{1.0, {1, 0, 1, 0, 0}}, Monomial{1.0, {0, 1, 0, 1, 0}},
                                      Monomial{1.0, {0, 0, 1, 0, 1}}});
    CHECK(r == expected);
    CHECK(is_invariant(d5, r));

    const auto lin = reynolds_invariant(d5, monomial(5, {1, 0, 0, 0, 0}));
    CHECK(lin == Polynomial(xs(5), {Monomial{1.0, {1, 0, 0, 0, 0}}, Monomial{1.0, {0, 1, 0, 0, 0}},
                                    Monomial{1.0, {0, 0, 1, 0, 0}}, Monomial{1.0, {0, 0, 0, 1, 0}},
                                    Monomial{1.0, {0, 0, 0, 0, 1}}}));
    CHECK(reynolds_invariant(d5, Polynomial::constant(xs(5), 1.0)) == Polynomial::constant(xs(5), 1.0));

    // The group average is the same invariant up to the orbit-size factor.
    const auto avg = reynolds_average(d5, monomial(5, {1, 0, 1, 0, 0}));
    CHECK(is_invariant(d5, avg));
    CHECK(avg == r.scaled(0.2));
    CHECK(reynolds_average(d5, Polynomial::constant(xs(5), 1.0)) == Polynomial::constant(xs(5), 1.0));

    // Invariance is exact for random polynomials and every D_n in range.
    Rng rng(3);
    for (std::size_t n = 3; n <= 7; ++n) {
        const auto g = dihedral_group(n);
        std::vector<Monomial> terms;
        std::uniform_int_distribution<int> e(0, 3);
        for (int k = 0; k < 4; ++k) {
            std::vector<int> ex(n);
            for (auto& v : ex) v = e(rng);
            terms.push_back({random_complex_normal(rng), ex});
        }
        const Polynomial p(xs(n), terms);
        CHECK(is_invariant(g, reynolds_invariant(g, p)));
        CHECK(is_invariant(g, reynolds_average(g, p)));
    }
}

TEST_CASE("cyclic systems are dihedrally invariant") {
    for (std::size_t n = 3; n <= 7; ++n) {
        INFO(n);
        const auto c = cyclic_system(n, n);
        CHECK(c.system->num_variables() == n);
        CHECK(c.system->num_parameters() == n);
        CHECK(system_invariant(dihedral_group(n), c.system->equations()));
        CHECK(is_invariant(dihedral_group(n), c.alpha->components()[0]));
    }
    CHECK_THROWS(cyclic_system(2, 1));
    CHECK_THROWS(cyclic_system(8, 1));
    CHECK(cyclic_system(5, 1).known_degree == 70u);
    CHECK(cyclic_system(5, 1).known_classes == 7u);
    CHECK(cyclic_system(6, 1).known_degree == 156u);
    CHECK(cyclic_system(6, 1).known_classes == 13u);
    CHECK(cyclic_system(7, 1).known_degree == 924u);
    CHECK(cyclic_system(7, 1).known_classes == 66u);
}

TEST_CASE("invariant trichotomy on cyclic-5") {
    const auto c = cyclic_system(5, 2);
    const auto fiber = full_fiber(c);
    REQUIRE(fiber.size() == 70);

    const auto nontrivial = classify_invariant_alpha(fiber, *c.alpha);
    CHECK(nontrivial.kind == InvariantCase::nontrivial_decomposition);
    CHECK(nontrivial.degrees == DecompositionDegrees{10, 7});

    const AlphaMap linear(5, {reynolds_invariant(dihedral_group(5), monomial(5, {1, 0, 0, 0, 0}))});
    const auto constant = classify_invariant_alpha(fiber, linear);
    CHECK(constant.kind == InvariantCase::alpha_constant_on_fiber);
    CHECK(constant.degrees == DecompositionDegrees{70, 1});

    std::vector<Polynomial> coords;
    for (std::size_t i = 0; i < 5; ++i) coords.push_back(Polynomial::variable(xs(5), i));
    CHECK(classify_invariant_alpha(fiber, AlphaMap(5, coords)).kind == InvariantCase::fiber_fixed);

    const auto pw = power_curve(2);
    const auto identity = classify_invariant_alpha(power_fiber(2, -3.0), AlphaMap(1, {Polynomial::variable({"x"}, 0)}));
    CHECK(identity.kind == InvariantCase::fiber_fixed);
    CHECK(identity.degrees == DecompositionDegrees{1, 4});
}

TEST_CASE("gaussian moments match the closed forms") {
    const std::vector<std::string> ring{"mu", "s"};
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const Complex mu = random_complex_normal(rng), s = random_complex_normal(rng);
        Point z(2);
        z << mu, s;
        const Complex expected[] = {1.0,
                                    mu,
                                    mu * mu + s,
                                    mu * mu * mu + 3.0 * mu * s,
                                    std::pow(mu, 4) + 6.0 * mu * mu * s + 3.0 * s * s,
                                    std::pow(mu, 5) + 10.0 * std::pow(mu, 3) * s + 15.0 * mu * s * s,
                                    std::pow(mu, 6) + 15.0 * std::pow(mu, 4) * s + 45.0 * mu * mu * s * s +
                                        15.0 * std::pow(s, 3)};
        for (int j = 0; j <= 6; ++j) CHECK(rel_err(gaussian_moment(ring, 0, 1, j).evaluate(z), expected[j]) < 1e-12);
    }
}

TEST_CASE("gaussian mixture systems") {
    CHECK_THROWS(gaussian_moment_system(1, 0));
    CHECK_THROWS(gaussian_moment_system(4, 0));
    const auto g2 = gaussian_moment_system(2, 3);
    CHECK(g2.system->num_variables() == 6);
    CHECK(g2.system->num_parameters() == 5);
    CHECK(g2.system->equations().size() == 6);
    CHECK(g2.known_degree == 18u);
    CHECK(g2.known_classes == 9u);
    const auto g3 = gaussian_moment_system(3, 3);
    CHECK(g3.system->num_variables() == 9);
    CHECK(g3.system->num_parameters() == 8);
    CHECK(g3.known_classes == 225u);

    // the system is invariant under swapping component labels
    const auto swap = gaussian_label_swap(2, 0, 1);
    CHECK(swap * swap == GroupElement::identity(6));
    CHECK(system_invariant({swap}, g2.system->equations()));
    CHECK(system_invariant({gaussian_label_swap(3, 0, 2)}, g3.system->equations()));
}

TEST_CASE("label swaps permute the gaussian fiber") {
    const auto g = gaussian_moment_system(2, 4);
    const auto fiber = full_fiber(g);
    REQUIRE(fiber.size() == 18);
    const auto swap = gaussian_label_swap(2, 0, 1);
    for (const auto& p : fiber) {
        Point q(6);
        for (std::size_t i = 0; i < 6; ++i) q[static_cast<Eigen::Index>(swap.perm[i])] = p[static_cast<Eigen::Index>(i)];
        CHECK(g.curve->evaluate(q, g.base()).norm() < 1e-6);
        CHECK(alpha_equivalent(*g.alpha, p, q));
        CHECK_FALSE(approx_equal(p, q, 1e-6));
    }
    CHECK(decomposition_degrees(fiber, *g.alpha) == DecompositionDegrees{2, 9});
}

TEST_CASE("mixed volume example") {
    const auto m = mixed_volume_example(5);
    CHECK(m.system->num_parameters() == 5);
    CHECK(std::abs(m.seed_x[0] * m.seed_x[1]) > 1e-8);
    const auto fiber = full_fiber(m);
    CHECK(fiber.size() == 4);
    CHECK(decomposition_degrees(fiber, *m.alpha) == DecompositionDegrees{2, 2});
    // points with x1 = 0 solve the first equation identically and are extraneous
    Point axis(2);
    axis << 0.0, 2.0;
    CHECK(std::abs(m.system->equations()[0].evaluate(Point(Point::Zero(7)))) == 0.0);
    CHECK_FALSE(m.admits(axis));
}
