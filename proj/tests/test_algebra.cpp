#include "support.hpp"

using namespace monodromy;
using namespace testing;

namespace {

// x^2 - 2x + t (or any univariate polynomial in x with u entering as +u), on the line u = t.
std::shared_ptr<const CurveSystem> univariate(std::vector<Monomial> x_terms) {
    const std::vector<std::string> ring{"x", "u"};
    for (auto& m : x_terms) m.exponents.push_back(0);
    x_terms.push_back({1.0, {0, 1}});
    auto sys = std::make_shared<const ParameterizedSystem>(std::vector<std::string>{"x"}, std::vector<std::string>{"u"},
                                                           std::vector<Polynomial>{Polynomial(ring, x_terms)});
    return restrict_to_line(sys, Point::Zero(1), Point::Ones(1));
}

std::vector<ProblemInstance> builtins() {
    return {power_curve(2), power_curve(5),    cyclic_system(3, 11), cyclic_system(5, 12),
            cyclic_system(7, 13), gaussian_moment_system(2, 14), gaussian_moment_system(3, 15),
            mixed_volume_example(16)};
}

}  // namespace

TEST_CASE("polynomial terms are normalized") {
    const std::vector<std::string> r{"x", "y"};
    Polynomial p(r, {{1.0, {1, 0}}, {2.0, {1, 0}}, {0.0, {0, 3}}, {-1.0, {0, 1}}, {1.0, {0, 1}}});
    REQUIRE(p.terms().size() == 1);
    CHECK(p.terms()[0].coeff == Complex(3.0));
    CHECK_THROWS_AS(Polynomial(r, {{1.0, {1}}}), DimensionError);
    CHECK_THROWS_AS(Polynomial(r, {{1.0, {-1, 0}}}), std::invalid_argument);
}

TEST_CASE("curve evaluation examples") {
    const auto quad = univariate({{1.0, {2}}, {-2.0, {1}}});
    CHECK(std::abs(quad->evaluate(scalar_point(1.0), 1.0)[0]) == 0.0);

    const auto quartic = univariate({{1.0, {4}}, {-2.0, {2}}});
    CHECK(std::abs(quartic->evaluate(scalar_point(std::sqrt(3.0)), -3.0)[0]) < 1e-13);
    CHECK_THROWS_AS(quartic->evaluate(Point::Zero(2), 0.0), DimensionError);

    // f0 = x0 + ... + x4 + u0 at x = 1, u0 = -5
    const auto cyc = cyclic_system(5, 1);
    Point u = Point::Zero(5);
    u[0] = -5.0;
    CHECK(std::abs(cyc.system->evaluate(Point::Ones(5), u)[0]) == 0.0);
}

TEST_CASE("jacobian examples") {
    const auto quartic = univariate({{1.0, {4}}, {-2.0, {2}}});
    CHECK(quartic->jacobian_x(scalar_point(2.0), 0.7)(0, 0) == Complex(24.0));
    CHECK(quartic->jacobian_x(scalar_point(1.0), 0.7)(0, 0) == Complex(0.0));
    CHECK(quartic->dF_dt(scalar_point(0.3), 2.0)[0] == Complex(1.0));
    CHECK(quartic->dF_dt(scalar_point(-4.0), -1.0)[0] == Complex(1.0));
}

TEST_CASE("jacobians match finite differences on every built-in system") {
    Rng rng(99);
    for (const auto& p : builtins()) {
        INFO(p.name);
        const auto n = p.curve->num_variables();
        for (int trial = 0; trial < 20; ++trial) {
            const Point x = random_point(n, rng);
            const Complex t = random_complex_normal(rng);
            CHECK(rel_err(p.curve->jacobian_x(x, t), fd_jacobian(*p.curve, x, t)) < 1e-5);
            CHECK(rel_err(Matrix(p.curve->dF_dt(x, t)), Matrix(fd_dt(*p.curve, x, t))) < 1e-5);
        }
    }
}

TEST_CASE("parameters enter linearly: dF/dt is the line direction") {
    Rng rng(3);
    const auto cyc = cyclic_system(5, 4);
    const Point x = random_point(5, rng);
    CHECK((cyc.curve->dF_dt(x, 0.4) - cyc.curve->line_direction()).norm() < 1e-14);

    const auto g = gaussian_moment_system(2, 5);
    const Point y = random_point(6, rng);
    const auto ft = g.curve->dF_dt(y, Complex(0.1, 0.2));
    // equation 0 is a1 + a2 = 1; equation j is the m_j moment equation
    CHECK(std::abs(ft[0]) == 0.0);
    CHECK(std::abs(ft[2] + g.curve->line_direction()[1]) < 1e-14);
}

TEST_CASE("restriction agrees with the parent at u* + t v") {
    Rng rng(8);
    for (const auto& p : builtins()) {
        INFO(p.name);
        const auto n = p.curve->num_variables();
        const Point x0 = random_point(n, rng);
        CHECK((p.curve->evaluate(x0, 0.0) - p.system->evaluate(x0, p.curve->line_base())).norm() <=
              1e-10 * std::max(1.0, p.curve->evaluate(x0, 0.0).norm()));
        for (int trial = 0; trial < 20; ++trial) {
            const Point x = random_point(n, rng);
            const Complex t = random_complex_normal(rng);
            const auto lhs = p.curve->evaluate(x, t);
            const auto rhs = p.system->evaluate(x, p.curve->parameters_at(t));
            CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()));
        }
    }
}

TEST_CASE("restriction shape and errors") {
    const auto cyc = cyclic_system(5, 2);
    CHECK(cyc.curve->equations().size() == 5);
    CHECK(cyc.curve->num_variables() == 5);
    CHECK(cyc.curve->equations()[0].arity() == 6);

    // power curve: u = t, so the restricted equation is the parent equation with u renamed
    const auto pw = power_curve(3);
    const auto& f = pw.system->equations()[0];
    const auto& g = pw.curve->equations()[0];
    REQUIRE(f.terms().size() == g.terms().size());
    for (std::size_t i = 0; i < f.terms().size(); ++i) {
        CHECK(f.terms()[i].coeff == g.terms()[i].coeff);
        CHECK(f.terms()[i].exponents == g.terms()[i].exponents);
    }

    CHECK_THROWS_AS(restrict_to_line(cyc.system, cyc.curve->line_base(), Point::Zero(5)), std::invalid_argument);
    CHECK_THROWS_AS(restrict_to_line(cyc.system, Point::Zero(4), Point::Ones(5)), DimensionError);
}

TEST_CASE("differentiation examples") {
    const std::vector<std::string> r{"x0", "x1", "t"};
    const auto x0 = Polynomial::variable(r, 0);
    const auto x1 = Polynomial::variable(r, 1);
    CHECK(differentiate(x0 * x1, "x0") == x1);
    CHECK(differentiate(Polynomial::variable(r, 2), "x0").is_zero());
    CHECK(differentiate(Polynomial::constant(r, 4.0), 1).is_zero());
    CHECK_THROWS(differentiate(x0, "y"));
    for (int n : {1, 2, 7}) {
        const std::vector<std::string> rx{"x"};
        const auto x = Polynomial::variable(rx, 0);
        CHECK(differentiate(x.pow(2 * n), 0) == x.pow(2 * n - 1).scaled(2.0 * n));
    }
}

TEST_CASE("evaluation is linear") {
    Rng rng(17);
    const auto cyc = cyclic_system(6, 3);
    const auto& f = cyc.system->equations();
    for (int trial = 0; trial < 100; ++trial) {
        const Point z = random_point(12, rng);
        const auto& p = f[trial % 6];
        const auto& q = f[(trial + 2) % 6];
        const Complex sum = (p + q).evaluate(z);
        CHECK(std::abs(sum - (p.evaluate(z) + q.evaluate(z))) <= 1e-12 * std::max(1.0, std::abs(sum)));
    }
}

TEST_CASE("composition substitutes images") {
    const std::vector<std::string> z{"z"};
    const std::vector<std::string> x{"x"};
    const auto outer = Polynomial::variable(z, 0).pow(2) + Polynomial::constant(z, 1.0);
    const std::vector<Polynomial> images{Polynomial::variable(x, 0).pow(3)};
    const auto c = compose(outer, images, x);
    CHECK(c == Polynomial::variable(x, 0).pow(6) + Polynomial::constant(x, 1.0));
}
