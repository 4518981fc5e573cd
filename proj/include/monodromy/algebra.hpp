#pragma once

// Sparse multivariate polynomials over the complex numbers, parameterized
// systems, and their restriction to a line in parameter space.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace monodromy {

using Complex = std::complex<double>;
using Point = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline bool is_finite(const Point& p) {
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (!is_finite(p[i])) return false;
    return true;
}

/// z^k by repeated squaring; k >= 0.
inline Complex ipow(Complex z, int k) {
    Complex result{1.0, 0.0};
    while (k > 0) {
        if (k & 1) result *= z;
        z *= z;
        k >>= 1;
    }
    return result;
}

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
inline Complex random_complex_normal(Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

struct Monomial {
    Complex coeff;
    std::vector<int> exponents;
};

/// Polynomial in a fixed, ordered list of indeterminates. Terms are kept
/// sorted by exponent tuple with duplicates combined and zero terms removed,
/// so structural equality is coefficient-for-coefficient equality.
class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(std::vector<std::string> names) : names_(std::move(names)) {}

    Polynomial(std::vector<std::string> names, std::vector<Monomial> terms)
        : names_(std::move(names)), terms_(std::move(terms)) {
        for (const auto& term : terms_) {
            if (term.exponents.size() != names_.size())
                throw DimensionError("monomial exponent count does not match indeterminate count");
            if (!is_finite(term.coeff)) throw std::invalid_argument("non-finite polynomial coefficient");
            for (int e : term.exponents)
                if (e < 0) throw std::invalid_argument("negative exponent");
        }
        normalize();
    }

    static Polynomial constant(std::vector<std::string> names, Complex c) {
        const auto n = names.size();
        return Polynomial(std::move(names), {Monomial{c, std::vector<int>(n, 0)}});
    }

    static Polynomial variable(std::vector<std::string> names, std::size_t index, Complex coeff = 1.0) {
        if (index >= names.size()) throw DimensionError("variable index out of range");
        std::vector<int> exps(names.size(), 0);
        exps[index] = 1;
        return Polynomial(std::move(names), {Monomial{coeff, std::move(exps)}});
    }

    const std::vector<std::string>& names() const { return names_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    std::size_t arity() const { return names_.size(); }
    bool is_zero() const { return terms_.empty(); }

    std::size_t index_of(std::string_view name) const {
        const auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) throw std::invalid_argument("unknown indeterminate '" + std::string(name) + "'");
        return static_cast<std::size_t>(it - names_.begin());
    }

    int degree() const {
        int d = 0;
        for (const auto& t : terms_) {
            int s = 0;
            for (int e : t.exponents) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    int degree_in(std::size_t var) const {
        int d = 0;
        for (const auto& t : terms_) d = std::max(d, t.exponents.at(var));
        return d;
    }

    /// True if any term has a nonzero exponent in one of the given indeterminates.
    bool mentions(std::size_t var) const {
        return std::any_of(terms_.begin(), terms_.end(), [var](const Monomial& t) { return t.exponents[var] != 0; });
    }

    Complex evaluate(std::span<const Complex> point) const {
        if (point.size() != names_.size()) throw DimensionError("evaluation point has wrong dimension");
        Complex sum{0.0, 0.0};
        for (const auto& t : terms_) {
            Complex v = t.coeff;
            for (std::size_t i = 0; i < point.size(); ++i)
                if (t.exponents[i] != 0) v *= ipow(point[i], t.exponents[i]);
            sum += v;
        }
        return sum;
    }

    Complex evaluate(const Point& point) const {
        return evaluate(std::span<const Complex>(point.data(), static_cast<std::size_t>(point.size())));
    }

    Polynomial scaled(Complex c) const {
        Polynomial out(names_);
        if (c == Complex{0.0, 0.0}) return out;
        out.terms_ = terms_;
        for (auto& t : out.terms_) t.coeff *= c;
        return out;
    }

    Polynomial& operator+=(const Polynomial& other) {
        require_same_ring(other);
        terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
        normalize();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& other) { return *this += other.scaled(-1.0); }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.require_same_ring(b);
        Polynomial out(a.names_);
        out.terms_.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) {
                Monomial m{ta.coeff * tb.coeff, ta.exponents};
                for (std::size_t i = 0; i < m.exponents.size(); ++i) m.exponents[i] += tb.exponents[i];
                out.terms_.push_back(std::move(m));
            }
        out.normalize();
        return out;
    }

    Polynomial pow(int k) const {
        if (k < 0) throw std::invalid_argument("negative polynomial power");
        Polynomial result = constant(names_, 1.0);
        Polynomial base = *this;
        while (k > 0) {
            if (k & 1) result = result * base;
            k >>= 1;
            if (k > 0) base = base * base;
        }
        return result;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.names_ != b.names_ || a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].coeff != b.terms_[i].coeff || a.terms_[i].exponents != b.terms_[i].exponents) return false;
        return true;
    }

private:
    void require_same_ring(const Polynomial& other) const {
        if (names_ != other.names_) throw DimensionError("polynomials live in different rings");
    }

    void normalize() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
        std::vector<Monomial> merged;
        merged.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().exponents == t.exponents)
                merged.back().coeff += t.coeff;
            else
                merged.push_back(std::move(t));
        }
        std::erase_if(merged, [](const Monomial& m) { return m.coeff == Complex{0.0, 0.0}; });
        terms_ = std::move(merged);
    }

    std::vector<std::string> names_;
    std::vector<Monomial> terms_;
};

inline Polynomial differentiate(const Polynomial& p, std::size_t var) {
    if (var >= p.arity()) throw std::invalid_argument("unknown indeterminate index");
    std::vector<Monomial> out;
    for (const auto& t : p.terms()) {
        const int e = t.exponents[var];
        if (e == 0) continue;
        Monomial m{t.coeff * static_cast<double>(e), t.exponents};
        m.exponents[var] = e - 1;
        out.push_back(std::move(m));
    }
    return Polynomial(p.names(), std::move(out));
}

inline Polynomial differentiate(const Polynomial& p, std::string_view var) { return differentiate(p, p.index_of(var)); }

/// Substitutes `images[i]` for indeterminate i of `outer`. All images must
/// share one ring, which becomes the ring of the result.
inline Polynomial compose(const Polynomial& outer, std::span<const Polynomial> images,
                          const std::vector<std::string>& target_names) {
    if (images.size() != outer.arity()) throw DimensionError("composition needs one image per indeterminate");
    for (const auto& img : images)
        if (img.names() != target_names) throw DimensionError("composition images live in different rings");

    // powers[i][k] = images[i]^k, filled on demand
    std::vector<std::vector<Polynomial>> powers(images.size());
    auto power_of = [&](std::size_t i, int k) -> const Polynomial& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(Polynomial::constant(target_names, 1.0));
        while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * images[i]);
        return cache[static_cast<std::size_t>(k)];
    };

    Polynomial result(target_names);
    for (const auto& t : outer.terms()) {
        Polynomial term = Polynomial::constant(target_names, t.coeff);
        for (std::size_t i = 0; i < t.exponents.size(); ++i)
            if (t.exponents[i] != 0) term = term * power_of(i, t.exponents[i]);
        result += term;
    }
    return result;
}

/// Equations in variables x and parameters u. Each equation's ring is
/// variables followed by parameters.
class ParameterizedSystem {
public:
    ParameterizedSystem(std::vector<std::string> variables, std::vector<std::string> parameters,
                        std::vector<Polynomial> equations)
        : variables_(std::move(variables)), parameters_(std::move(parameters)), equations_(std::move(equations)) {
        const auto ring = ring_names();
        for (const auto& eq : equations_)
            if (eq.names() != ring)
                throw DimensionError("equation indeterminates must be the variables followed by the parameters");
    }

    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<std::string>& parameters() const { return parameters_; }
    const std::vector<Polynomial>& equations() const { return equations_; }
    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_parameters() const { return parameters_.size(); }

    std::vector<std::string> ring_names() const {
        auto names = variables_;
        names.insert(names.end(), parameters_.begin(), parameters_.end());
        return names;
    }

    Eigen::VectorXcd evaluate(const Point& x, const Point& u) const {
        if (static_cast<std::size_t>(x.size()) != num_variables() ||
            static_cast<std::size_t>(u.size()) != num_parameters())
            throw DimensionError("point or parameter has wrong dimension");
        std::vector<Complex> full(x.data(), x.data() + x.size());
        full.insert(full.end(), u.data(), u.data() + u.size());
        Eigen::VectorXcd out(static_cast<Eigen::Index>(equations_.size()));
        for (std::size_t i = 0; i < equations_.size(); ++i) out[static_cast<Eigen::Index>(i)] = equations_[i].evaluate(full);
        return out;
    }

private:
    std::vector<std::string> variables_;
    std::vector<std::string> parameters_;
    std::vector<Polynomial> equations_;
};

namespace detail {

/// Flattened polynomial for the hot evaluation path: each term is a
/// coefficient times a product of entries of a shared power table.
struct CompiledPolynomial {
    struct Factor {
        std::uint32_t var;
        std::uint32_t exp;
    };
    struct Term {
        Complex coeff;
        std::uint32_t begin;
        std::uint32_t end;
    };
    std::vector<Term> terms;
    std::vector<Factor> factors;

    CompiledPolynomial() = default;

    explicit CompiledPolynomial(const Polynomial& p) {
        for (const auto& t : p.terms()) {
            Term ct{t.coeff, static_cast<std::uint32_t>(factors.size()), 0};
            for (std::size_t v = 0; v < t.exponents.size(); ++v)
                if (t.exponents[v] != 0)
                    factors.push_back({static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(t.exponents[v])});
            ct.end = static_cast<std::uint32_t>(factors.size());
            terms.push_back(ct);
        }
    }

    Complex evaluate(const std::vector<Complex>& powers, const std::vector<std::size_t>& offsets) const {
        Complex sum{0.0, 0.0};
        for (const auto& t : terms) {
            Complex v = t.coeff;
            for (auto f = t.begin; f < t.end; ++f) v *= powers[offsets[factors[f].var] + factors[f].exp];
            sum += v;
        }
        return sum;
    }
};

}  // namespace detail

/// A square system F(x, t) = 0 in n variables and one line coordinate t,
/// obtained from a parameterized system by u = u* + t v.
class CurveSystem {
public:
    /// Scratch space for power tables; reuse one per thread to avoid allocation.
    struct Workspace {
        std::vector<Complex> powers;
    };

    CurveSystem(std::shared_ptr<const ParameterizedSystem> parent, Point line_base, Point line_direction,
                std::vector<Polynomial> equations)
        : parent_(std::move(parent)),
          line_base_(std::move(line_base)),
          line_direction_(std::move(line_direction)),
          equations_(std::move(equations)) {
        n_ = parent_->num_variables();
        if (equations_.size() != n_)
            throw DimensionError("curve system must be square in the solution variables");
        for (const auto& eq : equations_)
            if (eq.arity() != n_ + 1) throw DimensionError("curve equations must be in the variables and t");
        compile();
    }

    const ParameterizedSystem& parent() const { return *parent_; }
    std::shared_ptr<const ParameterizedSystem> parent_ptr() const { return parent_; }
    const Point& line_base() const { return line_base_; }
    const Point& line_direction() const { return line_direction_; }
    const std::vector<Polynomial>& equations() const { return equations_; }
    std::size_t num_variables() const { return n_; }

    Point parameters_at(Complex t) const { return line_base_ + t * line_direction_; }

    Eigen::VectorXcd evaluate(const Point& x, Complex t) const {
        Workspace ws;
        Eigen::VectorXcd f;
        evaluate_all(ws, x, t, &f, nullptr, nullptr);
        return f;
    }

    Matrix jacobian_x(const Point& x, Complex t) const {
        Workspace ws;
        Matrix j;
        evaluate_all(ws, x, t, nullptr, &j, nullptr);
        return j;
    }

    Eigen::VectorXcd dF_dt(const Point& x, Complex t) const {
        Workspace ws;
        Eigen::VectorXcd ft;
        evaluate_all(ws, x, t, nullptr, nullptr, &ft);
        return ft;
    }

    /// Fills any non-null output from a single power table.
    void evaluate_all(Workspace& ws, const Point& x, Complex t, Eigen::VectorXcd* f, Matrix* jac,
                      Eigen::VectorXcd* ft) const {
        if (static_cast<std::size_t>(x.size()) != n_) throw DimensionError("point has wrong dimension");
        fill_powers(ws, x, t);
        const auto n = static_cast<Eigen::Index>(n_);
        if (f) {
            f->resize(n);
            for (Eigen::Index i = 0; i < n; ++i) (*f)[i] = compiled_f_[static_cast<std::size_t>(i)].evaluate(ws.powers, offsets_);
        }
        if (jac) {
            jac->resize(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    (*jac)(i, j) = compiled_jac_[static_cast<std::size_t>(i * n + j)].evaluate(ws.powers, offsets_);
        }
        if (ft) {
            ft->resize(n);
            for (Eigen::Index i = 0; i < n; ++i) (*ft)[i] = compiled_dt_[static_cast<std::size_t>(i)].evaluate(ws.powers, offsets_);
        }
    }

private:
    void compile() {
        const std::size_t vars = n_ + 1;
        std::vector<int> max_exp(vars, 0);
        auto track = [&](const Polynomial& p) {
            for (std::size_t v = 0; v < vars; ++v) max_exp[v] = std::max(max_exp[v], p.degree_in(v));
        };
        for (const auto& eq : equations_) {
            track(eq);
            compiled_f_.emplace_back(eq);
        }
        for (const auto& eq : equations_)
            for (std::size_t j = 0; j < n_; ++j) compiled_jac_.emplace_back(differentiate(eq, j));
        for (const auto& eq : equations_) compiled_dt_.emplace_back(differentiate(eq, n_));
        offsets_.resize(vars);
        max_exp_ = max_exp;
        std::size_t off = 0;
        for (std::size_t v = 0; v < vars; ++v) {
            offsets_[v] = off;
            off += static_cast<std::size_t>(max_exp[v]) + 1;
        }
        table_size_ = off;
    }

    void fill_powers(Workspace& ws, const Point& x, Complex t) const {
        ws.powers.resize(table_size_);
        for (std::size_t v = 0; v <= n_; ++v) {
            const Complex z = v < n_ ? x[static_cast<Eigen::Index>(v)] : t;
            Complex* row = ws.powers.data() + offsets_[v];
            row[0] = 1.0;
            for (int k = 1; k <= max_exp_[v]; ++k) row[k] = row[k - 1] * z;
        }
    }

    std::shared_ptr<const ParameterizedSystem> parent_;
    Point line_base_;
    Point line_direction_;
    std::vector<Polynomial> equations_;
    std::size_t n_ = 0;

    std::vector<detail::CompiledPolynomial> compiled_f_;
    std::vector<detail::CompiledPolynomial> compiled_jac_;  // row-major n x n
    std::vector<detail::CompiledPolynomial> compiled_dt_;
    std::vector<std::size_t> offsets_;
    std::vector<int> max_exp_;
    std::size_t table_size_ = 0;
};

/// Name used for the line coordinate; avoids clashing with a variable name.
inline std::string line_coordinate_name(const std::vector<std::string>& variables) {
    std::string name = "t";
    while (std::find(variables.begin(), variables.end(), name) != variables.end()) name += "_";
    return name;
}

/// Substitutes u = base + t * direction into every equation.
inline std::shared_ptr<const CurveSystem> restrict_to_line(std::shared_ptr<const ParameterizedSystem> system,
                                                           const Point& base, const Point& direction) {
    const auto m = system->num_parameters();
    const auto n = system->num_variables();
    if (static_cast<std::size_t>(base.size()) != m || static_cast<std::size_t>(direction.size()) != m)
        throw DimensionError("line base and direction must have one entry per parameter");
    if (m == 0 || direction.isZero(0.0)) throw std::invalid_argument("line direction must be nonzero");
    if (n != system->equations().size())
        throw DimensionError("system must be square in the solution variables");

    auto names = system->variables();
    names.push_back(line_coordinate_name(system->variables()));

    std::vector<Polynomial> images;
    images.reserve(n + m);
    for (std::size_t i = 0; i < n; ++i) images.push_back(Polynomial::variable(names, i));
    for (std::size_t j = 0; j < m; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        images.push_back(Polynomial::constant(names, base[jj]) + Polynomial::variable(names, n, direction[jj]));
    }

    std::vector<Polynomial> equations;
    equations.reserve(n);
    for (const auto& eq : system->equations()) equations.push_back(compose(eq, images, names));
    return std::make_shared<const CurveSystem>(std::move(system), base, direction, std::move(equations));
}

}  // namespace monodromy
