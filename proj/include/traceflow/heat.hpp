// Exact heat semigroup e^{t*Lap/2} at leading order in N, block by homogeneous
// degree, and the limit transform pipeline on single-variable polynomials:
// heat-evolve, extend to the complexified variable, evaluate traces to one.
//
// The generator preserves degree, so each block matrix is -d*I + L with L
// strictly lower triangular in factor-count order. The exponential is the
// finite nilpotent series, giving exact t-polynomial coefficients under an
// implicit e^{-d t/2} prefactor.

#pragma once

#include "traceflow/laplacian.hpp"
#include "traceflow/trace_polynomial.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace traceflow {

inline constexpr int kDefaultDegreeCap = 24;

struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class VariableDomain { unitary, complexified };

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

struct HomogeneousBlock {
    int degree = 0;
    std::vector<TraceMonomial> basis;  // ascending factor count, ties lexicographic
    RationalMatrix generator;          // columns expand laplacian_leading(basis[j])

    int index_of(const TraceMonomial& m) const {
        auto it = index_.find(m);
        return it == index_.end() ? -1 : it->second;
    }

    RationalVector coordinates(const TracePolynomial<Rational>& p) const {
        RationalVector v = RationalVector::Constant(static_cast<Eigen::Index>(basis.size()), Rational(0));
        for (const auto& [m, c] : p.terms()) {
            const int i = index_of(m);
            if (i < 0) throw std::invalid_argument("polynomial not supported on block basis");
            v(i) = c;
        }
        return v;
    }

    friend HomogeneousBlock build_block(const std::vector<TraceMonomial>& seeds, int degree_cap);

  private:
    std::map<TraceMonomial, int> index_;
};

// Closure of the seeds under the leading-order Laplacian. All seeds must share
// one homogeneous degree.
inline HomogeneousBlock build_block(const std::vector<TraceMonomial>& seeds, int degree_cap = kDefaultDegreeCap) {
    if (seeds.empty()) throw std::invalid_argument("build_block needs at least one seed");
    const int degree = seeds.front().degree();
    for (const auto& s : seeds) {
        if (s.degree() != degree) throw std::invalid_argument("block seeds must share one degree");
    }
    if (degree > degree_cap) {
        throw ResourceLimitError("degree " + std::to_string(degree) + " exceeds cap " +
                                 std::to_string(degree_cap));
    }

    std::set<TraceMonomial> reached(seeds.begin(), seeds.end());
    std::deque<TraceMonomial> frontier(seeds.begin(), seeds.end());
    while (!frontier.empty()) {
        const TraceMonomial m = frontier.front();
        frontier.pop_front();
        const auto lap = laplacian_leading(m);
        for (const auto& [image, c] : lap.terms()) {
            if (reached.insert(image).second) frontier.push_back(image);
        }
    }

    HomogeneousBlock block;
    block.degree = degree;
    block.basis.assign(reached.begin(), reached.end());  // set order == block order
    const auto n = static_cast<Eigen::Index>(block.basis.size());
    for (Eigen::Index i = 0; i < n; ++i) block.index_[block.basis[static_cast<std::size_t>(i)]] = static_cast<int>(i);

    block.generator = RationalMatrix::Constant(n, n, Rational(0));
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto lap = laplacian_leading(block.basis[static_cast<std::size_t>(j)]);
        for (const auto& [image, c] : lap.terms()) {
            block.generator(block.index_.at(image), j) = c;
        }
    }
    return block;
}

inline HomogeneousBlock build_block(const TraceMonomial& seed, int degree_cap = kDefaultDegreeCap) {
    return build_block(std::vector<TraceMonomial>{seed}, degree_cap);
}

// Heat-evolved homogeneous component: body has t-polynomial coefficients and
// an implicit scalar prefactor e^{-degree*t/2}.
struct HeatPolynomial {
    int degree = 0;
    VariableDomain domain = VariableDomain::unitary;
    TracePolynomial<TPoly> body;

    TracePolynomial<Rational> at_zero() const { return evaluate_exact(Rational(0)); }

    TracePolynomial<Rational> evaluate_exact(const Rational& t) const {
        // t-polynomial part only; the e^{-d t/2} prefactor is transcendental.
        return evaluate_at(body, t);
    }

    TracePolynomial<double> evaluate(double t) const {
        const double prefactor = std::exp(-0.5 * degree * t);
        TracePolynomial<double> out;
        for (const auto& [m, c] : body.terms()) out.add_term(m, prefactor * c.eval(t));
        return out;
    }

    std::string to_string() const {
        const std::string var = domain == VariableDomain::unitary ? "U" : "Z";
        std::string out = "e^(-" + std::to_string(degree) + "t/2)·{ ";
        std::string terms;
        for (const auto& [m, c] : body.terms()) {
            if (!terms.empty()) terms += " + ";
            terms += "(" + c.to_string() + ")";
            if (!m.is_identity()) {
                std::string ms = m.to_string();
                if (domain == VariableDomain::complexified) {
                    for (auto& ch : ms) {
                        if (ch == 'U') ch = 'Z';
                    }
                }
                terms += " " + ms;
            }
        }
        return out + (terms.empty() ? "0" : terms) + " }";
    }
};

// e^{t*Lap/2} on an exact-rational trace polynomial, one HeatPolynomial per
// homogeneous degree present, ascending. Exact: the nilpotent series
// e^{tG/2} = e^{-dt/2} sum_j (t/2)^j L^j / j! terminates within the block.
inline std::vector<HeatPolynomial> heat_apply(const TracePolynomial<Rational>& p,
                                              int degree_cap = kDefaultDegreeCap) {
    std::map<int, TracePolynomial<Rational>> by_degree;
    for (const auto& [m, c] : p.terms()) by_degree[m.degree()].add_term(m, c);

    std::vector<HeatPolynomial> out;
    for (const auto& [degree, component] : by_degree) {
        std::vector<TraceMonomial> seeds;
        for (const auto& [m, c] : component.terms()) seeds.push_back(m);
        const HomogeneousBlock block = build_block(seeds, degree_cap);
        const auto n = static_cast<Eigen::Index>(block.basis.size());

        const RationalMatrix nilpotent =
            block.generator + Rational(degree) * RationalMatrix::Identity(n, n);

        std::vector<TPoly> coeffs(static_cast<std::size_t>(n));
        RationalVector power = block.coordinates(component);  // L^0 v
        Rational weight(1);                                   // 1 / (j! 2^j)
        for (Eigen::Index j = 0; j < n; ++j) {
            bool any = false;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (power(i).is_zero()) continue;
                coeffs[static_cast<std::size_t>(i)] += TPoly::monomial(weight * power(i), static_cast<int>(j));
                any = true;
            }
            if (!any) break;  // nilpotency reached
            power = (nilpotent * power).eval();
            weight = weight / Rational(2 * (static_cast<long long>(j) + 1));
        }

        HeatPolynomial h;
        h.degree = degree;
        for (Eigen::Index i = 0; i < n; ++i) {
            h.body.add_term(block.basis[static_cast<std::size_t>(i)], coeffs[static_cast<std::size_t>(i)]);
        }
        out.push_back(std::move(h));
    }
    return out;
}

// Replace the unitary variable with the complexified one. The coefficients
// are untouched; only the domain tag flips so downstream evaluation picks the
// invertible-matrix conventions.
inline HeatPolynomial holomorphic_extend(HeatPolynomial h) {
    h.domain = VariableDomain::complexified;
    return h;
}

// A single-variable polynomial whose coefficients are grouped by the
// homogeneous degree they came from, each group under its e^{-d t/2} factor.
struct SingleVariablePolynomial {
    struct DegreeComponent {
        int degree = 0;                     // prefactor e^{-degree*t/2}
        std::map<int, TPoly> coeffs_by_power;
    };
    std::vector<DegreeComponent> components;  // ascending degree

    int max_power() const {
        int p = 0;
        for (const auto& comp : components) {
            for (const auto& [power, c] : comp.coeffs_by_power) p = std::max(p, power);
        }
        return p;
    }

    std::map<int, double> evaluate(double t) const {
        std::map<int, double> out;
        for (const auto& comp : components) {
            const double prefactor = std::exp(-0.5 * comp.degree * t);
            for (const auto& [power, c] : comp.coeffs_by_power) {
                out[power] += prefactor * c.eval(t);
            }
        }
        return out;
    }

    std::string to_string() const {
        if (components.empty()) return "0";
        std::string out;
        for (const auto& comp : components) {
            if (!out.empty()) out += " + ";
            out += "e^(-" + std::to_string(comp.degree) + "t/2)·[ ";
            std::string terms;
            for (auto it = comp.coeffs_by_power.rbegin(); it != comp.coeffs_by_power.rend(); ++it) {
                if (!terms.empty()) terms += " + ";
                terms += "(" + it->second.to_string() + ")";
                if (it->first == 1) terms += " z";
                if (it->first > 1) terms += " z^" + std::to_string(it->first);
            }
            out += terms + " ]";
        }
        return out;
    }
};

// Evaluate every factor tr(Z^l) to 1 in a complexified heat polynomial.
inline SingleVariablePolynomial::DegreeComponent evaluate_traces_one(const HeatPolynomial& h) {
    if (h.domain != VariableDomain::complexified) {
        throw std::invalid_argument("trace evaluation expects the complexified domain");
    }
    SingleVariablePolynomial::DegreeComponent comp;
    comp.degree = h.degree;
    comp.coeffs_by_power = evaluate_traces_one(h.body);
    return comp;
}

// Large-N limit of the boosted transform on p(u) = sum_j coeffs[j] u^j:
// heat-evolve, holomorphically extend, evaluate traces to one.
inline SingleVariablePolynomial free_hall_transform(const std::vector<Rational>& coeffs,
                                                    int degree_cap = kDefaultDegreeCap) {
    TracePolynomial<Rational> p;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        p.add_term(TraceMonomial::power(static_cast<int>(j)), coeffs[j]);
    }
    SingleVariablePolynomial q;
    for (auto& h : heat_apply(p, degree_cap)) {
        q.components.push_back(evaluate_traces_one(holomorphic_extend(std::move(h))));
    }
    return q;
}

// Limit moment nu_k(t) of tr(U^k) under the heat kernel: the heat-evolved
// scalar monomial with every trace evaluated to 1 (evaluation at the
// identity). Value is e^{-k t/2} * poly(t) with deg(poly) <= k-1.
struct MomentFunction {
    int k = 0;
    TPoly poly;
    double value(double t) const { return std::exp(-0.5 * k * t) * poly.eval(t); }
};

inline MomentFunction moment_nu(int k, int degree_cap = kDefaultDegreeCap) {
    if (k < 1) throw std::domain_error("moment_nu requires k >= 1");
    const auto heat = heat_apply(TracePolynomial<Rational>::monomial(TraceMonomial::traced_power(k)), degree_cap);
    const auto by_power = evaluate_traces_one(heat.front().body);
    MomentFunction nu;
    nu.k = k;
    if (!by_power.empty()) nu.poly = by_power.begin()->second;
    return nu;
}

// Numeric propagator e^{time*G/2} of a block, prefactor included. Used for
// semigroup checks; exact nilpotent series evaluated in double arithmetic.
inline Eigen::MatrixXd heat_propagator(const HomogeneousBlock& block, double time) {
    const auto n = static_cast<Eigen::Index>(block.basis.size());
    Eigen::MatrixXd nilpotent(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            nilpotent(i, j) = block.generator(i, j).to_double();
        }
    }
    nilpotent += block.degree * Eigen::MatrixXd::Identity(n, n);

    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index j = 1; j < n; ++j) {
        term = (0.5 * time / static_cast<double>(j)) * (nilpotent * term).eval();
        if (term.isZero(0.0)) break;
        sum += term;
    }
    return std::exp(-0.5 * block.degree * time) * sum;
}

}  // namespace traceflow
