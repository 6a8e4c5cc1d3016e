// Symbolic Laplacian on trace polynomials.
//
// laplacian_power / laplacian_traced_power are the exact finite-N formulas
// for a single power (their coefficients carry no N when written in the
// normalized trace). laplacian_leading drops the O(1/N^2) cross terms and
// applies the factor-sum rule, which is the large-N generator.

#pragma once

#include "traceflow/trace_polynomial.hpp"

#include <stdexcept>

namespace traceflow {

// Laplacian of U^k: -k U^k - 2 sum_{m=1}^{k-1} m U^m tr(U^{k-m}).
inline TracePolynomial<Rational> laplacian_power(int k) {
    if (k < 1) {
        throw std::domain_error("laplacian_power requires k >= 1");
    }
    TracePolynomial<Rational> out;
    out.add_term(TraceMonomial::power(k), Rational(-k));
    for (int m = 1; m < k; ++m) {
        out.add_term(TraceMonomial::canonicalize(m, {k - m}), Rational(-2 * m));
    }
    return out;
}

// Laplacian of tr(U^k): -k tr(U^k) - 2 sum_{m=1}^{k-1} m tr(U^m) tr(U^{k-m}).
inline TracePolynomial<Rational> laplacian_traced_power(int k) {
    if (k < 1) {
        throw std::domain_error("laplacian_traced_power requires k >= 1");
    }
    TracePolynomial<Rational> out;
    out.add_term(TraceMonomial::traced_power(k), Rational(-k));
    for (int m = 1; m < k; ++m) {
        out.add_term(TraceMonomial::canonicalize(0, {m, k - m}), Rational(-2 * m));
    }
    return out;
}

// Factor-sum (first-order) rule on a single canonical monomial: apply the
// Laplacian to one factor at a time and keep the others. Degree-preserving.
inline TracePolynomial<Rational> laplacian_leading(const TraceMonomial& m) {
    TracePolynomial<Rational> out;
    const int k = m.untraced_power();
    const auto& traces = m.traced_powers();

    if (k > 0) {
        const auto rest = TraceMonomial::canonicalize(0, traces);
        out += laplacian_power(k) * TracePolynomial<Rational>::monomial(rest);
    }
    for (std::size_t i = 0; i < traces.size(); ++i) {
        if (i > 0 && traces[i] == traces[i - 1]) continue;  // handled with multiplicity below
        int multiplicity = 0;
        for (int l : traces) multiplicity += (l == traces[i]);
        std::vector<int> remaining = traces;
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
        const auto rest = TraceMonomial::canonicalize(k, std::move(remaining));
        out += Rational(multiplicity) *
               (laplacian_traced_power(traces[i]) * TracePolynomial<Rational>::monomial(rest));
    }
    return out;
}

// Linear extension to polynomials over any coefficient ring.
template <class Coeff>
TracePolynomial<Coeff> laplacian_leading(const TracePolynomial<Coeff>& p) {
    TracePolynomial<Coeff> out;
    for (const auto& [m, c] : p.terms()) {
        const auto lap = laplacian_leading(m);
        for (const auto& [dm, dc] : lap.terms()) {
            out.add_term(dm, c * RingTraits<Coeff>::from_rational(dc));
        }
    }
    return out;
}

}  // namespace traceflow
