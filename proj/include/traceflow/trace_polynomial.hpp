// Trace polynomials: finite linear combinations of TraceMonomials over a
// coefficient ring chosen at compile time (exact rationals for the symbolic
// calculus, t-polynomials for heat evolution, double for numerics). Zero
// terms are pruned on every mutation.

#pragma once

#include "traceflow/rational.hpp"
#include "traceflow/tpoly.hpp"
#include "traceflow/trace_monomial.hpp"

#include <map>
#include <ostream>
#include <string>
#include <utility>

namespace traceflow {

template <class Coeff>
struct RingTraits;

template <>
struct RingTraits<Rational> {
    static constexpr const char* name = "rational";
    static bool is_zero(const Rational& c) { return c.is_zero(); }
    static Rational from_rational(const Rational& r) { return r; }
};

template <>
struct RingTraits<TPoly> {
    static constexpr const char* name = "tpoly";
    static bool is_zero(const TPoly& c) { return c.is_zero(); }
    static TPoly from_rational(const Rational& r) { return TPoly(r); }
};

template <>
struct RingTraits<double> {
    static constexpr const char* name = "float";
    static bool is_zero(double c) { return c == 0.0; }
    static double from_rational(const Rational& r) { return r.to_double(); }
};

template <class Coeff>
class TracePolynomial {
  public:
    using TermMap = std::map<TraceMonomial, Coeff>;

    TracePolynomial() = default;

    static TracePolynomial zero() { return {}; }
    static TracePolynomial term(TraceMonomial m, Coeff c) {
        TracePolynomial p;
        p.add_term(std::move(m), std::move(c));
        return p;
    }
    static TracePolynomial monomial(const TraceMonomial& m) {
        return term(m, RingTraits<Coeff>::from_rational(Rational(1)));
    }
    static TracePolynomial constant(Coeff c) { return term(TraceMonomial::identity(), std::move(c)); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_scalar() const {
        for (const auto& [m, c] : terms_) {
            if (!m.is_scalar()) return false;
        }
        return true;
    }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    Coeff coeff(const TraceMonomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Coeff{} : it->second;
    }

    void add_term(TraceMonomial m, Coeff c) {
        if (RingTraits<Coeff>::is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), std::move(c));
            return;
        }
        it->second = it->second + c;
        if (RingTraits<Coeff>::is_zero(it->second)) terms_.erase(it);
    }

    TracePolynomial& operator+=(const TracePolynomial& rhs) {
        for (const auto& [m, c] : rhs.terms_) add_term(m, c);
        return *this;
    }
    TracePolynomial& operator-=(const TracePolynomial& rhs) {
        for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
        return *this;
    }
    TracePolynomial& operator*=(const Coeff& s) {
        if (RingTraits<Coeff>::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c = c * s;
        prune();
        return *this;
    }

    friend TracePolynomial operator+(TracePolynomial a, const TracePolynomial& b) { return a += b; }
    friend TracePolynomial operator-(TracePolynomial a, const TracePolynomial& b) { return a -= b; }
    friend TracePolynomial operator-(const TracePolynomial& a) {
        TracePolynomial r;
        for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend TracePolynomial operator*(TracePolynomial p, const Coeff& s) { return p *= s; }
    friend TracePolynomial operator*(const Coeff& s, TracePolynomial p) { return p *= s; }

    // Bilinear extension of the monomial rule: untraced powers add, traced
    // multisets merge.
    friend TracePolynomial operator*(const TracePolynomial& a, const TracePolynomial& b) {
        TracePolynomial prod;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                prod.add_term(ma * mb, ca * cb);
            }
        }
        return prod;
    }

    friend bool operator==(const TracePolynomial& a, const TracePolynomial& b) {
        return a.terms_ == b.terms_;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + coeff_string(c) + ")";
            if (!m.is_identity()) out += " " + m.to_string();
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const TracePolynomial& p) {
        return os << p.to_string();
    }

  private:
    static std::string coeff_string(const Rational& c) { return c.to_string(); }
    static std::string coeff_string(const TPoly& c) { return c.to_string(); }
    static std::string coeff_string(double c) { return std::to_string(c); }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            it = RingTraits<Coeff>::is_zero(it->second) ? terms_.erase(it) : std::next(it);
        }
    }

    TermMap terms_;
};

// Termwise trace closure; linear.
template <class Coeff>
TracePolynomial<Coeff> trace_close(const TracePolynomial<Coeff>& p) {
    TracePolynomial<Coeff> out;
    for (const auto& [m, c] : p.terms()) out.add_term(m.trace_close(), c);
    return out;
}

// Evaluate every traced factor to 1: the monomial U^k Pi tr(U^l) maps to the
// bare power U^k. Collects by untraced power.
template <class Coeff>
std::map<int, Coeff> evaluate_traces_one(const TracePolynomial<Coeff>& p) {
    std::map<int, Coeff> by_power;
    for (const auto& [m, c] : p.terms()) {
        auto [it, inserted] = by_power.emplace(m.untraced_power(), c);
        if (!inserted) it->second = it->second + c;
    }
    for (auto it = by_power.begin(); it != by_power.end();) {
        it = RingTraits<Coeff>::is_zero(it->second) ? by_power.erase(it) : std::next(it);
    }
    return by_power;
}

inline TracePolynomial<TPoly> to_tpoly(const TracePolynomial<Rational>& p) {
    TracePolynomial<TPoly> out;
    for (const auto& [m, c] : p.terms()) out.add_term(m, TPoly(c));
    return out;
}

inline TracePolynomial<double> to_float(const TracePolynomial<Rational>& p) {
    TracePolynomial<double> out;
    for (const auto& [m, c] : p.terms()) out.add_term(m, c.to_double());
    return out;
}

// Numeric specialization of a t-polynomial-coefficient trace polynomial.
inline TracePolynomial<double> evaluate_at(const TracePolynomial<TPoly>& p, double t) {
    TracePolynomial<double> out;
    for (const auto& [m, c] : p.terms()) out.add_term(m, c.eval(t));
    return out;
}

inline TracePolynomial<Rational> evaluate_at(const TracePolynomial<TPoly>& p, const Rational& t) {
    TracePolynomial<Rational> out;
    for (const auto& [m, c] : p.terms()) out.add_term(m, c.eval(t));
    return out;
}

}  // namespace traceflow
