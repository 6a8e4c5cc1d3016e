// JSON wire formats. Rational coefficients travel as decimal strings so the
// exact paths never round-trip through floating point; t-polynomials are
// arrays of rationals by ascending power of t.

#pragma once

#include "traceflow/heat.hpp"
#include "traceflow/trace_polynomial.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <variant>

namespace traceflow {

using Json = nlohmann::ordered_json;

inline Json json_of(const Rational& r) {
    return Json{{"num", r.num().str()}, {"den", r.den().str()}};
}

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (!j.is_object() || !j.contains("num") || !j.contains("den")) {
        throw std::invalid_argument("rational JSON must be {\"num\":...,\"den\":...}");
    }
    return Rational(BigInt(j.at("num").get<std::string>()), BigInt(j.at("den").get<std::string>()));
}

inline Json json_of(const TPoly& p) {
    Json arr = Json::array();
    for (const auto& c : p.coeffs()) arr.push_back(json_of(c));
    return arr;
}

inline TPoly tpoly_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("t-polynomial JSON must be an array of rationals");
    std::vector<Rational> coeffs;
    coeffs.reserve(j.size());
    for (const auto& c : j) coeffs.push_back(rational_from_json(c));
    return TPoly(std::move(coeffs));
}

namespace detail {
inline Json coeff_json(const Rational& c) { return json_of(c); }
inline Json coeff_json(const TPoly& c) { return json_of(c); }
inline Json coeff_json(double c) { return c; }

inline void coeff_from_json(const Json& j, Rational& out) { out = rational_from_json(j); }
inline void coeff_from_json(const Json& j, TPoly& out) { out = tpoly_from_json(j); }
inline void coeff_from_json(const Json& j, double& out) { out = j.get<double>(); }
}  // namespace detail

template <class Coeff>
Json json_of(const TracePolynomial<Coeff>& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json term;
        term["k"] = m.untraced_power();
        term["traces"] = m.traced_powers();
        term["coeff"] = detail::coeff_json(c);
        terms.push_back(std::move(term));
    }
    return Json{{"ring", RingTraits<Coeff>::name}, {"terms", std::move(terms)}};
}

template <class Coeff>
TracePolynomial<Coeff> trace_polynomial_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("terms")) {
        throw std::invalid_argument("trace polynomial JSON must have a terms array");
    }
    if (j.contains("ring") && j.at("ring").get<std::string>() != RingTraits<Coeff>::name) {
        throw std::invalid_argument("trace polynomial ring mismatch: expected " +
                                    std::string(RingTraits<Coeff>::name));
    }
    TracePolynomial<Coeff> p;
    for (const auto& term : j.at("terms")) {
        const auto m = TraceMonomial::canonicalize(term.at("k").get<int>(),
                                                   term.at("traces").get<std::vector<int>>());
        Coeff c{};
        detail::coeff_from_json(term.at("coeff"), c);
        p.add_term(m, std::move(c));
    }
    return p;
}

// Runtime-tagged polynomial for the JSON/CLI boundary.
using AnyTracePolynomial =
    std::variant<TracePolynomial<Rational>, TracePolynomial<TPoly>, TracePolynomial<double>>;

inline std::string ring_name(const AnyTracePolynomial& p) {
    return std::visit([](const auto& q) {
        return std::string(RingTraits<typename std::decay_t<decltype(q)>::TermMap::mapped_type>::name);
    }, p);
}

inline AnyTracePolynomial any_trace_polynomial_from_json(const Json& j) {
    const std::string ring = j.is_object() && j.contains("ring") ? j.at("ring").get<std::string>() : "rational";
    if (ring == "rational") return trace_polynomial_from_json<Rational>(j);
    if (ring == "tpoly") return trace_polynomial_from_json<TPoly>(j);
    if (ring == "float") return trace_polynomial_from_json<double>(j);
    throw std::invalid_argument("unknown coefficient ring '" + ring + "'");
}

inline Json json_of(const AnyTracePolynomial& p) {
    return std::visit([](const auto& q) { return json_of(q); }, p);
}

// Same-ring combination helpers for the runtime-tagged boundary.
inline AnyTracePolynomial multiply(const AnyTracePolynomial& a, const AnyTracePolynomial& b) {
    if (a.index() != b.index()) {
        throw std::invalid_argument("cannot multiply trace polynomials over different coefficient rings (" +
                                    ring_name(a) + " vs " + ring_name(b) + ")");
    }
    return std::visit([&b](const auto& lhs) -> AnyTracePolynomial {
        return lhs * std::get<std::decay_t<decltype(lhs)>>(b);
    }, a);
}

inline AnyTracePolynomial add(const AnyTracePolynomial& a, const AnyTracePolynomial& b) {
    if (a.index() != b.index()) {
        throw std::invalid_argument("cannot add trace polynomials over different coefficient rings (" +
                                    ring_name(a) + " vs " + ring_name(b) + ")");
    }
    return std::visit([&b](const auto& lhs) -> AnyTracePolynomial {
        return lhs + std::get<std::decay_t<decltype(lhs)>>(b);
    }, a);
}

inline Json json_of(const HeatPolynomial& h) {
    return Json{{"degree", h.degree},
                {"prefactor_halfrate", h.degree},
                {"domain", h.domain == VariableDomain::unitary ? "unitary" : "complexified"},
                {"body", json_of(h.body)}};
}

inline HeatPolynomial heat_polynomial_from_json(const Json& j) {
    HeatPolynomial h;
    h.degree = j.at("degree").get<int>();
    h.domain = j.at("domain").get<std::string>() == "unitary" ? VariableDomain::unitary
                                                              : VariableDomain::complexified;
    h.body = trace_polynomial_from_json<TPoly>(j.at("body"));
    return h;
}

inline Json json_of(const SingleVariablePolynomial& q) {
    Json comps = Json::array();
    for (const auto& comp : q.components) {
        Json powers = Json::object();
        // descending powers, matching the display convention
        for (auto it = comp.coeffs_by_power.rbegin(); it != comp.coeffs_by_power.rend(); ++it) {
            powers[std::to_string(it->first)] = json_of(it->second);
        }
        comps.push_back(Json{{"d", comp.degree},
                             {"prefactor_halfrate", comp.degree},
                             {"coeffs_by_power", std::move(powers)}});
    }
    return Json{{"degree_components", std::move(comps)}};
}

inline SingleVariablePolynomial single_variable_polynomial_from_json(const Json& j) {
    SingleVariablePolynomial q;
    for (const auto& cj : j.at("degree_components")) {
        SingleVariablePolynomial::DegreeComponent comp;
        comp.degree = cj.at("d").get<int>();
        for (const auto& [key, value] : cj.at("coeffs_by_power").items()) {
            comp.coeffs_by_power[std::stoi(key)] = tpoly_from_json(value);
        }
        q.components.push_back(std::move(comp));
    }
    return q;
}

}  // namespace traceflow
