// Univariate polynomials in the formal diffusion time t, with exact rational
// coefficients. Coefficients are stored by ascending power with no trailing
// zeros, so equality is coefficient-wise.

#pragma once

#include "traceflow/rational.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

namespace traceflow {

class TPoly {
  public:
    TPoly() = default;
    TPoly(Rational constant) {  // NOLINT: implicit by design
        if (!constant.is_zero()) {
            coeffs_.push_back(std::move(constant));
        }
    }
    TPoly(long long constant) : TPoly(Rational(constant)) {}  // NOLINT
    explicit TPoly(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) { trim(); }

    // The monomial c * t^power.
    static TPoly monomial(Rational c, int power) {
        if (c.is_zero()) return TPoly{};
        std::vector<Rational> v(static_cast<std::size_t>(power) + 1, Rational(0));
        v.back() = std::move(c);
        return TPoly(std::move(v));
    }
    static TPoly variable() { return monomial(Rational(1), 1); }

    bool is_zero() const { return coeffs_.empty(); }
    // Degree of the zero polynomial is reported as -1.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    const Rational& coeff(int power) const {
        static const Rational kZero(0);
        if (power < 0 || power >= static_cast<int>(coeffs_.size())) return kZero;
        return coeffs_[static_cast<std::size_t>(power)];
    }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Rational eval(const Rational& t) const {
        Rational acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * t + *it;
        }
        return acc;
    }
    double eval(double t) const {
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc = acc * t + it->to_double();
        }
        return acc;
    }

    TPoly& operator+=(const TPoly& rhs) {
        if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
        for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
        trim();
        return *this;
    }
    TPoly& operator-=(const TPoly& rhs) {
        if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Rational(0));
        for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
        trim();
        return *this;
    }
    TPoly& operator*=(const TPoly& rhs) { return *this = *this * rhs; }

    friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
    friend TPoly operator-(TPoly a, const TPoly& b) { return a -= b; }
    friend TPoly operator-(const TPoly& a) {
        TPoly r = a;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    friend TPoly operator*(const TPoly& a, const TPoly& b) {
        if (a.is_zero() || b.is_zero()) return TPoly{};
        std::vector<Rational> prod(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                prod[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return TPoly(std::move(prod));
    }
    friend TPoly operator*(const Rational& s, const TPoly& p) { return TPoly(s) * p; }
    friend TPoly operator*(const TPoly& p, const Rational& s) { return TPoly(s) * p; }

    friend bool operator==(const TPoly& a, const TPoly& b) { return a.coeffs_ == b.coeffs_; }

    // Display form, e.g. "1 - 3t + 3/2t^2".
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const Rational& c = coeffs_[i];
            if (c.is_zero()) continue;
            const Rational mag = abs(c);
            if (out.empty()) {
                if (c.num() < 0) out += "-";
            } else {
                out += c.num() < 0 ? " - " : " + ";
            }
            const bool unit = (mag == Rational(1)) && i > 0;
            if (!unit) out += mag.to_string();
            if (i == 1) out += "t";
            if (i > 1) out += "t^" + std::to_string(i);
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const TPoly& p) { return os << p.to_string(); }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

}  // namespace traceflow
