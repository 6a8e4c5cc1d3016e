// Exact rational scalar for the symbolic layer.
//
// Thin value type over boost::multiprecision::cpp_int with a canonical form
// (lowest terms, positive denominator). Usable as an Eigen matrix scalar via
// the NumTraits specialization at the bottom of this header.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace traceflow {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}      // NOLINT: implicit by design
    Rational(const BigInt& n) : num_(n), den_(1) {}  // NOLINT
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

    // Accepts "p", "p/q", or a plain decimal like "-0.25", arbitrary
    // precision, always exact.
    static Rational parse(std::string_view text) {
        const auto slash = text.find('/');
        try {
            if (slash != std::string_view::npos) {
                BigInt num{std::string(text.substr(0, slash))};
                BigInt den{std::string(text.substr(slash + 1))};
                return Rational(std::move(num), std::move(den));
            }
            const auto dot = text.find('.');
            if (dot == std::string_view::npos) {
                return Rational(BigInt(std::string(text)));
            }
            std::string digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
            const auto places = text.size() - dot - 1;
            if (digits.empty() || digits == "-" || digits == "+") throw std::runtime_error("empty");
            BigInt den(1);
            for (std::size_t i = 0; i < places; ++i) den *= 10;
            return Rational(BigInt(digits), std::move(den));
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
        }
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    double to_double() const {
        return num_.convert_to<double>() / den_.convert_to<double>();
    }

    std::string to_string() const {
        std::string s = num_.str();
        if (den_ != 1) {
            s += "/" + den_.str();
        }
        return s;
    }

    Rational& operator+=(const Rational& rhs) {
        num_ = num_ * rhs.den_ + rhs.num_ * den_;
        den_ *= rhs.den_;
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& rhs) {
        num_ = num_ * rhs.den_ - rhs.num_ * den_;
        den_ *= rhs.den_;
        normalize();
        return *this;
    }
    Rational& operator*=(const Rational& rhs) {
        num_ *= rhs.num_;
        den_ *= rhs.den_;
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& rhs) {
        if (rhs.num_ == 0) {
            throw std::domain_error("rational division by zero");
        }
        num_ *= rhs.den_;
        den_ *= rhs.num_;
        normalize();
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_, Canonical{}); }

    // Canonical form makes equality a field-by-field comparison.
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const BigInt lhs = a.num_ * b.den_;
        const BigInt rhs = b.num_ * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.to_string();
    }

  private:
    struct Canonical {};
    Rational(BigInt num, BigInt den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}

    void normalize() {
        if (den_ == 0) {
            throw std::domain_error("rational with zero denominator");
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

inline Rational abs(const Rational& r) {
    return r.num() < 0 ? -r : r;
}

inline Rational pow(const Rational& base, int exponent) {
    if (exponent < 0) {
        return Rational(1) / pow(base, -exponent);
    }
    Rational acc(1);
    Rational b = base;
    int e = exponent;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline Rational factorial(int n) {
    BigInt acc(1);
    for (int i = 2; i <= n; ++i) acc *= i;
    return Rational(acc);
}

inline Rational binomial(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    BigInt acc(1);
    for (int i = 0; i < k; ++i) {
        acc *= (n - i);
        acc /= (i + 1);
    }
    return Rational(acc);
}

}  // namespace traceflow

namespace Eigen {

template <>
struct NumTraits<traceflow::Rational> : GenericNumTraits<traceflow::Rational> {
    using Real = traceflow::Rational;
    using NonInteger = traceflow::Rational;
    using Nested = traceflow::Rational;
    using Literal = long long;

    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 60,
        MulCost = 40,
    };
};

}  // namespace Eigen
