// Canonical monomial U^k tr(U^{l1}) ... tr(U^{lM}).
//
// The untraced power k is collected into a single exponent and the traced
// powers are kept as a descending-sorted multiset, so two monomials are equal
// exactly when their fields are equal. Negative (Laurent) powers are rejected.

#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace traceflow {

class TraceMonomial {
  public:
    TraceMonomial() = default;  // multiplicative identity: k = 0, no traces

    static TraceMonomial canonicalize(int untraced_power, std::vector<int> traced_powers) {
        if (untraced_power < 0) {
            throw std::domain_error("untraced power must be non-negative (Laurent terms unsupported)");
        }
        for (int l : traced_powers) {
            if (l < 1) {
                throw std::domain_error("traced powers must be positive (Laurent terms unsupported)");
            }
        }
        std::sort(traced_powers.begin(), traced_powers.end(), std::greater<>());
        TraceMonomial m;
        m.untraced_ = untraced_power;
        m.traced_ = std::move(traced_powers);
        return m;
    }

    static TraceMonomial identity() { return TraceMonomial{}; }
    static TraceMonomial power(int k) { return canonicalize(k, {}); }
    static TraceMonomial traced_power(int l) { return canonicalize(0, {l}); }

    int untraced_power() const { return untraced_; }
    const std::vector<int>& traced_powers() const { return traced_; }

    int degree() const {
        return untraced_ + std::accumulate(traced_.begin(), traced_.end(), 0);
    }

    // Number of tensor factors: the untraced block counts as one when present.
    int factor_count() const {
        return (untraced_ > 0 ? 1 : 0) + static_cast<int>(traced_.size());
    }

    bool is_identity() const { return untraced_ == 0 && traced_.empty(); }
    bool is_scalar() const { return untraced_ == 0; }

    // Close the trace: U^k tr(...) -> tr(U^k) tr(...). The identity is fixed
    // since tr(I) = 1 under the normalized trace.
    TraceMonomial trace_close() const {
        if (untraced_ == 0) return *this;
        std::vector<int> traces = traced_;
        traces.push_back(untraced_);
        return canonicalize(0, std::move(traces));
    }

    friend TraceMonomial operator*(const TraceMonomial& a, const TraceMonomial& b) {
        std::vector<int> traces = a.traced_;
        traces.insert(traces.end(), b.traced_.begin(), b.traced_.end());
        return canonicalize(a.untraced_ + b.untraced_, std::move(traces));
    }

    friend bool operator==(const TraceMonomial& a, const TraceMonomial& b) = default;

    // Ordering used both for term storage and for block bases: ascending
    // factor count, then lexicographic on (k, traced powers).
    friend std::strong_ordering operator<=>(const TraceMonomial& a, const TraceMonomial& b) {
        if (auto c = a.factor_count() <=> b.factor_count(); c != 0) return c;
        if (auto c = a.untraced_ <=> b.untraced_; c != 0) return c;
        return std::lexicographical_compare_three_way(a.traced_.begin(), a.traced_.end(),
                                                      b.traced_.begin(), b.traced_.end());
    }

    std::string to_string() const {
        if (is_identity()) return "1";
        std::string out;
        if (untraced_ == 1) out = "U";
        if (untraced_ > 1) out = "U^" + std::to_string(untraced_);
        for (int l : traced_) {
            if (!out.empty()) out += " ";
            out += l == 1 ? "tr(U)" : "tr(U^" + std::to_string(l) + ")";
        }
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const TraceMonomial& m) {
        return os << m.to_string();
    }

  private:
    int untraced_ = 0;
    std::vector<int> traced_;
};

}  // namespace traceflow
