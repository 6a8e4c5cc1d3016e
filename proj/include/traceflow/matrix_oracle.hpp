// Exact finite-N differential calculus on matrix-valued trace-polynomial
// functions. The Laplacian at a point is the brute-force sum of second
// directional derivatives over an orthonormal basis of u(N) for the scaled
// inner product <X,Y> = N Trace(X* Y); derivatives are computed by algebraic
// insertion, not finite differencing, so identity residuals sit at roundoff.

#pragma once

#include "traceflow/rng.hpp"
#include "traceflow/serialization.hpp"
#include "traceflow/trace_polynomial.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace traceflow {

using Matrix = Eigen::MatrixXcd;

enum class GroupTag { unitary, general_linear };

struct MatrixPoint {
    Matrix value;
    GroupTag domain = GroupTag::unitary;

    int size() const { return static_cast<int>(value.rows()); }
};

inline std::complex<double> normalized_trace(const Matrix& a) {
    return a.trace() / static_cast<double>(a.rows());
}

// Norm from the normalized trace, ||A||^2 = tr(A* A); the identity has norm 1.
inline double tr_norm(const Matrix& a) {
    return a.norm() / std::sqrt(static_cast<double>(a.rows()));
}

inline double relative_residual(const Matrix& actual, const Matrix& expected) {
    return tr_norm(actual - expected) / tr_norm(expected);
}

inline double unitarity_defect(const Matrix& u) {
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

// Orthonormal basis of u(N): i E_jj / sqrt(N) together with
// (E_jk - E_kj) / sqrt(2N) and i (E_jk + E_kj) / sqrt(2N) for j < k.
std::vector<Matrix> lie_onb(int n);

// Haar-like random unitary: QR of a complex Gaussian matrix with the phases
// of the R diagonal absorbed into Q.
MatrixPoint random_unitary(int n, GaussianStream& rng);

Matrix eval_monomial(const TraceMonomial& m, const MatrixPoint& p);
Matrix eval_polynomial(const TracePolynomial<double>& poly, const MatrixPoint& p);

// d^2/ds^2 m(P e^{sX}) at s = 0, by exact insertion of X into every factor
// slot (two-term Leibniz rule across factors).
Matrix second_directional(const TraceMonomial& m, const Matrix& x, const MatrixPoint& p);

// Exact finite-N Laplacian at a point: sum of second_directional over the
// full u(N) basis. Contributions are combined by a fixed binary tree so the
// result is identical for any worker count.
Matrix laplacian_exact(const TraceMonomial& m, const MatrixPoint& p, int threads = 1);

// Defect of the first-order product rule: Lap(fg) - Lap(f) g - f Lap(g) at a
// point, for scalar g.
Matrix product_rule_defect(const TraceMonomial& f, const TraceMonomial& g, const MatrixPoint& p,
                           int threads = 1);

struct ResidualReport {
    std::string identity;
    int k = 0;
    int l = 0;
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> residuals;
    double max_residual = 0.0;
};

Json json_of(const ResidualReport& report);

enum class IdentitySuite { power_formula, traced_power_formula, eigenrelation, cross_term };

IdentitySuite identity_suite_from_name(const std::string& name);
std::string identity_suite_name(IdentitySuite suite);

// Compares laplacian_exact against the symbolic right-hand side at `trials`
// random unitary points; records the relative residual of each trial.
ResidualReport verify_identity(IdentitySuite suite, int k, int l, int n, int trials,
                               std::uint64_t seed, int threads = 1);

struct ScalingFit {
    std::vector<int> sizes;
    std::vector<double> mean_defects;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
};

// Mean product-rule defect norm per matrix size with a log-log slope fit;
// the defect scales like 1/N^2.
ScalingFit product_rule_scaling(const TraceMonomial& f, const TraceMonomial& g,
                                const std::vector<int>& sizes, int trials, std::uint64_t seed,
                                int threads = 1);

Json json_of(const ScalingFit& fit);

// Ordinary least squares for y = intercept + slope * x with the usual
// standard error of the slope.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace traceflow
