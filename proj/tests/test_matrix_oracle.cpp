#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "traceflow/laplacian.hpp"
#include "traceflow/matrix_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <complex>

using namespace traceflow;

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Central second difference of m(P e^{sX}) at s = 0; the independent check on
// the algebraic insertion formula.
Matrix finite_difference_second(const TraceMonomial& m, const Matrix& x, const MatrixPoint& p,
                                double step) {
    const Matrix forward = (step * x).exp();
    const Matrix backward = (-step * x).exp();
    const MatrixPoint plus{p.value * forward, p.domain};
    const MatrixPoint minus{p.value * backward, p.domain};
    return (eval_monomial(m, plus) - 2.0 * eval_monomial(m, p) + eval_monomial(m, minus)) /
           (step * step);
}

}  // namespace

TEST_CASE("lie basis") {
    const auto basis1 = lie_onb(1);
    REQUIRE(basis1.size() == 1);
    CHECK(std::abs(basis1[0](0, 0) - kI) < 1e-15);

    for (int n : {2, 3, 4, 5}) {
        const auto basis = lie_onb(n);
        CHECK(basis.size() == static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (std::size_t a = 0; a < basis.size(); ++a) {
            CHECK((basis[a].adjoint() + basis[a]).norm() == 0.0);  // exactly skew-Hermitian
            for (std::size_t b = 0; b < basis.size(); ++b) {
                const std::complex<double> inner =
                    static_cast<double>(n) * (basis[a].adjoint() * basis[b]).trace();
                const double expected = a == b ? 1.0 : 0.0;
                CHECK(std::abs(inner - expected) < 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(lie_onb(0), std::domain_error);
}

TEST_CASE("random unitary points satisfy the unitarity invariant") {
    GaussianStream rng(substream_seed(3, 0, 0));
    for (int n : {1, 2, 5, 16}) {
        const auto p = random_unitary(n, rng);
        CHECK(unitarity_defect(p.value) <= 1e-10);
        CHECK(p.domain == GroupTag::unitary);
    }
}

TEST_CASE("monomial evaluation") {
    GaussianStream rng(substream_seed(5, 0, 0));
    const auto p = random_unitary(3, rng);

    CHECK((eval_monomial(TraceMonomial::identity(), p) - Matrix::Identity(3, 3)).norm() == 0.0);
    CHECK((eval_monomial(TraceMonomial::power(1), p) - p.value).norm() == 0.0);

    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = kI;
    diag(1, 1) = -kI;
    const MatrixPoint dp{diag, GroupTag::unitary};
    // tr(U^2) = ((i)^2 + (-i)^2)/2 = -1, so the monomial evaluates to -I.
    const Matrix value = eval_monomial(TraceMonomial::traced_power(2), dp);
    CHECK((value + Matrix::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("insertion formula matches finite differences") {
    GaussianStream rng(substream_seed(7, 1, 0));
    const std::vector<TraceMonomial> cases = {
        TraceMonomial::power(1),
        TraceMonomial::power(2),
        TraceMonomial::traced_power(1),
        TraceMonomial::traced_power(3),
        TraceMonomial::canonicalize(1, {1}),
        TraceMonomial::canonicalize(2, {2, 1}),
    };
    for (int n : {2, 3}) {
        const auto basis = lie_onb(n);
        for (const auto& m : cases) {
            const auto p = random_unitary(n, rng);
            const auto& x = basis[static_cast<std::size_t>(n) /*arbitrary fixed element*/];
            const Matrix exact = second_directional(m, x, p);
            const Matrix approx = finite_difference_second(m, x, p, 1e-4);
            CHECK(tr_norm(exact - approx) <= 1e-6 * std::max(1.0, tr_norm(exact)));
        }
    }
}

TEST_CASE("second directional derivative closed cases") {
    GaussianStream rng(substream_seed(11, 0, 0));
    const auto p = random_unitary(3, rng);
    const auto basis = lie_onb(3);
    const Matrix& x = basis[4];
    const Matrix x2 = x * x;

    // single factor U: P X^2
    CHECK(tr_norm(second_directional(TraceMonomial::power(1), x, p) - p.value * x2) < 1e-14);

    // U^2: sum_i P^i X^2 P^{2-i} + 2 P X P X
    const Matrix expected2 = p.value * x2 * p.value + p.value * p.value * x2 +
                             2.0 * (p.value * x * p.value * x);
    CHECK(tr_norm(second_directional(TraceMonomial::power(2), x, p) - expected2) < 1e-14);

    // tr(U): tr(P X^2) I
    const Matrix expected_tr =
        normalized_trace(p.value * x2) * Matrix::Identity(3, 3);
    CHECK(tr_norm(second_directional(TraceMonomial::traced_power(1), x, p) - expected_tr) < 1e-14);
}

TEST_CASE("exact laplacian reproduces the finite-N identities") {
    for (int n : {2, 3, 4}) {
        GaussianStream rng(substream_seed(13, static_cast<std::uint64_t>(n), 0));
        const auto p = random_unitary(n, rng);

        // eigenrelation
        CHECK(relative_residual(laplacian_exact(TraceMonomial::power(1), p), (-p.value).eval()) <=
              1e-10);

        // power formula k = 2
        const Matrix rhs2 =
            -2.0 * (p.value * p.value) - 2.0 * p.value * normalized_trace(p.value);
        CHECK(relative_residual(laplacian_exact(TraceMonomial::power(2), p), rhs2) <= 1e-10);

        // mixed monomial U tr(U): -2 P tr(P) - (2/N^2) P^2
        const Matrix rhs_mixed = -2.0 * p.value * normalized_trace(p.value) -
                                 (2.0 / (n * n)) * (p.value * p.value);
        CHECK(relative_residual(laplacian_exact(TraceMonomial::canonicalize(1, {1}), p), rhs_mixed) <=
              1e-10);
    }
}

TEST_CASE("laplacian is deterministic across worker counts") {
    GaussianStream rng(substream_seed(17, 0, 0));
    const auto p = random_unitary(4, rng);
    const auto m = TraceMonomial::canonicalize(2, {2});
    const Matrix serial = laplacian_exact(m, p, 1);
    const Matrix parallel = laplacian_exact(m, p, 3);
    CHECK((serial - parallel).norm() == 0.0);
}

TEST_CASE("identity suites") {
    for (int k = 1; k <= 5; ++k) {
        for (int n : {2, 3, 4}) {
            CHECK(verify_identity(IdentitySuite::power_formula, k, 0, n, 10, 99).max_residual <= 1e-9);
            CHECK(verify_identity(IdentitySuite::traced_power_formula, k, 0, n, 10, 99).max_residual <=
                  1e-9);
        }
    }
    CHECK(verify_identity(IdentitySuite::eigenrelation, 1, 0, 4, 10, 99).max_residual <= 1e-10);

    const auto cross = verify_identity(IdentitySuite::cross_term, 2, 3, 3, 10, 99);
    CHECK(cross.max_residual <= 1e-9);
    CHECK(cross.residuals.size() == 10);
    CHECK(cross.identity == "cross_term");

    CHECK(identity_suite_from_name("power_formula") == IdentitySuite::power_formula);
    CHECK_THROWS_AS(identity_suite_from_name("nope"), std::invalid_argument);
    CHECK_THROWS_AS(verify_identity(IdentitySuite::power_formula, 2, 0, 0, 1, 1), std::domain_error);
}

TEST_CASE("residual reports are reproducible from their parameters") {
    const auto a = verify_identity(IdentitySuite::power_formula, 3, 0, 3, 5, 12345);
    const auto b = verify_identity(IdentitySuite::power_formula, 3, 0, 3, 5, 12345);
    CHECK(a.residuals == b.residuals);
    CHECK(a.max_residual == b.max_residual);
    const Json j = json_of(a);
    CHECK(j.at("identity") == "power_formula");
    CHECK(j.at("seed") == 12345);
}

TEST_CASE("product rule defect") {
    GaussianStream rng(substream_seed(19, 0, 0));
    for (int n : {2, 3, 5}) {
        const auto p = random_unitary(n, rng);
        // f = U, g = tr(U): defect is exactly -(2/N^2) P^2 at every point
        const Matrix defect =
            product_rule_defect(TraceMonomial::power(1), TraceMonomial::traced_power(1), p);
        const Matrix expected = (-2.0 / (n * n)) * (p.value * p.value);
        CHECK(relative_residual(defect, expected) <= 1e-9);
    }

    // constant factor: zero defect
    GaussianStream rng2(substream_seed(19, 1, 0));
    const auto p = random_unitary(3, rng2);
    const Matrix zero_defect =
        product_rule_defect(TraceMonomial::identity(), TraceMonomial::traced_power(1), p);
    CHECK(tr_norm(zero_defect) <= 1e-12);

    CHECK_THROWS_AS(
        product_rule_defect(TraceMonomial::power(1), TraceMonomial::power(1), p),
        std::domain_error);
}

TEST_CASE("product rule defect scales like 1/N^2") {
    const auto fit = product_rule_scaling(TraceMonomial::power(2), TraceMonomial::traced_power(2),
                                          {2, 4, 8, 16}, 5, 2024);
    CHECK(fit.slope == doctest::Approx(-2.0).epsilon(0.075));
    CHECK(fit.sizes == std::vector<int>{2, 4, 8, 16});
    CHECK(fit.mean_defects.size() == 4);
    CHECK_THROWS_AS(product_rule_scaling(TraceMonomial::power(1), TraceMonomial::traced_power(1),
                                         {2, 4}, 3, 1),
                    std::invalid_argument);
}

TEST_CASE("line fit recovers exact lines") {
    const auto fit = fit_line({0.0, 1.0, 2.0, 3.0}, {5.0, 3.0, 1.0, -1.0});
    CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(fit.slope_stderr == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(fit_line({1.0}, {1.0}), std::invalid_argument);
}
