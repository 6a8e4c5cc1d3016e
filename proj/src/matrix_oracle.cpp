#include "traceflow/matrix_oracle.hpp"

#include "traceflow/laplacian.hpp"
#include "traceflow/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace traceflow {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Trace(a b) without forming the product.
std::complex<double> trace_of_product(const Matrix& a, const Matrix& b) {
    return a.cwiseProduct(b.transpose()).sum();
}

std::vector<Matrix> matrix_powers(const Matrix& p, int max_power) {
    std::vector<Matrix> powers;
    powers.reserve(static_cast<std::size_t>(max_power) + 1);
    powers.push_back(Matrix::Identity(p.rows(), p.cols()));
    for (int j = 1; j <= max_power; ++j) powers.push_back(powers.back() * p);
    return powers;
}

Matrix tree_reduce(std::vector<Matrix> items) {
    if (items.empty()) throw std::invalid_argument("tree_reduce of nothing");
    while (items.size() > 1) {
        std::vector<Matrix> next;
        next.reserve(items.size() / 2 + 1);
        for (std::size_t i = 0; i + 1 < items.size(); i += 2) {
            next.push_back(items[i] + items[i + 1]);
        }
        if (items.size() % 2 == 1) next.push_back(items.back());
        items = std::move(next);
    }
    return items.front();
}

}  // namespace

std::vector<Matrix> lie_onb(int n) {
    if (n < 1) throw std::domain_error("lie_onb requires N >= 1");
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    const double diag_scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double offdiag_scale = 1.0 / std::sqrt(2.0 * n);
    for (int j = 0; j < n; ++j) {
        Matrix x = Matrix::Zero(n, n);
        x(j, j) = kI * diag_scale;
        basis.push_back(std::move(x));
    }
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            Matrix real_part = Matrix::Zero(n, n);
            real_part(j, k) = offdiag_scale;
            real_part(k, j) = -offdiag_scale;
            basis.push_back(std::move(real_part));

            Matrix imag_part = Matrix::Zero(n, n);
            imag_part(j, k) = kI * offdiag_scale;
            imag_part(k, j) = kI * offdiag_scale;
            basis.push_back(std::move(imag_part));
        }
    }
    return basis;
}

MatrixPoint random_unitary(int n, GaussianStream& rng) {
    Matrix z(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            z(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
        }
    }
    const Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < n; ++c) {
        const std::complex<double> d = r(c, c);
        const double mag = std::abs(d);
        q.col(c) *= mag > 0 ? d / mag : 1.0;
    }
    return MatrixPoint{std::move(q), GroupTag::unitary};
}

Matrix eval_monomial(const TraceMonomial& m, const MatrixPoint& p) {
    const int max_power = std::max(m.untraced_power(),
                                   m.traced_powers().empty() ? 0 : m.traced_powers().front());
    const auto powers = matrix_powers(p.value, max_power);
    std::complex<double> scalar = 1.0;
    for (int l : m.traced_powers()) scalar *= normalized_trace(powers[static_cast<std::size_t>(l)]);
    return scalar * powers[static_cast<std::size_t>(m.untraced_power())];
}

Matrix eval_polynomial(const TracePolynomial<double>& poly, const MatrixPoint& p) {
    Matrix acc = Matrix::Zero(p.value.rows(), p.value.cols());
    for (const auto& [m, c] : poly.terms()) acc += c * eval_monomial(m, p);
    return acc;
}

Matrix second_directional(const TraceMonomial& m, const Matrix& x, const MatrixPoint& p) {
    const int n = p.size();
    const int k = m.untraced_power();
    const auto& traces = m.traced_powers();
    const int max_power = std::max(k, traces.empty() ? 0 : traces.front());
    const auto powers = matrix_powers(p.value, max_power);
    const Matrix x2 = x * x;

    // Cached products P^g X for the interleaved insertion terms.
    std::vector<Matrix> pow_x(static_cast<std::size_t>(max_power) + 1);
    for (int g = 0; g <= max_power; ++g) pow_x[static_cast<std::size_t>(g)] = powers[static_cast<std::size_t>(g)] * x;

    // Matrix factor P^k: value, first and second insertion derivatives.
    Matrix f0 = powers[static_cast<std::size_t>(k)];
    Matrix d1_mat = Matrix::Zero(n, n);
    Matrix d2_mat = Matrix::Zero(n, n);
    for (int i = 1; i <= k; ++i) {
        d1_mat += pow_x[static_cast<std::size_t>(i)] * powers[static_cast<std::size_t>(k - i)];
        d2_mat += powers[static_cast<std::size_t>(i)] * x2 * powers[static_cast<std::size_t>(k - i)];
    }
    for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
            d2_mat += 2.0 * pow_x[static_cast<std::size_t>(i)] * pow_x[static_cast<std::size_t>(j - i)] *
                      powers[static_cast<std::size_t>(k - j)];
        }
    }

    // Traced factors tr(P^l): scalar value and insertion derivatives. The
    // first derivative collapses by cyclicity to l tr(P^l X); the second
    // groups the interleaved pairs by gap.
    const auto count = traces.size();
    std::vector<std::complex<double>> value(count), d1(count), d2(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const int l = traces[idx];
        value[idx] = normalized_trace(powers[static_cast<std::size_t>(l)]);
        d1[idx] = static_cast<double>(l) * trace_of_product(powers[static_cast<std::size_t>(l)], x) /
                  static_cast<double>(n);
        std::complex<double> second = static_cast<double>(l) *
                                      trace_of_product(powers[static_cast<std::size_t>(l)], x2);
        for (int gap = 1; gap < l; ++gap) {
            second += 2.0 * static_cast<double>(l - gap) *
                      trace_of_product(pow_x[static_cast<std::size_t>(l - gap)], pow_x[static_cast<std::size_t>(gap)]);
        }
        d2[idx] = second / static_cast<double>(n);
    }

    // Leave-one-out and leave-two-out products of the scalar factors.
    std::complex<double> all = 1.0;
    for (const auto& v : value) all *= v;
    auto product_without = [&](std::size_t skip) {
        std::complex<double> prod = 1.0;
        for (std::size_t idx = 0; idx < count; ++idx) {
            if (idx != skip) prod *= value[idx];
        }
        return prod;
    };
    auto product_without_pair = [&](std::size_t skip_a, std::size_t skip_b) {
        std::complex<double> prod = 1.0;
        for (std::size_t idx = 0; idx < count; ++idx) {
            if (idx != skip_a && idx != skip_b) prod *= value[idx];
        }
        return prod;
    };

    // Two-term Leibniz across factors.
    std::complex<double> scalar_first = 0.0;   // sum_i d1_i * prod_{j != i} value_j
    std::complex<double> scalar_second = 0.0;  // sum_i d2_i * rest + 2 sum_{i<j} d1_i d1_j * rest
    for (std::size_t idx = 0; idx < count; ++idx) {
        scalar_first += d1[idx] * product_without(idx);
        scalar_second += d2[idx] * product_without(idx);
        for (std::size_t jdx = idx + 1; jdx < count; ++jdx) {
            scalar_second += 2.0 * d1[idx] * d1[jdx] * product_without_pair(idx, jdx);
        }
    }

    return d2_mat * all + 2.0 * d1_mat * scalar_first + f0 * scalar_second;
}

Matrix laplacian_exact(const TraceMonomial& m, const MatrixPoint& p, int threads) {
    const auto basis = lie_onb(p.size());
    std::vector<Matrix> contributions(basis.size());
    parallel_for(static_cast<int>(basis.size()), threads, [&](int i) {
        contributions[static_cast<std::size_t>(i)] =
            second_directional(m, basis[static_cast<std::size_t>(i)], p);
    });
    return tree_reduce(std::move(contributions));
}

Matrix product_rule_defect(const TraceMonomial& f, const TraceMonomial& g, const MatrixPoint& p,
                           int threads) {
    if (!g.is_scalar()) {
        throw std::domain_error("product_rule_defect requires a scalar second factor");
    }
    const Matrix lap_product = laplacian_exact(f * g, p, threads);
    const Matrix lap_f = laplacian_exact(f, p, threads);
    const Matrix lap_g = laplacian_exact(g, p, threads);
    const std::complex<double> g_value = normalized_trace(eval_monomial(g, p));
    return lap_product - lap_f * g_value - eval_monomial(f, p) * lap_g;
}

Json json_of(const ResidualReport& report) {
    return Json{{"identity", report.identity}, {"k", report.k},       {"l", report.l},
                {"N", report.n},               {"trials", report.trials}, {"seed", report.seed},
                {"max_residual", report.max_residual}, {"residuals", report.residuals}};
}

IdentitySuite identity_suite_from_name(const std::string& name) {
    if (name == "power_formula") return IdentitySuite::power_formula;
    if (name == "traced_power_formula") return IdentitySuite::traced_power_formula;
    if (name == "eigenrelation") return IdentitySuite::eigenrelation;
    if (name == "cross_term") return IdentitySuite::cross_term;
    throw std::invalid_argument("unknown identity suite '" + name + "'");
}

std::string identity_suite_name(IdentitySuite suite) {
    switch (suite) {
        case IdentitySuite::power_formula: return "power_formula";
        case IdentitySuite::traced_power_formula: return "traced_power_formula";
        case IdentitySuite::eigenrelation: return "eigenrelation";
        case IdentitySuite::cross_term: return "cross_term";
    }
    throw std::invalid_argument("unknown identity suite");
}

ResidualReport verify_identity(IdentitySuite suite, int k, int l, int n, int trials,
                               std::uint64_t seed, int threads) {
    if (n < 1) throw std::domain_error("matrix size must be positive");
    if (trials < 1) throw std::domain_error("trials must be positive");

    TraceMonomial subject;
    TracePolynomial<double> rhs_poly;
    switch (suite) {
        case IdentitySuite::eigenrelation:
            subject = TraceMonomial::power(1);
            rhs_poly = to_float(laplacian_power(1));
            k = 1;
            l = 0;
            break;
        case IdentitySuite::power_formula:
            subject = TraceMonomial::power(k);
            rhs_poly = to_float(laplacian_power(k));
            l = 0;
            break;
        case IdentitySuite::traced_power_formula:
            subject = TraceMonomial::traced_power(k);
            rhs_poly = to_float(laplacian_traced_power(k));
            l = 0;
            break;
        case IdentitySuite::cross_term: {
            subject = TraceMonomial::canonicalize(k, {l});
            const auto traced = TracePolynomial<double>::monomial(TraceMonomial::traced_power(l));
            const auto bare = TracePolynomial<double>::monomial(TraceMonomial::power(k));
            rhs_poly = to_float(laplacian_power(k)) * traced + bare * to_float(laplacian_traced_power(l));
            const double cross = -2.0 * k * l / (static_cast<double>(n) * n);
            rhs_poly.add_term(TraceMonomial::power(k + l), cross);
            break;
        }
    }

    ResidualReport report;
    report.identity = identity_suite_name(suite);
    report.k = k;
    report.l = l;
    report.n = n;
    report.trials = trials;
    report.seed = seed;
    report.residuals.reserve(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        GaussianStream rng(substream_seed(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)));
        const MatrixPoint point = random_unitary(n, rng);
        const Matrix actual = laplacian_exact(subject, point, threads);
        const Matrix expected = eval_polynomial(rhs_poly, point);
        const double residual = relative_residual(actual, expected);
        report.residuals.push_back(residual);
        report.max_residual = std::max(report.max_residual, residual);
    }
    return report;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("line fit needs at least two points");
    }
    const auto count = static_cast<double>(x.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= count;
    mean_y /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (x.size() > 2) {
        double sse = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            sse += r * r;
        }
        fit.slope_stderr = std::sqrt(sse / (count - 2.0) / sxx);
    }
    return fit;
}

ScalingFit product_rule_scaling(const TraceMonomial& f, const TraceMonomial& g,
                                const std::vector<int>& sizes, int trials, std::uint64_t seed,
                                int threads) {
    if (sizes.size() < 3) throw std::invalid_argument("scaling fit needs at least three sizes");
    ScalingFit fit;
    fit.sizes = sizes;
    std::vector<double> log_n;
    std::vector<double> log_defect;
    for (const int n : sizes) {
        double mean = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            GaussianStream rng(substream_seed(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)));
            const MatrixPoint point = random_unitary(n, rng);
            mean += tr_norm(product_rule_defect(f, g, point, threads));
        }
        mean /= trials;
        fit.mean_defects.push_back(mean);
        log_n.push_back(std::log(static_cast<double>(n)));
        log_defect.push_back(std::log(mean));
    }
    const LineFit line = fit_line(log_n, log_defect);
    fit.slope = line.slope;
    fit.slope_stderr = line.slope_stderr;
    fit.intercept = line.intercept;
    return fit;
}

Json json_of(const ScalingFit& fit) {
    return Json{{"sizes", fit.sizes},
                {"mean_defects", fit.mean_defects},
                {"slope", fit.slope},
                {"slope_stderr", fit.slope_stderr},
                {"intercept", fit.intercept}};
}

}  // namespace traceflow
