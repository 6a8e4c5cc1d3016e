#include "traceflow/experiments.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace traceflow {

namespace {

Matrix matrix_power(const Matrix& base, int exponent) {
    Matrix acc = Matrix::Identity(base.rows(), base.cols());
    for (int i = 0; i < exponent; ++i) acc = acc * base;
    return acc;
}

StatRow row_from_summary(const StatSummary& s, std::string label, int n) {
    StatRow row;
    row.label = std::move(label);
    row.n = n;
    row.samples = s.count;
    row.mean_re = s.mean_re;
    row.mean_im = s.mean_im;
    row.se = s.se;
    row.variance = s.variance;
    return row;
}

Json base_config(double t, const std::vector<int>& sizes, long long samples, std::uint64_t seed,
                 int steps, int threads, GroupTag group) {
    return Json{{"group", group == GroupTag::unitary ? "unitary" : "general_linear"},
                {"N", sizes},
                {"t", t},
                {"steps", steps > 0 ? steps : SamplerConfig::default_steps(t)},
                {"samples", samples},
                {"seed", seed},
                {"threads", threads}};
}

}  // namespace

Json json_of(const StatReport& report) {
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json j{{"label", row.label},   {"N", row.n},
               {"samples", row.samples}, {"mean", row.mean_re},
               {"mean_im", row.mean_im}, {"se", row.se},
               {"variance", row.variance}};
        if (row.reference) j["reference"] = *row.reference;
        rows.push_back(std::move(j));
    }
    Json out{{"statistic", report.statistic}, {"config", report.config}, {"rows", std::move(rows)}};
    const auto slope_json = [](const SlopeFit& fit) {
        return Json{{"slope", fit.slope},
                    {"half_width", fit.half_width},
                    {"intercept", fit.intercept},
                    {"log_x", fit.log_x},
                    {"log_y", fit.log_y}};
    };
    if (report.variance_slope) out["variance_slope"] = slope_json(*report.variance_slope);
    if (report.mean_slope) out["mean_slope"] = slope_json(*report.mean_slope);
    return out;
}

std::string csv_of(const StatReport& report) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& [key, value] : report.config.items()) {
        out << "# " << key << "=" << value.dump() << "\n";
    }
    if (report.variance_slope) {
        out << "# variance_slope=" << report.variance_slope->slope
            << " half_width=" << report.variance_slope->half_width << "\n";
    }
    if (report.mean_slope) {
        out << "# mean_slope=" << report.mean_slope->slope
            << " half_width=" << report.mean_slope->half_width << "\n";
    }
    out << "N,statistic,mean,se,variance,mean_im,reference,samples\n";
    for (const auto& row : report.rows) {
        out << row.n << "," << report.statistic << ":" << row.label << "," << row.mean_re << ","
            << row.se << "," << row.variance << "," << row.mean_im << ",";
        if (row.reference) out << *row.reference;
        out << "," << row.samples << "\n";
    }
    return out.str();
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw std::invalid_argument("log-log slope fit needs at least three points");
    }
    SlopeFit fit;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw std::invalid_argument("log-log slope fit needs positive data");
        }
        fit.log_x.push_back(std::log(x[i]));
        fit.log_y.push_back(std::log(y[i]));
    }
    const LineFit line = fit_line(fit.log_x, fit.log_y);
    fit.slope = line.slope;
    fit.half_width = line.slope_stderr;
    fit.intercept = line.intercept;
    return fit;
}

StatReport estimate_norm(const TracePolynomial<double>& f, const SamplerConfig& cfg) {
    StatReport report;
    report.statistic = "norm_sq";
    report.config = json_of(cfg);
    const auto stats = accumulate_samples(cfg, 1, [&f](const MatrixPoint& p, std::vector<std::complex<double>>& out) {
        const Matrix value = eval_polynomial(f, p);
        out[0] = normalized_trace(value.adjoint() * value).real();
    });
    report.rows.push_back(row_from_summary(stats.summarize()[0], "N=" + std::to_string(cfg.n), cfg.n));
    return report;
}

StatReport concentration_experiment(int power, double t, const std::vector<int>& sizes,
                                    long long samples, std::uint64_t seed, GroupTag group,
                                    int steps, int threads) {
    if (power < 1) throw std::domain_error("concentration experiment requires a positive power");
    StatReport report;
    report.statistic = "tr_power_" + std::to_string(power);
    report.config = base_config(t, sizes, samples, seed, steps, threads, group);
    const double reference = group == GroupTag::unitary ? moment_nu(power).value(t) : 1.0;

    std::vector<double> vars;
    for (const int n : sizes) {
        SamplerConfig cfg{n, t, steps, samples, seed, group, threads};
        const auto stats = accumulate_samples(cfg, 1, [power](const MatrixPoint& p, std::vector<std::complex<double>>& out) {
            out[0] = normalized_trace(matrix_power(p.value, power));
        });
        StatRow row = row_from_summary(stats.summarize()[0], "N=" + std::to_string(n), n);
        row.reference = reference;
        vars.push_back(row.variance);
        report.rows.push_back(std::move(row));
    }
    if (sizes.size() >= 3) {
        std::vector<double> xs(sizes.begin(), sizes.end());
        report.variance_slope = fit_loglog(xs, vars);
    }
    return report;
}

StatReport survival_experiment(const TraceMonomial& monomial, double t, const std::vector<int>& sizes,
                               long long samples, std::uint64_t seed, int steps, int threads) {
    StatReport report;
    report.statistic = "survival_" + monomial.to_string();
    report.config = base_config(t, sizes, samples, seed, steps, threads, GroupTag::unitary);

    double limit_constant = 1.0;  // product of the factor limits nu_l(t)
    for (int l : monomial.traced_powers()) limit_constant *= moment_nu(l).value(t);
    const int k = monomial.untraced_power();

    std::vector<double> means;
    for (const int n : sizes) {
        SamplerConfig cfg{n, t, steps, samples, seed, GroupTag::unitary, threads};
        const auto stats = accumulate_samples(cfg, 1, [&](const MatrixPoint& p, std::vector<std::complex<double>>& out) {
            const Matrix difference = eval_monomial(monomial, p) - limit_constant * matrix_power(p.value, k);
            out[0] = normalized_trace(difference.adjoint() * difference).real();
        });
        StatRow row = row_from_summary(stats.summarize()[0], "N=" + std::to_string(n), n);
        row.reference = 0.0;
        means.push_back(row.mean_re);
        report.rows.push_back(std::move(row));
    }
    if (sizes.size() >= 3) {
        std::vector<double> xs(sizes.begin(), sizes.end());
        report.mean_slope = fit_loglog(xs, means);
    }
    return report;
}

StatReport spectral_moment_experiment(const SamplerConfig& cfg, int max_power) {
    if (max_power < 1) throw std::domain_error("spectral moments require a positive power");
    if (cfg.group != GroupTag::unitary) {
        throw std::invalid_argument("spectral moments are defined for the unitary sampler");
    }
    StatReport report;
    report.statistic = "spectral_moment";
    report.config = json_of(cfg);
    const auto stats = accumulate_samples(cfg, max_power, [max_power](const MatrixPoint& p, std::vector<std::complex<double>>& out) {
        const auto angles = empirical_eigs(p);
        for (int k = 1; k <= max_power; ++k) {
            std::complex<double> moment{0.0, 0.0};
            for (double angle : angles) {
                moment += std::exp(std::complex<double>(0.0, k * angle));
            }
            out[static_cast<std::size_t>(k - 1)] = moment / static_cast<double>(angles.size());
        }
    });
    const auto summaries = stats.summarize();
    for (int k = 1; k <= max_power; ++k) {
        StatRow row = row_from_summary(summaries[static_cast<std::size_t>(k - 1)],
                                       "k=" + std::to_string(k), cfg.n);
        row.reference = moment_nu(k).value(cfg.t);
        report.rows.push_back(std::move(row));
    }
    return report;
}

StatReport isometry_experiment(int max_power, double t, long long samples, std::uint64_t seed,
                               int steps, int threads) {
    if (max_power < 1) throw std::domain_error("isometry experiment requires a positive power");
    StatReport report;
    report.statistic = "isometry";
    SamplerConfig cfg{1, t, steps, samples, seed, GroupTag::general_linear, threads};
    report.config = json_of(cfg);
    const auto stats = accumulate_samples(cfg, max_power, [max_power, t](const MatrixPoint& p, std::vector<std::complex<double>>& out) {
        const double abs2 = std::norm(p.value(0, 0));
        for (int k = 1; k <= max_power; ++k) {
            out[static_cast<std::size_t>(k - 1)] = std::exp(-static_cast<double>(k) * k * t) * std::pow(abs2, k);
        }
    });
    const auto summaries = stats.summarize();
    for (int k = 1; k <= max_power; ++k) {
        StatRow row = row_from_summary(summaries[static_cast<std::size_t>(k - 1)],
                                       "k=" + std::to_string(k), 1);
        row.reference = 1.0;
        report.rows.push_back(std::move(row));
    }
    return report;
}

StatReport limit_transform_experiment(const std::vector<Rational>& coeffs, double t,
                                      const std::vector<int>& sizes, long long samples,
                                      std::uint64_t seed, int steps, int threads) {
    StatReport report;
    report.statistic = "limit_transform";
    report.config = base_config(t, sizes, samples, seed, steps, threads, GroupTag::general_linear);

    // Heat-evolved polynomial with traces kept, holomorphically extended and
    // evaluated at numeric t.
    TracePolynomial<Rational> p;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        p.add_term(TraceMonomial::power(static_cast<int>(j)), coeffs[j]);
    }
    TracePolynomial<double> evolved;
    for (auto& h : heat_apply(p)) {
        evolved += holomorphic_extend(std::move(h)).evaluate(t);
    }
    // The limit polynomial (q_t)_N at the same t.
    TracePolynomial<double> limit;
    for (const auto& [power, value] : free_hall_transform(coeffs).evaluate(t)) {
        limit.add_term(TraceMonomial::power(power), value);
    }
    const TracePolynomial<double> difference = evolved - limit;

    std::vector<double> means;
    for (const int n : sizes) {
        SamplerConfig cfg{n, t, steps, samples, seed, GroupTag::general_linear, threads};
        const auto stats = accumulate_samples(cfg, 1, [&difference](const MatrixPoint& p, std::vector<std::complex<double>>& out) {
            const Matrix value = eval_polynomial(difference, p);
            out[0] = normalized_trace(value.adjoint() * value).real();
        });
        StatRow row = row_from_summary(stats.summarize()[0], "N=" + std::to_string(n), n);
        row.reference = 0.0;
        means.push_back(row.mean_re);
        report.rows.push_back(std::move(row));
    }
    bool positive = true;
    for (double m : means) positive = positive && (m > 0.0);
    if (sizes.size() >= 3 && positive) {
        std::vector<double> xs(sizes.begin(), sizes.end());
        report.mean_slope = fit_loglog(xs, means);
    }
    return report;
}

}  // namespace traceflow
