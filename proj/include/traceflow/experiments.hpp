// Statistical experiments over the heat-kernel samplers: norm estimation,
// trace concentration, spectral moments against the limit moments nu_k, the
// N=1 isometry check, and the limit mechanism of the transform.

#pragma once

#include "traceflow/heat.hpp"
#include "traceflow/matrix_oracle.hpp"
#include "traceflow/sampler.hpp"

#include <optional>
#include <string>
#include <vector>

namespace traceflow {

struct StatRow {
    std::string label;
    int n = 0;
    long long samples = 0;
    double mean_re = 0.0;
    double mean_im = 0.0;
    double se = 0.0;
    double variance = 0.0;
    std::optional<double> reference;
};

struct SlopeFit {
    std::vector<double> log_x;
    std::vector<double> log_y;
    double slope = 0.0;
    double half_width = 0.0;  // standard error of the slope
    double intercept = 0.0;
};

struct StatReport {
    std::string statistic;
    Json config;
    std::vector<StatRow> rows;
    std::optional<SlopeFit> variance_slope;
    std::optional<SlopeFit> mean_slope;
};

Json json_of(const StatReport& report);
std::string csv_of(const StatReport& report);

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Monte Carlo estimate of ||f||^2 = E tr(f(P)* f(P)) under the configured
// measure, for a numeric trace polynomial.
StatReport estimate_norm(const TracePolynomial<double>& f, const SamplerConfig& cfg);

// Mean and variance of tr(U^k) across matrix sizes, against the engine moment
// nu_k(t) (or the constant 1 on the GL side), with a variance-vs-N slope fit.
StatReport concentration_experiment(int power, double t, const std::vector<int>& sizes,
                                    long long samples, std::uint64_t seed, GroupTag group,
                                    int steps = 0, int threads = 1);

// Monomial form of the concentration statement: only the untraced powers
// survive. Means of ||m(U) - C U^k||^2 with C the product of the factor
// limits, across sizes.
StatReport survival_experiment(const TraceMonomial& monomial, double t, const std::vector<int>& sizes,
                               long long samples, std::uint64_t seed, int steps = 0, int threads = 1);

// Spectral moments (1/N) sum_j e^{i k theta_j} from the eigenangle solver,
// compared with nu_k(t) for k = 1..max_power.
StatReport spectral_moment_experiment(const SamplerConfig& cfg, int max_power);

// N=1 isometry of the complexified sampler: e^{-k^2 t} E|z|^{2k} = 1.
StatReport isometry_experiment(int max_power, double t, long long samples, std::uint64_t seed,
                               int steps = 0, int threads = 1);

// Monte Carlo estimate of ||heat-evolved p (traces kept) - q_t||^2 in
// L^2(mu_t) across sizes; the limit mechanism of the transform theorem.
StatReport limit_transform_experiment(const std::vector<Rational>& coeffs, double t,
                                      const std::vector<int>& sizes, long long samples,
                                      std::uint64_t seed, int steps = 0, int threads = 1);

}  // namespace traceflow
