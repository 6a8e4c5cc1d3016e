// Heat-kernel Monte Carlo on U(N) and GL(N,C).
//
// Both samplers run the geodesic Euler scheme: right-multiply by the group
// exponential of Gaussian Lie-algebra increments, so unitary samples are
// exactly unitary at every step count. Sample index g draws its own RNG
// substream from (seed, shard, index-within-shard) with fixed shards of 64
// samples; statistics accumulate into per-shard sums reduced in shard order,
// which makes runs reproducible, shard-mergeable, and worker-count invariant.

#pragma once

#include "traceflow/matrix_oracle.hpp"
#include "traceflow/rng.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace traceflow {

inline constexpr long long kSamplesPerShard = 64;

struct SamplerConfig {
    int n = 2;
    double t = 1.0;
    int steps = 0;  // 0 selects the default for t
    long long samples = 1;
    std::uint64_t seed = 0;
    GroupTag group = GroupTag::unitary;
    int threads = 1;

    static int default_steps(double t) {
        return std::max(200, static_cast<int>(std::ceil(50.0 * t)));
    }
    int resolved_steps() const { return steps > 0 ? steps : default_steps(t); }

    void validate() const;
};

Json json_of(const SamplerConfig& cfg);

// One heat-kernel sample at global index `sample_index`.
MatrixPoint sample_heat(const SamplerConfig& cfg, long long sample_index);

// Eigenangles of a unitary point in [-pi, pi), ascending.
std::vector<double> empirical_eigs(const MatrixPoint& p);

// Sufficient statistics of a vector-valued (complex) per-sample statistic,
// kept per shard. Merging reports over disjoint shard-aligned ranges is exact.
struct ShardSums {
    std::uint64_t shard = 0;
    long long count = 0;
    std::vector<double> sum_re;
    std::vector<double> sum_im;
    std::vector<double> sum_abs2;
};

struct StatSummary {
    long long count = 0;
    double mean_re = 0.0;
    double mean_im = 0.0;
    double variance = 0.0;  // E|x - mean|^2 with the n-1 correction
    double se = 0.0;        // sample standard deviation / sqrt(samples)
};

struct SampleStats {
    int dim = 0;
    std::vector<ShardSums> shards;  // ascending shard id

    std::vector<StatSummary> summarize() const;
    static SampleStats merge(const SampleStats& a, const SampleStats& b);
};

using SampleStatistic = std::function<void(const MatrixPoint&, std::vector<std::complex<double>>&)>;

// Runs the statistic over global sample indices [first, first + count).
// Shard-aligned sub-ranges reproduce exactly the shards of a full run.
SampleStats accumulate_samples(const SamplerConfig& cfg, int dim, const SampleStatistic& statistic,
                               long long first = 0, long long count = -1);

struct SpectralHistogram {
    SamplerConfig config;
    int bins = 64;
    std::vector<long long> counts;  // over [-pi, pi), uniform
    long long total = 0;

    double bin_left(int i) const;
    double bin_right(int i) const;
};

SpectralHistogram spectral_histogram(const SamplerConfig& cfg, int bins = 64);

Json json_of(const SpectralHistogram& hist);
std::string csv_of(const SpectralHistogram& hist);

}  // namespace traceflow
