#include "traceflow/sampler.hpp"

#include "traceflow/parallel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace traceflow {

namespace {

// Gaussian element of u(N), entries in the documented basis order: diagonal
// directions first, then the (j,k) pairs row-major with their real and
// imaginary generators. Equals sum_j xi_j X_j over the lie_onb basis.
Matrix draw_skew(int n, GaussianStream& rng) {
    Matrix a(n, n);
    const double diag_scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double offdiag_scale = 1.0 / std::sqrt(2.0 * n);
    for (int j = 0; j < n; ++j) {
        a(j, j) = std::complex<double>(0.0, rng.gaussian() * diag_scale);
    }
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            const double xi1 = rng.gaussian();
            const double xi2 = rng.gaussian();
            a(j, k) = std::complex<double>(xi1, xi2) * offdiag_scale;
            a(k, j) = std::complex<double>(-xi1, xi2) * offdiag_scale;
        }
    }
    return a;
}

}  // namespace

void SamplerConfig::validate() const {
    if (n < 1) throw std::domain_error("sampler requires N >= 1");
    if (t < 0) throw std::domain_error("sampler requires t >= 0");
    if (samples < 1) throw std::domain_error("sampler requires at least one sample");
    if (steps < 0) throw std::domain_error("sampler requires a positive step count");
}

Json json_of(const SamplerConfig& cfg) {
    return Json{{"group", cfg.group == GroupTag::unitary ? "unitary" : "general_linear"},
                {"N", cfg.n},
                {"t", cfg.t},
                {"steps", cfg.resolved_steps()},
                {"samples", cfg.samples},
                {"seed", cfg.seed},
                {"threads", cfg.threads}};
}

MatrixPoint sample_heat(const SamplerConfig& cfg, long long sample_index) {
    cfg.validate();
    const int n = cfg.n;
    GaussianStream rng(substream_seed(cfg.seed,
                                      static_cast<std::uint64_t>(sample_index / kSamplesPerShard),
                                      static_cast<std::uint64_t>(sample_index % kSamplesPerShard)));
    Matrix g = Matrix::Identity(n, n);
    if (cfg.t == 0.0) {
        return MatrixPoint{std::move(g), cfg.group};
    }
    const int steps = cfg.resolved_steps();
    const double delta = cfg.t / steps;

    if (n == 1) {
        // 1x1 exponentials are scalar; same draws, same arithmetic.
        std::complex<double> z{1.0, 0.0};
        if (cfg.group == GroupTag::unitary) {
            const double scale = std::sqrt(delta);
            for (int step = 0; step < steps; ++step) {
                z *= std::exp(std::complex<double>(0.0, scale * rng.gaussian()));
            }
        } else {
            const double scale = std::sqrt(delta / 2.0);
            for (int step = 0; step < steps; ++step) {
                const double xi = rng.gaussian();
                const double eta = rng.gaussian();
                z *= std::exp(scale * std::complex<double>(-eta, xi));
            }
        }
        g(0, 0) = z;
        return MatrixPoint{std::move(g), cfg.group};
    }

    if (cfg.group == GroupTag::unitary) {
        const double scale = std::sqrt(delta);
        for (int step = 0; step < steps; ++step) {
            const Matrix increment = scale * draw_skew(n, rng);
            g = g * increment.exp();
        }
    } else {
        // Increment sqrt(delta/2) (A + iB) over independent u(N) draws A, B:
        // generator (1/4) Delta_GL, the normalization with E[Z] = I and the
        // N=1 isometry e^{-k^2 t} E|z|^{2k} = 1.
        const double scale = std::sqrt(delta / 2.0);
        for (int step = 0; step < steps; ++step) {
            const Matrix a = draw_skew(n, rng);
            const Matrix b = draw_skew(n, rng);
            const Matrix increment = scale * (a + std::complex<double>(0.0, 1.0) * b);
            g = g * increment.exp();
        }
    }
    return MatrixPoint{std::move(g), cfg.group};
}

std::vector<double> empirical_eigs(const MatrixPoint& p) {
    if (p.domain != GroupTag::unitary) {
        throw std::invalid_argument("empirical eigenangles expect a unitary point");
    }
    Eigen::ComplexEigenSolver<Matrix> solver(p.value, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        std::ostringstream message;
        message << "eigensolver failed on a " << p.size() << "x" << p.size()
                << " unitary point (unitarity defect " << unitarity_defect(p.value) << ")";
        throw std::runtime_error(message.str());
    }
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(p.size()));
    for (int i = 0; i < p.size(); ++i) {
        double angle = std::arg(solver.eigenvalues()(i));
        if (angle >= std::numbers::pi) angle -= 2.0 * std::numbers::pi;
        angles.push_back(angle);
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

std::vector<StatSummary> SampleStats::summarize() const {
    std::vector<StatSummary> out(static_cast<std::size_t>(dim));
    long long total = 0;
    std::vector<double> sum_re(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> sum_im(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> sum_abs2(static_cast<std::size_t>(dim), 0.0);
    for (const auto& shard : shards) {  // fixed shard order
        total += shard.count;
        for (int d = 0; d < dim; ++d) {
            sum_re[static_cast<std::size_t>(d)] += shard.sum_re[static_cast<std::size_t>(d)];
            sum_im[static_cast<std::size_t>(d)] += shard.sum_im[static_cast<std::size_t>(d)];
            sum_abs2[static_cast<std::size_t>(d)] += shard.sum_abs2[static_cast<std::size_t>(d)];
        }
    }
    for (int d = 0; d < dim; ++d) {
        auto& s = out[static_cast<std::size_t>(d)];
        s.count = total;
        if (total == 0) continue;
        s.mean_re = sum_re[static_cast<std::size_t>(d)] / static_cast<double>(total);
        s.mean_im = sum_im[static_cast<std::size_t>(d)] / static_cast<double>(total);
        if (total > 1) {
            const double mean_abs2 = s.mean_re * s.mean_re + s.mean_im * s.mean_im;
            const double centered = sum_abs2[static_cast<std::size_t>(d)] - static_cast<double>(total) * mean_abs2;
            s.variance = std::max(0.0, centered / static_cast<double>(total - 1));
            s.se = std::sqrt(s.variance / static_cast<double>(total));
        }
    }
    return out;
}

SampleStats SampleStats::merge(const SampleStats& a, const SampleStats& b) {
    if (a.dim != b.dim) throw std::invalid_argument("cannot merge statistics of different dimension");
    SampleStats out;
    out.dim = a.dim;
    out.shards = a.shards;
    out.shards.insert(out.shards.end(), b.shards.begin(), b.shards.end());
    std::sort(out.shards.begin(), out.shards.end(),
              [](const ShardSums& x, const ShardSums& y) { return x.shard < y.shard; });
    for (std::size_t i = 1; i < out.shards.size(); ++i) {
        if (out.shards[i].shard == out.shards[i - 1].shard) {
            throw std::invalid_argument("cannot merge overlapping sample shards");
        }
    }
    return out;
}

SampleStats accumulate_samples(const SamplerConfig& cfg, int dim, const SampleStatistic& statistic,
                               long long first, long long count) {
    cfg.validate();
    if (count < 0) count = cfg.samples;
    const long long last = first + count;  // exclusive
    const long long first_shard = first / kSamplesPerShard;
    const long long shard_count = (last + kSamplesPerShard - 1) / kSamplesPerShard - first_shard;

    SampleStats stats;
    stats.dim = dim;
    stats.shards.resize(static_cast<std::size_t>(shard_count));

    parallel_for(static_cast<int>(shard_count), cfg.threads, [&](int s) {
        const long long shard = first_shard + s;
        const long long begin = std::max(first, shard * kSamplesPerShard);
        const long long end = std::min(last, (shard + 1) * kSamplesPerShard);
        ShardSums sums;
        sums.shard = static_cast<std::uint64_t>(shard);
        sums.sum_re.assign(static_cast<std::size_t>(dim), 0.0);
        sums.sum_im.assign(static_cast<std::size_t>(dim), 0.0);
        sums.sum_abs2.assign(static_cast<std::size_t>(dim), 0.0);
        std::vector<std::complex<double>> values(static_cast<std::size_t>(dim));
        for (long long g = begin; g < end; ++g) {
            const MatrixPoint point = sample_heat(cfg, g);
            std::fill(values.begin(), values.end(), std::complex<double>(0.0, 0.0));
            statistic(point, values);
            for (int d = 0; d < dim; ++d) {
                const auto v = values[static_cast<std::size_t>(d)];
                sums.sum_re[static_cast<std::size_t>(d)] += v.real();
                sums.sum_im[static_cast<std::size_t>(d)] += v.imag();
                sums.sum_abs2[static_cast<std::size_t>(d)] += std::norm(v);
            }
            ++sums.count;
        }
        stats.shards[static_cast<std::size_t>(s)] = std::move(sums);
    });
    return stats;
}

double SpectralHistogram::bin_left(int i) const {
    return -std::numbers::pi + 2.0 * std::numbers::pi * i / bins;
}
double SpectralHistogram::bin_right(int i) const {
    return -std::numbers::pi + 2.0 * std::numbers::pi * (i + 1) / bins;
}

SpectralHistogram spectral_histogram(const SamplerConfig& cfg, int bins) {
    cfg.validate();
    if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
    if (cfg.group != GroupTag::unitary) {
        throw std::invalid_argument("spectral histograms are defined for the unitary sampler");
    }
    SpectralHistogram hist;
    hist.config = cfg;
    hist.bins = bins;
    hist.counts.assign(static_cast<std::size_t>(bins), 0);

    const long long shard_count = (cfg.samples + kSamplesPerShard - 1) / kSamplesPerShard;
    std::vector<std::vector<long long>> partial(static_cast<std::size_t>(shard_count));
    parallel_for(static_cast<int>(shard_count), cfg.threads, [&](int s) {
        std::vector<long long> counts(static_cast<std::size_t>(bins), 0);
        const long long begin = s * kSamplesPerShard;
        const long long end = std::min(cfg.samples, (s + 1) * kSamplesPerShard);
        for (long long g = begin; g < end; ++g) {
            const MatrixPoint point = sample_heat(cfg, g);
            for (double angle : empirical_eigs(point)) {
                int bin = static_cast<int>((angle + std::numbers::pi) / (2.0 * std::numbers::pi) * bins);
                bin = std::clamp(bin, 0, bins - 1);
                ++counts[static_cast<std::size_t>(bin)];
            }
        }
        partial[static_cast<std::size_t>(s)] = std::move(counts);
    });
    for (const auto& counts : partial) {
        for (int b = 0; b < bins; ++b) hist.counts[static_cast<std::size_t>(b)] += counts[static_cast<std::size_t>(b)];
    }
    for (long long c : hist.counts) hist.total += c;
    return hist;
}

Json json_of(const SpectralHistogram& hist) {
    Json bins = Json::array();
    for (int i = 0; i < hist.bins; ++i) {
        bins.push_back(Json{{"bin_left", hist.bin_left(i)},
                            {"bin_right", hist.bin_right(i)},
                            {"count", hist.counts[static_cast<std::size_t>(i)]}});
    }
    return Json{{"config", json_of(hist.config)}, {"total", hist.total}, {"bins", std::move(bins)}};
}

std::string csv_of(const SpectralHistogram& hist) {
    std::ostringstream out;
    out.precision(17);
    const Json cfg = json_of(hist.config);
    for (const auto& [key, value] : cfg.items()) {
        out << "# " << key << "=" << value.dump() << "\n";
    }
    out << "bin_left,bin_right,count\n";
    for (int i = 0; i < hist.bins; ++i) {
        out << hist.bin_left(i) << "," << hist.bin_right(i) << ","
            << hist.counts[static_cast<std::size_t>(i)] << "\n";
    }
    return out.str();
}

}  // namespace traceflow
