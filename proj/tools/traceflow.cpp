// traceflow: symbolic large-N heat calculus, finite-N oracle suites, and
// heat-kernel Monte Carlo, with machine-readable output.
//
// Exit codes: 0 success, 2 usage, 3 resource cap, 4 I/O, 5 verification
// failure.

#include "traceflow/experiments.hpp"
#include "traceflow/heat.hpp"
#include "traceflow/laplacian.hpp"
#include "traceflow/matrix_oracle.hpp"
#include "traceflow/parallel.hpp"
#include "traceflow/sampler.hpp"
#include "traceflow/serialization.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace traceflow;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) values.push_back(Rational::parse(item));
    if (values.empty()) throw std::invalid_argument("expected a comma-separated list of rationals");
    return values;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) values.push_back(std::stoi(item));
    if (values.empty()) throw std::invalid_argument("expected a comma-separated list of integers");
    return values;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw IoError("cannot open output path '" + out_path + "'");
    file << text;
    if (!file) throw IoError("write failed for '" + out_path + "'");
}

Json read_json_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot open input path '" + path + "'");
    Json j;
    file >> j;
    return j;
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("TRACEFLOW_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return default_thread_count();
}

GroupTag parse_group(const std::string& name) {
    if (name == "u" || name == "unitary") return GroupTag::unitary;
    if (name == "gl" || name == "general_linear") return GroupTag::general_linear;
    throw std::invalid_argument("unknown group '" + name + "' (use u or gl)");
}

struct CommonFlags {
    std::string format = "json";
    std::string out;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--format", flags.format, "Output format: json, csv, or pretty")
        ->check(CLI::IsMember({"json", "csv", "pretty"}));
    cmd->add_option("--out,-o", flags.out, "Output path (default: stdout)");
    cmd->add_option("--threads", flags.threads,
                    "Worker threads (default: TRACEFLOW_THREADS or hardware concurrency)");
}

std::string render_report(const StatReport& report, const std::string& format) {
    if (format == "csv") return csv_of(report);
    if (format == "pretty") {
        std::ostringstream out;
        out << "# " << report.statistic << " config " << report.config.dump() << "\n";
        for (const auto& row : report.rows) {
            out << "  " << row.label << ": mean " << row.mean_re;
            if (std::abs(row.mean_im) > 0) out << (row.mean_im < 0 ? " - " : " + ")
                                               << std::abs(row.mean_im) << "i";
            out << " (se " << row.se << ", var " << row.variance;
            if (row.reference) out << ", target " << *row.reference;
            out << ", n " << row.samples << ")\n";
        }
        if (report.variance_slope) {
            out << "  variance slope " << report.variance_slope->slope << " +- "
                << report.variance_slope->half_width << "\n";
        }
        if (report.mean_slope) {
            out << "  mean slope " << report.mean_slope->slope << " +- "
                << report.mean_slope->half_width << "\n";
        }
        return out.str();
    }
    return json_of(report).dump(2);
}

// -------------------------------------------------------------- transform --

int run_transform(const std::vector<Rational>& coeffs, bool symbolic, const std::string& t_text,
                  const CommonFlags& flags) {
    const SingleVariablePolynomial q = free_hall_transform(coeffs);
    Json config{{"command", "transform"}, {"coeffs", Json::array()}, {"symbolic", symbolic}};
    for (const auto& c : coeffs) config["coeffs"].push_back(c.to_string());

    if (!symbolic && t_text.empty()) {
        throw std::invalid_argument("transform needs --symbolic or --t VALUE");
    }
    if (symbolic) {
        if (flags.format == "pretty") {
            emit("# config " + config.dump() + "\nq_t = " + q.to_string(), flags.out);
        } else {
            Json out{{"config", config}, {"q_t", json_of(q)}};
            emit(out.dump(2), flags.out);
        }
        return 0;
    }

    const Rational t = Rational::parse(t_text);
    config["t"] = t.to_string();
    // Exact rational evaluation of the t-polynomial parts; the e^{-dt/2}
    // prefactors are transcendental and applied in double precision.
    std::map<int, double> coeffs_by_power;
    for (const auto& comp : q.components) {
        const double prefactor = std::exp(-0.5 * comp.degree * t.to_double());
        for (const auto& [power, poly] : comp.coeffs_by_power) {
            coeffs_by_power[power] += prefactor * poly.eval(t).to_double();
        }
    }
    if (flags.format == "pretty") {
        std::ostringstream out;
        out.precision(17);
        out << "# config " << config.dump() << "\nq_t(z) =";
        bool first = true;
        for (auto it = coeffs_by_power.rbegin(); it != coeffs_by_power.rend(); ++it) {
            out << (first ? " " : " + ") << it->second;
            if (it->first == 1) out << "·z";
            if (it->first > 1) out << "·z^" << it->first;
            first = false;
        }
        emit(out.str(), flags.out);
    } else {
        Json powers = Json::object();
        for (auto it = coeffs_by_power.rbegin(); it != coeffs_by_power.rend(); ++it) {
            powers[std::to_string(it->first)] = it->second;
        }
        Json out{{"config", config}, {"q_t_at_t", powers}};
        emit(out.dump(2), flags.out);
    }
    return 0;
}

// --------------------------------------------------------------- laplacian --

int run_laplacian(int power, int traced_power, const std::string& input_path,
                  const CommonFlags& flags) {
    Json config{{"command", "laplacian"}};
    TracePolynomial<Rational> result;
    if (power > 0) {
        config["power"] = power;
        result = laplacian_power(power);
    } else if (traced_power > 0) {
        config["traced_power"] = traced_power;
        result = laplacian_traced_power(traced_power);
    } else if (!input_path.empty()) {
        config["input"] = input_path;
        const auto p = trace_polynomial_from_json<Rational>(read_json_file(input_path));
        result = laplacian_leading(p);
    } else {
        throw std::invalid_argument("laplacian needs --power, --traced-power, or --input");
    }
    if (flags.format == "pretty") {
        emit("# config " + config.dump() + "\n" + result.to_string(), flags.out);
    } else {
        emit(Json{{"config", config}, {"laplacian", json_of(result)}}.dump(2), flags.out);
    }
    return 0;
}

// -------------------------------------------------------------------- heat --

int run_heat(const std::string& coeffs_text, int power, int traced_power,
             const std::string& input_path, const std::string& t_text, bool extend,
             const CommonFlags& flags) {
    TracePolynomial<Rational> p;
    Json config{{"command", "heat"}, {"extend", extend}};
    if (!coeffs_text.empty()) {
        const auto coeffs = parse_rational_list(coeffs_text);
        config["coeffs"] = coeffs_text;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            p.add_term(TraceMonomial::power(static_cast<int>(j)), coeffs[j]);
        }
    } else if (power > 0) {
        config["power"] = power;
        p = TracePolynomial<Rational>::monomial(TraceMonomial::power(power));
    } else if (traced_power > 0) {
        config["traced_power"] = traced_power;
        p = TracePolynomial<Rational>::monomial(TraceMonomial::traced_power(traced_power));
    } else if (!input_path.empty()) {
        config["input"] = input_path;
        p = trace_polynomial_from_json<Rational>(read_json_file(input_path));
    } else {
        throw std::invalid_argument("heat needs --coeffs, --power, --traced-power, or --input");
    }

    std::vector<HeatPolynomial> components = heat_apply(p);
    if (extend) {
        for (auto& h : components) h = holomorphic_extend(std::move(h));
    }

    if (!t_text.empty()) {
        const Rational t = Rational::parse(t_text);
        config["t"] = t.to_string();
        TracePolynomial<double> value;
        for (const auto& h : components) value += h.evaluate(t.to_double());
        if (flags.format == "pretty") {
            emit("# config " + config.dump() + "\n" + value.to_string(), flags.out);
        } else {
            emit(Json{{"config", config}, {"heat_at_t", json_of(value)}}.dump(2), flags.out);
        }
        return 0;
    }

    if (flags.format == "pretty") {
        std::string text = "# config " + config.dump();
        for (const auto& h : components) text += "\n" + h.to_string();
        emit(text, flags.out);
    } else {
        Json comps = Json::array();
        for (const auto& h : components) comps.push_back(json_of(h));
        emit(Json{{"config", config}, {"heat", std::move(comps)}}.dump(2), flags.out);
    }
    return 0;
}

// ----------------------------------------------------------------- moments --

int run_moments(const std::string& k_text, const std::string& t_text, const CommonFlags& flags) {
    const auto powers = parse_int_list(k_text);
    Json config{{"command", "moments"}, {"k", powers}};
    std::optional<double> t;
    if (!t_text.empty()) {
        t = Rational::parse(t_text).to_double();
        config["t"] = t_text;
    }
    if (flags.format == "pretty") {
        std::ostringstream out;
        out.precision(17);
        out << "# config " << config.dump();
        for (int k : powers) {
            const MomentFunction nu = moment_nu(k);
            out << "\nnu_" << k << "(t) = e^(-" << k << "t/2)·(" << nu.poly.to_string() << ")";
            if (t) out << " = " << nu.value(*t) << " at t=" << *t;
        }
        emit(out.str(), flags.out);
    } else {
        Json rows = Json::array();
        for (int k : powers) {
            const MomentFunction nu = moment_nu(k);
            Json row{{"k", k}, {"prefactor_halfrate", k}, {"poly", json_of(nu.poly)}};
            if (t) row["value"] = nu.value(*t);
            rows.push_back(std::move(row));
        }
        emit(Json{{"config", config}, {"moments", std::move(rows)}}.dump(2), flags.out);
    }
    return 0;
}

// ---------------------------------------------------------------- simulate --

int run_simulate(const std::string& group_text, int n, double t, long long samples, int steps,
                 std::uint64_t seed, const std::string& stats_text, int bins,
                 const std::string& hist_path, const CommonFlags& flags) {
    SamplerConfig cfg;
    cfg.group = parse_group(group_text);
    cfg.n = n;
    cfg.t = t;
    cfg.samples = samples;
    cfg.steps = steps;
    cfg.seed = seed;
    cfg.threads = resolve_threads(flags.threads);
    cfg.validate();

    std::vector<int> powers;
    {
        std::stringstream stream(stats_text);
        std::string item;
        while (std::getline(stream, item, ',')) {
            if (item.rfind("tr", 0) != 0) {
                throw std::invalid_argument("unknown statistic '" + item + "' (expected trK)");
            }
            powers.push_back(std::stoi(item.substr(2)));
        }
    }
    if (powers.empty()) powers.push_back(1);

    StatReport report;
    report.statistic = "simulate";
    report.config = json_of(cfg);
    const auto stats = accumulate_samples(cfg, static_cast<int>(powers.size()),
        [&powers](const MatrixPoint& p, std::vector<std::complex<double>>& out) {
            for (std::size_t i = 0; i < powers.size(); ++i) {
                Matrix acc = Matrix::Identity(p.value.rows(), p.value.cols());
                for (int j = 0; j < powers[i]; ++j) acc = acc * p.value;
                out[i] = normalized_trace(acc);
            }
        });
    const auto summaries = stats.summarize();
    for (std::size_t i = 0; i < powers.size(); ++i) {
        StatRow row;
        row.label = "tr" + std::to_string(powers[i]);
        row.n = cfg.n;
        row.samples = summaries[i].count;
        row.mean_re = summaries[i].mean_re;
        row.mean_im = summaries[i].mean_im;
        row.se = summaries[i].se;
        row.variance = summaries[i].variance;
        if (cfg.group == GroupTag::unitary) {
            row.reference = moment_nu(powers[i]).value(cfg.t);
        } else {
            row.reference = 1.0;
        }
        report.rows.push_back(std::move(row));
    }

    std::optional<SpectralHistogram> hist;
    if (cfg.group == GroupTag::unitary) hist = spectral_histogram(cfg, bins);
    if (!hist_path.empty()) {
        if (!hist) throw std::invalid_argument("histograms require the unitary sampler");
        emit(csv_of(*hist), hist_path);
    }

    if (flags.format == "json") {
        Json out = json_of(report);
        if (hist) out["histogram"] = json_of(*hist);
        emit(out.dump(2), flags.out);
    } else {
        emit(render_report(report, flags.format), flags.out);
    }
    return 0;
}

// ------------------------------------------------------------------ verify --

int run_verify(const std::string& suite, int k, int l, const std::string& n_text, int trials,
               std::uint64_t seed, const CommonFlags& flags) {
    const auto sizes = parse_int_list(n_text);
    const int threads = resolve_threads(flags.threads);
    Json config{{"command", "verify"}, {"suite", suite},   {"k", k},       {"l", l},
                {"N", sizes},          {"trials", trials}, {"seed", seed}, {"threads", threads}};
    constexpr double kResidualTolerance = 1e-9;
    constexpr double kSlopeTarget = -2.0;
    constexpr double kSlopeWindow = 0.15;

    bool pass = true;
    Json results = Json::array();

    if (suite == "product_rule_scaling") {
        // Fixed pairs (f, scalar g) of degree <= 5.
        const std::vector<std::pair<TraceMonomial, TraceMonomial>> pairs = {
            {TraceMonomial::power(2), TraceMonomial::traced_power(1)},
            {TraceMonomial::canonicalize(2, {1}), TraceMonomial::traced_power(2)},
            {TraceMonomial::power(1), TraceMonomial::canonicalize(0, {1, 1})},
        };
        for (const auto& [f, g] : pairs) {
            const ScalingFit fit = product_rule_scaling(f, g, sizes, trials, seed, threads);
            const bool ok = std::abs(fit.slope - kSlopeTarget) <= kSlopeWindow;
            pass = pass && ok;
            Json row = json_of(fit);
            row["f"] = f.to_string();
            row["g"] = g.to_string();
            row["pass"] = ok;
            results.push_back(std::move(row));
        }
    } else {
        const IdentitySuite id = identity_suite_from_name(suite);
        for (const int n : sizes) {
            const ResidualReport report = verify_identity(id, k, l, n, trials, seed, threads);
            const bool ok = report.max_residual <= kResidualTolerance;
            pass = pass && ok;
            Json row = json_of(report);
            row["pass"] = ok;
            results.push_back(std::move(row));
        }
    }

    Json out{{"config", config}, {"pass", pass}, {"results", std::move(results)}};
    if (flags.format == "pretty") {
        std::ostringstream text;
        text << "# config " << config.dump() << "\n";
        for (const auto& row : out["results"]) {
            text << (row["pass"].get<bool>() ? "[PASS] " : "[FAIL] ");
            if (row.contains("identity")) {
                text << row["identity"].get<std::string>() << " N=" << row["N"]
                     << " max residual " << row["max_residual"].get<double>() << "\n";
            } else {
                text << "product_rule_scaling f=" << row["f"].get<std::string>()
                     << " g=" << row["g"].get<std::string>() << " slope "
                     << row["slope"].get<double>() << "\n";
            }
        }
        emit(text.str(), flags.out);
    } else {
        emit(out.dump(2), flags.out);
    }
    if (!pass) throw VerificationFailure("verification suite '" + suite + "' failed");
    return 0;
}

// -------------------------------------------------------------- experiment --

int run_experiment(const std::string& name, const std::string& powers_text,
                   const std::string& traces_text, const std::string& coeffs_text, double t,
                   const std::string& n_text, long long samples, int steps, std::uint64_t seed,
                   int kmax, const std::string& group_text, const CommonFlags& flags) {
    const int threads = resolve_threads(flags.threads);
    std::vector<StatReport> reports;

    if (name == "concentration") {
        const auto powers = powers_text.empty() ? std::vector<int>{1} : parse_int_list(powers_text);
        const auto sizes = parse_int_list(n_text);
        for (int power : powers) {
            reports.push_back(concentration_experiment(power, t, sizes, samples, seed,
                                                       parse_group(group_text), steps, threads));
        }
    } else if (name == "survival") {
        const auto powers = powers_text.empty() ? std::vector<int>{1} : parse_int_list(powers_text);
        const auto traces = traces_text.empty() ? std::vector<int>{1} : parse_int_list(traces_text);
        const auto monomial = TraceMonomial::canonicalize(powers.front(), traces);
        reports.push_back(survival_experiment(monomial, t, parse_int_list(n_text), samples, seed,
                                              steps, threads));
    } else if (name == "limit_transform") {
        const auto coeffs = parse_rational_list(coeffs_text);
        reports.push_back(limit_transform_experiment(coeffs, t, parse_int_list(n_text), samples,
                                                     seed, steps, threads));
    } else if (name == "isometry") {
        reports.push_back(isometry_experiment(kmax, t, samples, seed, steps, threads));
    } else if (name == "spectral_moments") {
        SamplerConfig cfg;
        cfg.n = parse_int_list(n_text).front();
        cfg.t = t;
        cfg.samples = samples;
        cfg.steps = steps;
        cfg.seed = seed;
        cfg.threads = threads;
        reports.push_back(spectral_moment_experiment(cfg, kmax));
    } else {
        throw std::invalid_argument("unknown experiment '" + name + "'");
    }

    if (flags.format == "json") {
        Json out = Json::array();
        for (const auto& report : reports) out.push_back(json_of(report));
        emit(reports.size() == 1 ? out[0].dump(2) : out.dump(2), flags.out);
    } else {
        std::string text;
        for (const auto& report : reports) text += render_report(report, flags.format);
        emit(text, flags.out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traceflow: large-N Segal-Bargmann calculus on U(N), with finite-N oracles and heat-kernel Monte Carlo"};
    app.require_subcommand(1);

    // transform
    std::string tf_coeffs;
    bool tf_symbolic = false;
    std::string tf_t;
    CommonFlags tf_flags;
    auto* transform = app.add_subcommand("transform", "Free Hall transform p(u) -> q_t(z)");
    transform->add_option("--coeffs", tf_coeffs, "Coefficients c0,c1,... as exact rationals")->required();
    transform->add_flag("--symbolic", tf_symbolic, "Emit q_t with symbolic t");
    transform->add_option("--t", tf_t, "Evaluate numerically at rational t");
    add_common(transform, tf_flags);

    // laplacian
    int lap_power = 0;
    int lap_traced = 0;
    std::string lap_input;
    CommonFlags lap_flags;
    auto* laplacian = app.add_subcommand("laplacian", "Symbolic Laplacian of powers or trace polynomials");
    laplacian->add_option("--power", lap_power, "Laplacian of U^k");
    laplacian->add_option("--traced-power", lap_traced, "Laplacian of tr(U^k)");
    laplacian->add_option("--input", lap_input, "Leading-order Laplacian of a trace-polynomial JSON file");
    add_common(laplacian, lap_flags);

    // heat
    std::string heat_coeffs;
    int heat_power = 0;
    int heat_traced = 0;
    std::string heat_input;
    std::string heat_t;
    bool heat_extend = false;
    CommonFlags heat_flags;
    auto* heat = app.add_subcommand("heat", "Heat semigroup e^{t Lap/2} at leading order");
    heat->add_option("--coeffs", heat_coeffs, "Single-variable polynomial c0,c1,...");
    heat->add_option("--power", heat_power, "Heat-evolve U^k");
    heat->add_option("--traced-power", heat_traced, "Heat-evolve tr(U^k)");
    heat->add_option("--input", heat_input, "Heat-evolve a trace-polynomial JSON file");
    heat->add_option("--t", heat_t, "Evaluate numerically at rational t");
    heat->add_flag("--extend", heat_extend, "Holomorphically extend to the complexified variable");
    add_common(heat, heat_flags);

    // moments
    std::string mom_k = "1,2,3";
    std::string mom_t;
    CommonFlags mom_flags;
    auto* moments = app.add_subcommand("moments", "Limit moments nu_k(t) of tr(U^k)");
    moments->add_option("--k", mom_k, "Comma-separated powers");
    moments->add_option("--t", mom_t, "Evaluate numerically at rational t");
    add_common(moments, mom_flags);

    // simulate
    std::string sim_group = "u";
    int sim_n = 8;
    double sim_t = 1.0;
    long long sim_samples = 100;
    int sim_steps = 0;
    std::uint64_t sim_seed = 0;
    std::string sim_stats = "tr1";
    int sim_bins = 64;
    std::string sim_hist;
    CommonFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "Sample the heat kernel and report trace statistics");
    simulate->add_option("--group", sim_group, "u (unitary) or gl (general linear)");
    simulate->add_option("--N", sim_n, "Matrix size")->required();
    simulate->add_option("--t", sim_t, "Diffusion time");
    simulate->add_option("--samples", sim_samples, "Sample count");
    simulate->add_option("--steps", sim_steps, "Euler steps (default max(200, 50t))");
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--stat", sim_stats, "Statistics trK, comma separated (default tr1)");
    simulate->add_option("--bins", sim_bins, "Histogram bins");
    simulate->add_option("--hist", sim_hist, "Write eigenangle histogram CSV to this path");
    add_common(simulate, sim_flags);

    // verify
    std::string ver_suite;
    int ver_k = 1;
    int ver_l = 1;
    std::string ver_n = "2,3,4";
    int ver_trials = 10;
    std::uint64_t ver_seed = 0;
    CommonFlags ver_flags;
    auto* verify = app.add_subcommand("verify", "Finite-N identity suites against the matrix oracle");
    verify->add_option("--suite", ver_suite,
                       "power_formula | traced_power_formula | eigenrelation | cross_term | product_rule_scaling")
        ->required();
    verify->add_option("--k", ver_k, "Power parameter");
    verify->add_option("--l", ver_l, "Second power (cross_term)");
    verify->add_option("--N", ver_n, "Matrix sizes, comma separated");
    verify->add_option("--trials", ver_trials, "Random points per size");
    verify->add_option("--seed", ver_seed, "RNG seed");
    add_common(verify, ver_flags);

    // experiment
    std::string exp_name;
    std::string exp_powers;
    std::string exp_traces;
    std::string exp_coeffs;
    double exp_t = 1.0;
    std::string exp_n = "8,16,32,64";
    long long exp_samples = 200;
    int exp_steps = 0;
    std::uint64_t exp_seed = 0;
    int exp_kmax = 3;
    std::string exp_group = "u";
    CommonFlags exp_flags;
    auto* experiment = app.add_subcommand("experiment", "Concentration / limit-transform / isometry studies");
    experiment->add_option("--name", exp_name,
                           "concentration | survival | limit_transform | isometry | spectral_moments")
        ->required();
    experiment->add_option("--powers", exp_powers, "Trace powers (concentration, survival)");
    experiment->add_option("--traces", exp_traces, "Traced powers of the survival monomial");
    experiment->add_option("--coeffs", exp_coeffs, "Polynomial coefficients (limit_transform)");
    experiment->add_option("--t", exp_t, "Diffusion time");
    experiment->add_option("--N", exp_n, "Matrix sizes, comma separated");
    experiment->add_option("--samples", exp_samples, "Sample count");
    experiment->add_option("--steps", exp_steps, "Euler steps");
    experiment->add_option("--seed", exp_seed, "RNG seed");
    experiment->add_option("--kmax", exp_kmax, "Largest power (isometry, spectral_moments)");
    experiment->add_option("--group", exp_group, "u or gl (concentration)");
    add_common(experiment, exp_flags);

    try {
        app.parse(argc, argv);
        if (transform->parsed()) {
            return run_transform(parse_rational_list(tf_coeffs), tf_symbolic, tf_t, tf_flags);
        }
        if (laplacian->parsed()) {
            return run_laplacian(lap_power, lap_traced, lap_input, lap_flags);
        }
        if (heat->parsed()) {
            return run_heat(heat_coeffs, heat_power, heat_traced, heat_input, heat_t, heat_extend,
                            heat_flags);
        }
        if (moments->parsed()) {
            return run_moments(mom_k, mom_t, mom_flags);
        }
        if (simulate->parsed()) {
            return run_simulate(sim_group, sim_n, sim_t, sim_samples, sim_steps, sim_seed,
                                sim_stats, sim_bins, sim_hist, sim_flags);
        }
        if (verify->parsed()) {
            return run_verify(ver_suite, ver_k, ver_l, ver_n, ver_trials, ver_seed, ver_flags);
        }
        if (experiment->parsed()) {
            return run_experiment(exp_name, exp_powers, exp_traces, exp_coeffs, exp_t, exp_n,
                                  exp_samples, exp_steps, exp_seed, exp_kmax, exp_group, exp_flags);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const VerificationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
