#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "traceflow/heat.hpp"
#include "traceflow/serialization.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

using namespace traceflow;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    const std::string command = std::string(TRACEFLOW_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult result;
    std::array<char, 4096> buffer{};
    while (std::size_t got = fread(buffer.data(), 1, buffer.size(), pipe)) {
        result.output.append(buffer.data(), got);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace

TEST_CASE("transform emits the exact symbolic document") {
    const auto result = run_cli("transform --coeffs 0,0,1 --symbolic --format json");
    REQUIRE(result.exit_code == 0);
    const Json out = Json::parse(result.output);
    CHECK(out.contains("config"));
    CHECK(out.at("config").at("coeffs").size() == 3);

    const auto expected = json_of(free_hall_transform({Rational(0), Rational(0), Rational(1)}));
    CHECK(out.at("q_t") == expected);

    // e^{-t}(z^2 - t z) literally
    const auto& comp = out.at("q_t").at("degree_components").at(0);
    CHECK(comp.at("prefactor_halfrate") == 2);
    CHECK(comp.at("coeffs_by_power").at("2") == Json::parse(R"([{"num":"1","den":"1"}])"));
    CHECK(comp.at("coeffs_by_power").at("1") ==
          Json::parse(R"([{"num":"0","den":"1"},{"num":"-1","den":"1"}])"));
}

TEST_CASE("transform evaluates numerically at rational t") {
    const auto result = run_cli("transform --coeffs 0,1 --t 1 --format json");
    REQUIRE(result.exit_code == 0);
    const Json out = Json::parse(result.output);
    const double value = out.at("q_t_at_t").at("1").get<double>();
    CHECK(value == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    const auto constant = run_cli("transform --coeffs 1 --symbolic --format json");
    REQUIRE(constant.exit_code == 0);
    const Json cj = Json::parse(constant.output);
    CHECK(cj.at("q_t").at("degree_components").at(0).at("coeffs_by_power").at("0") ==
          Json::parse(R"([{"num":"1","den":"1"}])"));
}

TEST_CASE("identical invocations are byte identical") {
    const std::string args = "simulate --group u --N 2 --t 0.5 --samples 8 --seed 7 --format json";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);

    const auto c = run_cli("transform --coeffs 0,0,0,1 --symbolic --format json");
    const auto d = run_cli("transform --coeffs 0,0,0,1 --symbolic --format json");
    CHECK(c.output == d.output);
}

TEST_CASE("emitted polynomials re-parse to equal values") {
    const auto result = run_cli("laplacian --power 3 --format json");
    REQUIRE(result.exit_code == 0);
    const Json out = Json::parse(result.output);
    const auto parsed = trace_polynomial_from_json<Rational>(out.at("laplacian"));
    CHECK(parsed == laplacian_power(3));

    const auto heat = run_cli("heat --power 2 --format json");
    REQUIRE(heat.exit_code == 0);
    const Json hj = Json::parse(heat.output);
    const auto h = heat_polynomial_from_json(hj.at("heat").at(0));
    CHECK(h.body == heat_apply(TracePolynomial<Rational>::monomial(TraceMonomial::power(2)))[0].body);
}

TEST_CASE("moments command matches the engine") {
    const auto result = run_cli("moments --k 1,2,3 --format json");
    REQUIRE(result.exit_code == 0);
    const Json out = Json::parse(result.output);
    REQUIRE(out.at("moments").size() == 3);
    CHECK(tpoly_from_json(out.at("moments").at(1).at("poly")) == moment_nu(2).poly);
}

TEST_CASE("simulate echoes its configuration and writes histograms") {
    const auto result = run_cli("simulate --group u --N 2 --t 0 --samples 1 --seed 3 --format json");
    REQUIRE(result.exit_code == 0);
    const Json out = Json::parse(result.output);
    CHECK(out.at("config").at("N") == 2);
    CHECK(out.at("config").at("seed") == 3);
    CHECK(out.at("config").at("steps") == 200);  // defaulted value echoed
    CHECK(out.at("rows").at(0).at("mean") == doctest::Approx(1.0));  // tr(I) = 1 at t = 0
    // histogram: all mass in one bin
    long long nonzero = 0;
    for (const auto& bin : out.at("histogram").at("bins")) {
        if (bin.at("count").get<long long>() > 0) ++nonzero;
    }
    CHECK(nonzero == 1);
}

TEST_CASE("verify exits zero on passing suites") {
    const auto result = run_cli("verify --suite eigenrelation --N 4 --trials 5 --format json");
    CHECK(result.exit_code == 0);
    const Json out = Json::parse(result.output);
    CHECK(out.at("pass") == true);
    CHECK(out.at("results").at(0).at("max_residual").get<double>() <= 1e-10);
}

TEST_CASE("usage and resource exit codes") {
    CHECK(run_cli("transform --coeffs abc --symbolic").exit_code == 2);
    CHECK(run_cli("verify --suite nope --N 2").exit_code == 2);
    CHECK(run_cli("transform").exit_code == 2);              // missing required flag
    CHECK(run_cli("laplacian --power -3").exit_code == 2);   // domain error
    // degree 25 single-variable input exceeds the symbolic cap
    std::string coeffs = "1";
    for (int i = 0; i < 25; ++i) coeffs += ",1";
    CHECK(run_cli("transform --coeffs " + coeffs + " --symbolic").exit_code == 3);
    // unwritable output path
    CHECK(run_cli("moments --k 1 --out /nonexistent-dir/out.json").exit_code == 4);
}
