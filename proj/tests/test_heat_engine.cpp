#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "traceflow/heat.hpp"

#include <cmath>
#include <random>

using namespace traceflow;

namespace {

using RPoly = TracePolynomial<Rational>;

// Independent oracle for the limit moments: the combinatorial closed form
// nu_k(t) = e^{-kt/2} sum_{j=0}^{k-1} (-t)^j / j! * k^{j-1} * C(k, j+1),
// evaluated in exact rational arithmetic.
TPoly moment_poly_oracle(int k) {
    TPoly poly;
    for (int j = 0; j < k; ++j) {
        Rational c = pow(Rational(k), j - 1) * binomial(k, j + 1) / factorial(j);
        if (j % 2 == 1) c = -c;
        poly += TPoly::monomial(c, j);
    }
    return poly;
}

RationalMatrix matrix_power_exact(const RationalMatrix& a, int exponent) {
    RationalMatrix acc = RationalMatrix::Identity(a.rows(), a.cols());
    for (int i = 0; i < exponent; ++i) acc = (acc * a).eval();
    return acc;
}

}  // namespace

TEST_CASE("block construction") {
    const auto block_u = build_block(TraceMonomial::power(1));
    CHECK(block_u.basis.size() == 1);
    CHECK(block_u.generator(0, 0) == Rational(-1));

    const auto block_u2 = build_block(TraceMonomial::power(2));
    REQUIRE(block_u2.basis.size() == 2);
    CHECK(block_u2.basis[0] == TraceMonomial::power(2));
    CHECK(block_u2.basis[1] == TraceMonomial::canonicalize(1, {1}));

    const auto block_u3 = build_block(TraceMonomial::power(3));
    CHECK(block_u3.basis.size() == 4);
}

TEST_CASE("generator is minus degree plus strictly lower triangular") {
    for (const auto& seed : {TraceMonomial::power(5), TraceMonomial::traced_power(6),
                             TraceMonomial::canonicalize(2, {2, 1})}) {
        const auto block = build_block(seed);
        const int d = seed.degree();
        const auto n = static_cast<Eigen::Index>(block.basis.size());
        for (Eigen::Index i = 0; i < n; ++i) {
            CHECK(block.generator(i, i) == Rational(-d));
            for (Eigen::Index j = i + 1; j < n; ++j) {
                CHECK(block.generator(i, j) == Rational(0));
            }
        }
    }
}

TEST_CASE("nilpotency of the shifted generator") {
    for (int d = 1; d <= 8; ++d) {
        for (const auto& seed : {TraceMonomial::power(d), TraceMonomial::traced_power(d)}) {
            const auto block = build_block(seed);
            const auto n = static_cast<Eigen::Index>(block.basis.size());
            const RationalMatrix shifted =
                block.generator + Rational(d) * RationalMatrix::Identity(n, n);
            const RationalMatrix powered = matrix_power_exact(shifted, d);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) CHECK(powered(i, j) == Rational(0));
            }
        }
    }
}

TEST_CASE("degree cap") {
    CHECK_THROWS_AS(build_block(TraceMonomial::power(25)), ResourceLimitError);
    CHECK_THROWS_AS(heat_apply(RPoly::monomial(TraceMonomial::power(10)), 9), ResourceLimitError);
    CHECK_NOTHROW(build_block(TraceMonomial::power(10), 12));
}

TEST_CASE("heat evolution closed forms") {
    const TPoly t = TPoly::variable();

    const auto h1 = heat_apply(RPoly::monomial(TraceMonomial::power(1)));
    REQUIRE(h1.size() == 1);
    CHECK(h1[0].degree == 1);
    CHECK(h1[0].body == TracePolynomial<TPoly>::term(TraceMonomial::power(1), TPoly(Rational(1))));

    const auto h2 = heat_apply(RPoly::monomial(TraceMonomial::power(2)));
    REQUIRE(h2.size() == 1);
    TracePolynomial<TPoly> expected2;
    expected2.add_term(TraceMonomial::power(2), TPoly(Rational(1)));
    expected2.add_term(TraceMonomial::canonicalize(1, {1}), -t);
    CHECK(h2[0].body == expected2);

    const auto h3 = heat_apply(RPoly::monomial(TraceMonomial::power(3)));
    REQUIRE(h3.size() == 1);
    TracePolynomial<TPoly> expected3;
    expected3.add_term(TraceMonomial::power(3), TPoly(Rational(1)));
    expected3.add_term(TraceMonomial::canonicalize(1, {2}), -t);
    expected3.add_term(TraceMonomial::canonicalize(2, {1}), Rational(-2) * t);
    expected3.add_term(TraceMonomial::canonicalize(1, {1, 1}), TPoly::monomial(Rational(3, 2), 2));
    CHECK(h3[0].body == expected3);
}

TEST_CASE("heat evolution at t = 0 is the identity") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> coeff(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        RPoly p;
        for (int i = 0; i < 4; ++i) {
            std::uniform_int_distribution<int> k(0, 6);
            p.add_term(TraceMonomial::power(k(rng)), Rational(coeff(rng)));
            p.add_term(TraceMonomial::canonicalize(k(rng) / 2, {1 + k(rng) / 2}), Rational(coeff(rng)));
        }
        RPoly recovered;
        for (const auto& h : heat_apply(p)) recovered += h.at_zero();
        CHECK(recovered == p);
    }
}

TEST_CASE("numeric semigroup property") {
    for (const auto [s, t] : {std::pair{0.3, 0.7}, std::pair{1.0, 1.0}}) {
        for (int k = 1; k <= 6; ++k) {
            const auto block = build_block(TraceMonomial::power(k));
            const Eigen::MatrixXd combined = heat_propagator(block, s + t);
            const Eigen::MatrixXd composed = heat_propagator(block, s) * heat_propagator(block, t);
            CHECK((combined - composed).norm() <= 1e-12 * combined.norm());
        }
    }
}

TEST_CASE("heat evolution commutes with the trace") {
    for (int k = 1; k <= 8; ++k) {
        const auto bare = heat_apply(RPoly::monomial(TraceMonomial::power(k)));
        const auto traced = heat_apply(RPoly::monomial(TraceMonomial::traced_power(k)));
        REQUIRE(bare.size() == 1);
        REQUIRE(traced.size() == 1);
        CHECK(trace_close(bare[0].body) == traced[0].body);
    }
}

TEST_CASE("holomorphic extension is a relabeling") {
    auto h = heat_apply(RPoly::monomial(TraceMonomial::power(2)))[0];
    const auto body = h.body;
    CHECK(h.domain == VariableDomain::unitary);
    const auto extended = holomorphic_extend(std::move(h));
    CHECK(extended.domain == VariableDomain::complexified);
    CHECK(extended.body == body);

    CHECK_THROWS_AS(evaluate_traces_one(heat_apply(RPoly::monomial(TraceMonomial::power(2)))[0]),
                    std::invalid_argument);
}

TEST_CASE("free Hall transform of low powers") {
    const TPoly t = TPoly::variable();

    const auto q1 = free_hall_transform({Rational(0), Rational(1)});
    REQUIRE(q1.components.size() == 1);
    CHECK(q1.components[0].degree == 1);
    CHECK(q1.components[0].coeffs_by_power.at(1) == TPoly(Rational(1)));

    const auto q2 = free_hall_transform({Rational(0), Rational(0), Rational(1)});
    REQUIRE(q2.components.size() == 1);
    CHECK(q2.components[0].degree == 2);
    CHECK(q2.components[0].coeffs_by_power.at(2) == TPoly(Rational(1)));
    CHECK(q2.components[0].coeffs_by_power.at(1) == -t);

    const auto q3 = free_hall_transform({Rational(0), Rational(0), Rational(0), Rational(1)});
    REQUIRE(q3.components.size() == 1);
    const auto& c3 = q3.components[0].coeffs_by_power;
    CHECK(c3.at(3) == TPoly(Rational(1)));
    CHECK(c3.at(2) == Rational(-2) * t);
    CHECK(c3.at(1) == TPoly::monomial(Rational(3, 2), 2) - t);

    const auto q0 = free_hall_transform({Rational(1)});
    REQUIRE(q0.components.size() == 1);
    CHECK(q0.components[0].degree == 0);
    CHECK(q0.components[0].coeffs_by_power.at(0) == TPoly(Rational(1)));
}

TEST_CASE("transform is linear and degree preserving") {
    const auto q = free_hall_transform({Rational(2), Rational(0, 1), Rational(-3, 2)});
    // components: degree 0 (constant 2) and degree 2 scaled by -3/2
    REQUIRE(q.components.size() == 2);
    CHECK(q.components[0].coeffs_by_power.at(0) == TPoly(Rational(2)));
    CHECK(q.components[1].coeffs_by_power.at(2) == TPoly(Rational(-3, 2)));
    CHECK(q.components[1].coeffs_by_power.at(1) == Rational(-3, 2) * (-TPoly::variable()));
    CHECK(q.max_power() == 2);
}

TEST_CASE("leading coefficient of the transform is e^{-kt/2}") {
    for (int k = 1; k <= 6; ++k) {
        std::vector<Rational> coeffs(static_cast<std::size_t>(k) + 1, Rational(0));
        coeffs.back() = Rational(1);
        const auto q = free_hall_transform(coeffs);
        REQUIRE(q.components.size() == 1);
        CHECK(q.components[0].coeffs_by_power.at(k) == TPoly(Rational(1)));
    }
}

TEST_CASE("limit moments") {
    CHECK(moment_nu(1).poly == TPoly(Rational(1)));
    CHECK(moment_nu(2).poly == TPoly(Rational(1)) - TPoly::variable());
    CHECK(moment_nu(3).poly ==
          TPoly(Rational(1)) - Rational(3) * TPoly::variable() + TPoly::monomial(Rational(3, 2), 2));
    CHECK_THROWS_AS(moment_nu(0), std::domain_error);
    CHECK_THROWS_AS(moment_nu(-1), std::domain_error);

    for (int k = 1; k <= 8; ++k) {
        CHECK(moment_nu(k).poly == moment_poly_oracle(k));
    }

    // nu_1(t) = e^{-t/2}
    CHECK(moment_nu(1).value(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    // nu_2(1) = 0
    CHECK(moment_nu(2).value(1.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("single variable polynomial evaluation") {
    const auto q = free_hall_transform({Rational(0), Rational(1)});
    const auto values = q.evaluate(1.0);
    CHECK(values.at(1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));

    const auto q2 = free_hall_transform({Rational(0), Rational(0), Rational(1)});
    const auto v2 = q2.evaluate(1.0);
    CHECK(v2.at(2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(v2.at(1) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-14));
}
