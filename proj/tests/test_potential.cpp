#include "doctest.h"

#include <cmath>
#include <random>

#include "toa/errors.hpp"
#include "toa/potential.hpp"

using toa::PotentialSeries;

TEST_CASE("evaluation and derivatives of a cubic") {
    PotentialSeries V({1.0, -2.0, 0.5}, 2.0, 0.5);
    CHECK(V(0.0) == 0.0);
    CHECK(V(2.0) == doctest::Approx(2.0 - 8.0 + 4.0));
    CHECK(V.derivative(0, 1.5) == doctest::Approx(V(1.5)));
    CHECK(V.derivative(1, 1.0) == doctest::Approx(1.0 - 4.0 + 1.5));
    CHECK(V.derivative(2, 1.0) == doctest::Approx(-4.0 + 3.0));
    CHECK(V.derivative(3, 7.0) == doctest::Approx(3.0));
    CHECK(V.derivative(4, 7.0) == 0.0);
    CHECK(V.coupling() == doctest::Approx(2.0 / (2.0 * 0.25)));
    CHECK(V.degree() == 3);
    CHECK(V.effective_degree() == 3);
    CHECK(V.coefficient(2) == -2.0);
    CHECK(V.coefficient(0) == 0.0);
    CHECK(V.coefficient(9) == 0.0);
    CHECK_FALSE(V.is_linear());
}

TEST_CASE("factories") {
    const auto F = PotentialSeries::free_particle();
    CHECK(F.effective_degree() == 0);
    CHECK(F.is_linear());
    CHECK(F(3.0) == 0.0);
    const auto Q = PotentialSeries::monomial(4, 2.5);
    CHECK(Q(2.0) == doctest::Approx(40.0));
    CHECK(Q.degree() == 4);
    CHECK(PotentialSeries::monomial(2, 0.5).is_linear());
    CHECK(PotentialSeries({1.0, 0.0, 0.0}).is_linear());
    CHECK(PotentialSeries({1.0, 0.0, 0.0}).effective_degree() == 1);
}

TEST_CASE("derivatives agree with finite differences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> cd(-1.0, 1.0), qd(-1.5, 1.5);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> c(6);
        for (auto& x : c) x = cd(rng);
        PotentialSeries V(c);
        const double q = qd(rng), h = 1e-4;
        const double fd1 = (V(q + h) - V(q - h)) / (2 * h);
        const double fd2 = (V(q + h) - 2 * V(q) + V(q - h)) / (h * h);
        CHECK(V.derivative(1, q) == doctest::Approx(fd1).epsilon(1e-6));
        CHECK(std::abs(V.derivative(2, q) - fd2) < 1e-5 * std::max(1.0, std::abs(fd2)));
    }
}

TEST_CASE("shift round trip") {
    PotentialSeries V({0.3, -1.0, 0.0, 2.0});
    const double x = 0.7;
    const auto W = V.shifted(x);
    CHECK(W.dropped_constant() == doctest::Approx(V(x)));
    for (double q : {-1.0, -0.2, 0.0, 0.4, 1.3}) {
        CHECK(W(q) + W.dropped_constant() == doctest::Approx(V(q + x)).epsilon(1e-13));
    }
    const auto back = W.shifted(-x);
    for (std::size_t s = 0; s < V.coefficients().size(); ++s) {
        CHECK(back.coefficients()[s] == doctest::Approx(V.coefficients()[s]).epsilon(1e-13));
    }
}

TEST_CASE("invalid construction") {
    CHECK_THROWS_AS(PotentialSeries({1.0}, 0.0, 1.0), toa::InvalidArgument);
    CHECK_THROWS_AS(PotentialSeries({1.0}, 1.0, -1.0), toa::InvalidArgument);
    CHECK_THROWS_AS(PotentialSeries({std::nan("")}), toa::InvalidArgument);
    CHECK_THROWS_AS(PotentialSeries(std::vector<double>(40, 1.0)), toa::InvalidArgument);
}

TEST_CASE("json round trip and fingerprint") {
    PotentialSeries V({0.0, 0.5, 0.0, 1.0}, 1.5, 0.25);
    const auto j = toa::potential_to_json(V);
    const auto W = toa::potential_from_json(j);
    CHECK(W.mass() == 1.5);
    CHECK(W.hbar() == 0.25);
    CHECK(W.degree() == 4);
    CHECK(W.fingerprint() == V.fingerprint());
    CHECK(V.with_constants(1.0, 1.0).fingerprint() != V.fingerprint());
    const auto D = toa::potential_from_json(nlohmann::json::parse(R"({"coeffs":[0,0,0,1]})"));
    CHECK(D.mass() == 1.0);
    CHECK(D.hbar() == 1.0);
    CHECK_THROWS_AS(toa::potential_from_json(nlohmann::json::parse(R"({"coeffs":"x"})")), toa::InvalidArgument);
    CHECK_FALSE(V.describe().empty());
}
