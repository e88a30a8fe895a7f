#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "toa/errors.hpp"
#include "toa/quartic_reference.hpp"
#include "toa/specfun.hpp"
#include "toa/wigner.hpp"

using namespace toa;

namespace {

struct WignerRef {
    double q, p, hbar, w[3];
};

// λ = μ = 1; 40-digit values of the order-resolved phase-space series.
constexpr WignerRef kWigner[] = {
    {-1.0, 10.0, 1.0, {0.000018793467054884340219, 7.4311382977279372103e-8, 9.9041186100153303926e-10}},
    {-1.0, 10.0, 0.5, {4.6983667637210850548e-6, 4.6444614360799607564e-9, 1.5475185328148953739e-11}},
    {0.8, -6.0, 1.0, {0.00012269870061432465742, 2.3762671421546865083e-6, 1.5514032582456185357e-7}},
    {-1.0, 5.0, 1.0, {0.00050260370927870900378, 0.000026722666139085855963, 4.8061855813675187351e-6}},
};

} // namespace

TEST_CASE("single kernel monomial maps to the free arrival time") {
    const auto s = wigner_of_terms({{1, 0, 0.25}}, 2.0, 1.0);
    REQUIRE(s.terms.size() == 1);
    CHECK(s.evaluate(0.5, 4.0) == doctest::Approx(-2.0 * 0.5 / 4.0).epsilon(1e-15));
}

TEST_CASE("term map signs and powers") {
    // u^m v^2 -> μ 2^{m+1} 2! ħ² / (i⁴ p³) q^m
    const auto s = wigner_of_terms({{2, 2, 1.0}}, 1.5, 0.5);
    CHECK(s.evaluate(1.0, 1.0) == doctest::Approx(1.5 * 8.0 * 2.0 * 0.25).epsilon(1e-15));
    CHECK(s.evaluate(1.0, -1.0) == doctest::Approx(-1.5 * 8.0 * 2.0 * 0.25).epsilon(1e-15));
    CHECK_THROWS_AS(wigner_of_terms({{1, 1, 1.0}}, 1.0, 1.0), NonRealResult);
}

TEST_CASE("free particle series") {
    const auto t = build_alpha(PotentialSeries::free_particle(1.7, 1.0), 4, 4);
    const auto s = wigner_of_series(t, 1.7, 1.0);
    CHECK(s.evaluate(-2.0, 3.0) == doctest::Approx(1.7 * 2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("quartic orders match frozen values and closed forms") {
    const auto V = PotentialSeries::monomial(4, 1.0);
    const auto s = wigner_of_series(build_alpha_orders(V, 61, 20), 1.0, 1.0);
    for (const auto& r : kWigner) {
        const quartic::QuarticParams P(1.0, 1.0, r.hbar);
        const double closed[3] = {quartic::wigner_t1(P, r.q, r.p), quartic::wigner_t2(P, r.q, r.p),
                                  quartic::wigner_t3(P, r.q, r.p)};
        for (int n = 1; n <= 3; ++n) {
            CAPTURE(r.q);
            CAPTURE(r.p);
            CAPTURE(n);
            CHECK(s.evaluate_order(2 * n, r.q, r.p, r.hbar) == doctest::Approx(r.w[n - 1]).epsilon(1e-11));
            CHECK(closed[n - 1] == doctest::Approx(r.w[n - 1]).epsilon(1e-12));
        }
    }
}

TEST_CASE("quartic classical order is the Taylor series of the arrival time") {
    const double mu = 1.3, lam = 0.7, q = -0.9;
    const auto V = PotentialSeries::monomial(4, lam, mu, 1.0);
    const auto s = wigner_of_series(build_alpha_orders(V, 41, 10), mu, 1.0);
    double ratio = 1.0;
    for (int k = 0; k <= 10; ++k) {
        const double expected = -mu * q * ratio * std::pow(-2.0 * mu * lam * std::pow(q, 4), k);
        CHECK(s.p_coefficient(0, k, q) == doctest::Approx(expected).epsilon(1e-12));
        ratio *= (0.5 + k) / (1.25 + k);
    }
}

TEST_CASE("classical arrival time") {
    CHECK(classical_toa(PotentialSeries::free_particle(2.0), -1.0, 0.5) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(classical_toa(PotentialSeries::monomial(2, 0.5), -1.0, 1.0) ==
          doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
    CHECK(classical_toa(PotentialSeries::monomial(4, 1.0), -1.0, 1.0) ==
          doctest::Approx(0.63438474808613702154).epsilon(1e-12));
    CHECK(classical_toa(PotentialSeries::monomial(4, 1.0), -0.5, 2.0) ==
          doctest::Approx(0.24693857838854078089).epsilon(1e-12));
    CHECK(classical_toa(PotentialSeries::monomial(4, 1.0), -1.2, 0.7) ==
          doctest::Approx(0.65551754849997378732).epsilon(1e-12));
}

TEST_CASE("classical arrival time of random free particles") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> md(0.2, 5.0), qd(-3.0, 3.0), pd(0.1, 4.0);
    for (int k = 0; k < 50; ++k) {
        const double mu = md(rng), q = qd(rng), p = (k % 2 ? 1.0 : -1.0) * pd(rng);
        CHECK(classical_toa(PotentialSeries::free_particle(mu), q, p) ==
              doctest::Approx(-mu * q / p).epsilon(1e-13));
    }
}

TEST_CASE("arrival time parity for even potentials") {
    const auto V = PotentialSeries::monomial(4, 1.0);
    const double a = classical_toa(V, -0.8, 1.1);
    CHECK(classical_toa(V, 0.8, -1.1) == doctest::Approx(a).epsilon(1e-13));
    CHECK(classical_toa(V, 0.8, 1.1) == doctest::Approx(-a).epsilon(1e-13));
}

TEST_CASE("forbidden region") {
    CHECK_THROWS_AS(classical_toa(PotentialSeries::monomial(2, -1.0), -2.0, 1.0), ClassicallyForbidden);
}

TEST_CASE("local arrival time expansion") {
    const auto V = PotentialSeries::monomial(4, 1.0);
    const auto L = ltoa_terms(V, -1.0, 3);
    REQUIRE(L.size() == 4);
    CHECK(L[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ltoa_series(V, -1.0, 10.0, 10) == doctest::Approx(classical_toa(V, -1.0, 10.0)).epsilon(1e-10));
    const double exact = classical_toa(V, -0.5, 2.0);
    double prev = 1e300;
    for (int k = 0; k <= 6; ++k) {
        const double err = std::abs(ltoa_series(V, -0.5, 2.0, k) - exact);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("hbar scaling exponents") {
    const auto V = PotentialSeries::monomial(4, 1.0);
    for (int n = 1; n <= 3; ++n) {
        const auto r = hbar_scaling_check(V, n, 1.0, 0.5, -1.0, 10.0);
        CHECK_FALSE(r.vanishing);
        CHECK(r.exponent == doctest::Approx(2.0 * n).epsilon(1e-10));
    }
    const auto lin = hbar_scaling_check(PotentialSeries({1.0, 0.5}), 1, 1.0, 0.5, -1.0, 3.0);
    CHECK(lin.vanishing);
    CHECK(std::isnan(lin.exponent));
}

TEST_CASE("phase series csv") {
    const auto s = wigner_of_terms({{1, 0, 0.25}}, 1.0, 1.0);
    std::ostringstream os;
    write_phase_series_csv(os, s);
    CHECK(os.str().rfind("m,j,hbar_power,coeff\n", 0) == 0);
}
