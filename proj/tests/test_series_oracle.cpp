#include "doctest.h"

#include <cmath>
#include <sstream>

#include "toa/errors.hpp"
#include "toa/quartic_reference.hpp"
#include "toa/series_oracle.hpp"

using namespace toa;

namespace {

struct QuarticRef {
    double u, v, t[4];
};

// λ = μ = ħ = 1; 40-digit values from an independent rational recurrence.
constexpr QuarticRef kQuartic[] = {
    {1.0, 1.0, {0.25629354214526930509, 0.0052768555255699618949, 0.000032832920804640270934, 9.7494460262179731705e-8}},
    {0.5, 0.7, {0.12509572348052714324, 0.00015637780196212914365, 5.8658031104756268278e-8, 1.0478279696177128725e-11}},
    {1.3, 0.4, {0.32872473004942693831, 0.00029469003582957161065, 7.952087479816109417e-8, 1.0228583929571916109e-11}},
};

} // namespace

TEST_CASE("free particle table is u/4") {
    const auto t = build_alpha(PotentialSeries::free_particle(), 8, 8);
    for (int m = 0; m <= 8; ++m) {
        for (int n = 0; n <= 8; ++n) CHECK(t.at(m, n) == (m == 1 && n == 0 ? 0.25 : 0.0));
    }
    const auto s = series_kernel_eval(t, 0.8, 0.3);
    CHECK(s.value == 0.2);
    CHECK_FALSE(s.truncation_warning);
}

TEST_CASE("harmonic leading coefficient") {
    const double g = 0.7, mu = 1.3, hb = 0.9;
    const auto t = build_alpha(PotentialSeries({0.0, g}, mu, hb), 6, 6);
    CHECK(t.at(3, 2) == doctest::Approx(g / 24.0 * mu / (2 * hb * hb)).epsilon(1e-15));
}

TEST_CASE("odd v-powers vanish") {
    const auto t = build_alpha(PotentialSeries({0.2, -0.5, 0.1, 1.0}), 20, 20);
    for (int m = 0; m <= 20; ++m) {
        for (int n = 1; n <= 20; n += 2) CHECK(t.at(m, n) == 0.0);
    }
}

TEST_CASE("exact and double tables agree") {
    const PotentialSeries V({0.25, -0.5, 0.0, 1.0}, 1.5, 0.75);
    const auto d = build_alpha(V, 16, 16);
    const auto e = build_alpha_exact(V, 16, 16);
    for (int m = 0; m <= 16; ++m) {
        for (int n = 0; n <= 16; ++n) {
            const double x = static_cast<double>(e.at(m, n));
            CHECK(d.at(m, n) == doctest::Approx(x).epsilon(1e-13));
        }
    }
    CHECK(series_kernel_eval(d, 0.6, 0.4).value ==
          doctest::Approx(series_kernel_eval(e, 0.6, 0.4).value).epsilon(1e-14));
}

TEST_CASE("order split recombines into the full table") {
    const PotentialSeries V({0.0, 0.3, 0.0, 1.0}, 1.2, 0.8);
    const double c = V.coupling();
    const auto full = build_alpha(V, 8, 16);
    const auto ord = build_alpha_orders(V, 8, 8);
    for (int m = 0; m <= 8; ++m) {
        for (int j = 0; j <= 8; ++j) {
            double s = 0.0;
            for (int o = 0; o <= j; ++o) s += std::pow(c, j - o) * ord.at(o, m, j);
            CHECK(s == doctest::Approx(full.at(m, 2 * j)).epsilon(1e-13).scale(1e-300));
        }
    }
}

TEST_CASE("order sums reproduce the full kernel") {
    const PotentialSeries V({0.1, 0.2, -0.3, 0.5});
    const auto full = build_alpha(V, 40, 40);
    const auto ord = build_alpha_orders(V, 40, 20);
    double sum = 0.0;
    for (int n = 0; n <= 20; ++n) sum += order_series_eval(ord, n, 0.3, 0.3).value;
    CHECK(sum == doctest::Approx(series_kernel_eval(full, 0.3, 0.3).value).epsilon(1e-12));
}

TEST_CASE("quartic orders match frozen reference values") {
    const auto ord = build_alpha_orders(PotentialSeries::monomial(4, 1.0), 61, 20);
    for (const auto& r : kQuartic) {
        for (int n = 0; n <= 3; ++n) {
            CAPTURE(r.u);
            CAPTURE(n);
            CHECK(order_series_eval(ord, n, r.u, r.v).value == doctest::Approx(r.t[n]).epsilon(1e-12));
        }
    }
}

TEST_CASE("quartic orders match the closed forms") {
    const quartic::QuarticParams P(1.0, 1.0, 1.0);
    const auto ord = build_alpha_orders(PotentialSeries::monomial(4, 1.0), 61, 20);
    CHECK(order_series_eval(ord, 0, 0.5, 0.5).value == doctest::Approx(quartic::t0(P, 0.5, 0.5)).epsilon(1e-12));
    CHECK(order_series_eval(ord, 1, 0.5, 0.5).value == doctest::Approx(quartic::t1(P, 0.5, 0.5)).epsilon(1e-9));
    CHECK(order_series_eval(ord, 2, 0.5, 0.5).value == doctest::Approx(quartic::t2(P, 0.5, 0.5)).epsilon(1e-8));
    CHECK(order_series_eval(ord, 3, 0.5, 0.5).value == doctest::Approx(quartic::t3(P, 0.5, 0.5)).epsilon(1e-8));
}

TEST_CASE("truncation warning fires on a short table") {
    const auto t = build_alpha(PotentialSeries::monomial(4, 1.0), 5, 4);
    CHECK(series_kernel_eval(t, 2.0, 2.0).truncation_warning);
}

TEST_CASE("csv writers and argument checks") {
    const auto t = build_alpha(PotentialSeries::free_particle(), 4, 4);
    std::ostringstream os;
    write_alpha_csv(os, t);
    CHECK(os.str().rfind("m,n,value\n", 0) == 0);
    CHECK(os.str().find("1,0,0.25") != std::string::npos);
    const auto o = build_alpha_orders(PotentialSeries::monomial(2, 1.0), 4, 2);
    std::ostringstream oo;
    write_alpha_orders_csv(oo, o);
    CHECK(oo.str().rfind("s,m,j,value\n", 0) == 0);
    CHECK_THROWS_AS(build_alpha(PotentialSeries::free_particle(), 0, 4), InvalidArgument);
    CHECK_THROWS_AS(order_series_eval(o, 3, 0.1, 0.1), InvalidArgument);
}
