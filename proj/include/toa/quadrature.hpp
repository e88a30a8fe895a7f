#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "toa/errors.hpp"

namespace toa::quad {

struct Options {
    double abs_tol = 0.0;
    double rel_tol = 1e-12;
    int max_intervals = 2000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool at_roundoff;
};

template <class F>
Segment gk15(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int k = 0; k < 7; ++k) {
        const double x = h * kXgk[static_cast<std::size_t>(k)];
        f1[static_cast<std::size_t>(k)] = f(c - x);
        f2[static_cast<std::size_t>(k)] = f(c + x);
        const double s = f1[static_cast<std::size_t>(k)] + f2[static_cast<std::size_t>(k)];
        resk += kWgk[static_cast<std::size_t>(k)] * s;
        resabs += kWgk[static_cast<std::size_t>(k)] *
                  (std::abs(f1[static_cast<std::size_t>(k)]) + std::abs(f2[static_cast<std::size_t>(k)]));
        if (k % 2 == 1) resg += kWg[static_cast<std::size_t>(k / 2)] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (std::size_t k = 0; k < 7; ++k) {
        resasc += kWgk[k] * (std::abs(f1[k] - mean) + std::abs(f2[k] - mean));
    }
    const double ah = std::abs(h);
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double floor = 50.0 * eps * resabs;
    bool roundoff = false;
    if (err <= floor) {
        err = floor;
        roundoff = true;
    }
    return {a, b, resk * h, err, roundoff};
}

} // namespace detail

/// Globally adaptive 15-point Gauss–Kronrod quadrature of f over [a, b] (b < a
/// gives the signed integral). Deterministic: the bisection order depends only
/// on f, a, b and the options. Throws QuadratureFailure when the interval cap is
/// reached before max(abs_tol, rel_tol*|I|) is met.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    if (a == b) return {};
    std::vector<detail::Segment> segs;
    segs.reserve(64);
    segs.push_back(detail::gk15(f, a, b));
    int evals = 15;
    for (;;) {
        double value = 0.0, error = 0.0, open_error = 0.0;
        std::size_t worst = segs.size();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            value += segs[i].value;
            error += segs[i].error;
            if (!segs[i].at_roundoff) {
                open_error += segs[i].error;
                if (worst == segs.size() || segs[i].error > segs[worst].error) worst = i;
            }
        }
        const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
        if (error <= target || worst == segs.size() || open_error <= target * 1e-3) {
            return {value, error, evals};
        }
        if (static_cast<int>(segs.size()) >= opt.max_intervals) {
            throw QuadratureFailure("adaptive quadrature reached " + std::to_string(opt.max_intervals) +
                                    " intervals (estimate " + std::to_string(value) + ", error " +
                                    std::to_string(error) + ")");
        }
        const detail::Segment s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        segs[worst] = detail::gk15(f, s.a, mid);
        segs.push_back(detail::gk15(f, mid, s.b));
        evals += 30;
    }
}

} // namespace toa::quad
