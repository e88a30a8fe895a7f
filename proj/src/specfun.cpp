#include "toa/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "toa/errors.hpp"

namespace toa::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

// Sums 1 + sum_{k>=1} t_k where t_{k+1} = t_k * ratio(k), t_0 = 1.
template <class Ratio>
SeriesResult sum_hypergeometric(Ratio ratio, const SeriesControl& ctl, const char* what) {
    CompensatedSum acc;
    acc.add(1.0);
    double term = 1.0;
    double abs_sum = 1.0;
    for (int k = 0; k < ctl.max_terms; ++k) {
        term *= ratio(k);
        if (term == 0.0) {
            double v = acc.value();
            return {v, kEps * abs_sum, abs_sum / std::max(std::abs(v), std::numeric_limits<double>::min()), k + 1};
        }
        if (!std::isfinite(term)) {
            throw NonConvergence(std::string(what) + ": series term overflowed");
        }
        acc.add(term);
        abs_sum += std::abs(term);

        const double s = std::abs(acc.value());
        const double tol = ctl.abs_tol + ctl.rel_tol * s;
        if (std::abs(term) >= tol) continue;
        const double next = std::abs(ratio(k + 1));
        if (next >= 1.0) continue;
        const double tail = std::abs(term) * next / (1.0 - next);
        if (tail > tol) continue;

        double v = acc.value();
        double cond = abs_sum / std::max(std::abs(v), std::numeric_limits<double>::min());
        return {v, tail + kEps * abs_sum, cond, k + 2};
    }
    throw NonConvergence(std::string(what) + ": no convergence within " +
                         std::to_string(ctl.max_terms) + " terms");
}

void check_denominators(const std::vector<double>& b) {
    for (double x : b) {
        if (is_nonpositive_integer(x)) {
            throw DomainError("hypergeometric denominator parameter is zero or a negative integer");
        }
    }
}

bool terminates(const std::vector<double>& a) {
    for (double x : a) {
        if (is_nonpositive_integer(x)) return true;
    }
    return false;
}

constexpr double kBesselSwitch = -9.0;

} // namespace

double pochhammer(double x, int k) {
    if (k < 0) throw InvalidArgument("pochhammer: k must be non-negative");
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x + i;
    return r;
}

SeriesResult hyp0f1_detail(double b, double z, const SeriesControl& ctl) {
    if (is_nonpositive_integer(b)) throw DomainError("0F1: b must not be zero or a negative integer");
    if (z == 0.0) return {1.0, 0.0, 1.0, 1};
    if (z < kBesselSwitch && b >= 1.0) {
        // Oscillatory regime: the series would lose ~2*sqrt(-z)/ln(10) digits.
        const double x = -z;
        const double scale = std::tgamma(b) * std::pow(x, 0.5 * (1.0 - b));
        const double v = scale * std::cyl_bessel_j(b - 1.0, 2.0 * std::sqrt(x));
        return {v, 4.0 * kEps * std::abs(scale), 1.0, 0};
    }
    return sum_hypergeometric(
        [b, z](int k) { return z / ((b + k) * (k + 1.0)); }, ctl, "0F1");
}

double hyp0f1(double b, double z, const SeriesControl& ctl) { return hyp0f1_detail(b, z, ctl).value; }

SeriesResult hyp_pfq_detail(const HypParams& params, double z, const SeriesControl& ctl) {
    const auto& a = params.numerator;
    const auto& b = params.denominator;
    check_denominators(b);
    if (a.empty() && b.size() == 1) return hyp0f1_detail(b[0], z, ctl);

    const std::size_t p = a.size();
    const std::size_t q = b.size();
    if (z == 0.0) return {1.0, 0.0, 1.0, 1};

    if (!terminates(a)) {
        if (p == 2 && q == 1 && z <= -0.5) {
            // Pfaff: 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))
            const double w = z / (z - 1.0);
            HypParams t{{a[0], b[0] - a[1]}, {b[0]}};
            SeriesResult r = hyp_pfq_detail(t, w, ctl);
            const double f = std::pow(1.0 - z, -a[0]);
            r.value *= f;
            r.error_estimate *= std::abs(f);
            return r;
        }
        if (p == q + 1 && std::abs(z) >= 1.0) {
            throw DomainError("pFq with p = q+1 requires |z| < 1 (argument " + std::to_string(z) + ")");
        }
        if (p > q + 1) throw DomainError("pFq with p > q+1 diverges for non-terminating parameters");
    }

    return sum_hypergeometric(
        [&a, &b, z](int k) {
            double r = z / (k + 1.0);
            for (double x : a) r *= x + k;
            for (double x : b) r /= x + k;
            return r;
        },
        ctl, "pFq");
}

double hyp_pfq(const HypParams& params, double z, const SeriesControl& ctl) {
    return hyp_pfq_detail(params, z, ctl).value;
}

double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctl) {
    return hyp_pfq(HypParams{{a, b}, {c}}, z, ctl);
}

} // namespace toa::specfun
