#include "toa/wigner.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <ostream>

#include "toa/errors.hpp"
#include "toa/quadrature.hpp"

namespace toa {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// 1 / i^k
std::complex<double> inverse_i_power(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
    }
}

double monomial_sum(const PhaseSpaceSeries& s, double q, double p, double hbar_value, bool filter, int hbar_power) {
    double acc = 0.0;
    for (const auto& t : s.terms) {
        if (filter && t.hbar_power != hbar_power) continue;
        acc += t.coeff * std::pow(hbar_value, t.hbar_power) * std::pow(q, t.m) / std::pow(p, 2 * t.j + 1);
    }
    return acc;
}

} // namespace

double PhaseSpaceSeries::evaluate(double q, double p) const { return monomial_sum(*this, q, p, hbar, false, 0); }

double PhaseSpaceSeries::evaluate_order(int hbar_power, double q, double p) const {
    return monomial_sum(*this, q, p, hbar, true, hbar_power);
}

double PhaseSpaceSeries::evaluate_order(int hbar_power, double q, double p, double hbar_value) const {
    return monomial_sum(*this, q, p, hbar_value, true, hbar_power);
}

double PhaseSpaceSeries::p_coefficient(int hbar_power, int j, double q) const {
    double acc = 0.0;
    for (const auto& t : terms) {
        if (t.hbar_power == hbar_power && t.j == j) acc += t.coeff * std::pow(q, t.m);
    }
    return acc;
}

PhaseSpaceSeries wigner_of_terms(const std::vector<KernelMonomial>& terms, double mass, double hbar) {
    if (!(mass > 0.0) || !(hbar > 0.0)) throw InvalidArgument("mass and hbar must be positive");
    PhaseSpaceSeries out;
    out.mass = mass;
    out.hbar = hbar;
    double real_size = 0.0;
    double imag_size = 0.0;
    for (const auto& k : terms) {
        if (k.coeff == 0.0) continue;
        if (k.m < 0 || k.n < 0) throw InvalidArgument("kernel monomial powers must be non-negative");
        const std::complex<double> w = mass * std::ldexp(1.0, k.m + 1) * factorial(k.n) * std::pow(hbar, k.n) *
                                       inverse_i_power(k.n + 2) * k.coeff;
        real_size += std::abs(w.real());
        imag_size += std::abs(w.imag());
        if (k.n % 2 == 0 && w.real() != 0.0) out.terms.push_back({k.m, k.n / 2, w.real(), 0});
    }
    if (imag_size > 1e-14 * real_size) {
        throw NonRealResult("Wigner transform left an imaginary residue of relative size " +
                            std::to_string(imag_size / std::max(real_size, std::numeric_limits<double>::min())));
    }
    return out;
}

PhaseSpaceSeries wigner_of_series(const AlphaTable& t, double mass, double hbar) {
    std::vector<KernelMonomial> terms;
    for (int m = 0; m <= t.M; ++m) {
        for (int n = 0; n <= t.N; ++n) {
            const double a = t.at(m, n);
            if (a != 0.0) terms.push_back({m, n, a});
        }
    }
    return wigner_of_terms(terms, mass, hbar);
}

PhaseSpaceSeries wigner_of_series(const AlphaOrderTable& t, double mass, double hbar) {
    if (!(mass > 0.0) || !(hbar > 0.0)) throw InvalidArgument("mass and hbar must be positive");
    PhaseSpaceSeries out;
    out.mass = mass;
    out.hbar = hbar;
    for (int s = 0; s <= t.J; ++s) {
        for (int m = 0; m <= t.M; ++m) {
            for (int j = s; j <= t.J; ++j) {
                const double a = t.at(s, m, j);
                if (a == 0.0) continue;
                const double sign = (j % 2 == 0) ? -1.0 : 1.0;
                const double c = mass * std::ldexp(1.0, m + 1) * factorial(2 * j) * sign *
                                 std::pow(0.5 * mass, j - s) * a;
                out.terms.push_back({m, j, c, 2 * s});
            }
        }
    }
    return out;
}

double classical_toa(const PotentialSeries& V, double q, double p, double tol) {
    if (p == 0.0) throw InvalidArgument("classical_toa: momentum must be nonzero");
    if (!(tol > 0.0)) throw InvalidArgument("classical_toa: tolerance must be positive");
    if (q == 0.0) return 0.0;
    const double mu = V.mass();
    const double H = p * p / (2.0 * mu) + V(q);
    constexpr int kSamples = 4096;
    for (int i = 0; i < kSamples; ++i) {
        const double x = q * static_cast<double>(i) / kSamples;
        if (V(x) >= H) {
            throw ClassicallyForbidden("V(" + std::to_string(x) + ") >= H on the path to the origin");
        }
    }
    // q' = q (1 - t²) keeps the integrand finite when H - V vanishes at q' = q.
    auto f = [&](double t) {
        const double x = q * (1.0 - t * t);
        const double gap = H - V(x);
        if (gap <= 0.0) return 0.0;
        return 2.0 * q * t / std::sqrt(gap);
    };
    quad::Options opt;
    opt.rel_tol = tol;
    opt.max_intervals = 4000;
    const double I = quad::integrate(f, 0.0, 1.0, opt).value;
    return -std::copysign(1.0, p) * std::sqrt(0.5 * mu) * I;
}

std::vector<double> ltoa_terms(const PotentialSeries& V, double q, int k_max, double tol) {
    if (k_max < 0) throw InvalidArgument("ltoa: k_max must be non-negative");
    const double mu = V.mass();
    const double Vq = V(q);
    quad::Options opt;
    opt.rel_tol = tol;
    std::vector<double> out;
    double dfact = 1.0; // (2k-1)!!
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) dfact *= 2.0 * k - 1.0;
        double moment;
        if (k == 0) {
            moment = q;
        } else {
            moment = quad::integrate([&](double x) { return std::pow(Vq - V(x), k); }, 0.0, q, opt).value;
        }
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        out.push_back(-sign * dfact / factorial(k) * std::pow(mu, k + 1) * moment);
    }
    return out;
}

double ltoa_series(const PotentialSeries& V, double q, double p, int k_max, double tol) {
    if (p == 0.0) throw InvalidArgument("ltoa: momentum must be nonzero");
    const auto L = ltoa_terms(V, q, k_max, tol);
    double acc = 0.0;
    for (std::size_t k = 0; k < L.size(); ++k) acc += L[k] / std::pow(p, 2 * static_cast<int>(k) + 1);
    return acc;
}

ScalingResult hbar_scaling_check(const PotentialSeries& V, int n, double hbar_1, double hbar_2, double q, double p,
                                 int J) {
    if (n < 1) throw InvalidArgument("hbar_scaling_check: order must be >= 1");
    if (J <= n) throw InvalidArgument("hbar_scaling_check: table too short for the requested order");
    if (!(hbar_1 > 0.0) || !(hbar_2 > 0.0) || hbar_1 == hbar_2) {
        throw InvalidArgument("hbar_scaling_check: needs two distinct positive ħ values");
    }
    if (p == 0.0) throw InvalidArgument("hbar_scaling_check: momentum must be nonzero");
    ScalingResult r;
    if (V.is_linear()) {
        r.vanishing = true;
        r.exponent = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const int M = 1 + std::max(1, V.degree()) * J;
    const auto table = build_alpha_orders(V, M, J);
    const auto series = wigner_of_series(table, V.mass(), V.hbar());
    r.value_1 = series.evaluate_order(2 * n, q, p, hbar_1);
    r.value_2 = series.evaluate_order(2 * n, q, p, hbar_2);
    if (std::abs(r.value_1) < 1e-300 || std::abs(r.value_2) < 1e-300) {
        throw DegenerateSignal("order-" + std::to_string(n) + " transform is numerically zero at this point");
    }
    r.exponent = std::log(r.value_1 / r.value_2) / std::log(hbar_1 / hbar_2);
    return r;
}

void write_phase_series_csv(std::ostream& os, const PhaseSpaceSeries& s) {
    os << "m,j,hbar_power,coeff\n";
    char buf[64];
    for (const auto& t : s.terms) {
        std::snprintf(buf, sizeof buf, "%.17g", t.coeff);
        os << t.m << ',' << t.j << ',' << t.hbar_power << ',' << buf << '\n';
    }
}

} // namespace toa
