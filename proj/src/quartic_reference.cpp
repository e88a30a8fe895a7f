#include "toa/quartic_reference.hpp"

#include <cmath>
#include <string>

#include "toa/errors.hpp"
#include "toa/specfun.hpp"

namespace toa::quartic {

namespace {

using specfun::HypParams;
using specfun::hyp_pfq;

struct Term {
    double weight;
    HypParams f;
};

double combine(const Term* terms, int count, double z) {
    double acc = 0.0;
    for (int i = 0; i < count; ++i) acc += terms[i].weight * hyp_pfq(terms[i].f, z);
    return acc;
}

double phase_argument(const QuarticParams& P, double q, double p) {
    if (p == 0.0) throw InvalidArgument("momentum must be nonzero");
    const double z = -2.0 * P.mass * P.lambda * std::pow(q, 4) / (p * p);
    if (!(std::abs(z) < 1.0)) {
        throw DomainError("closed-form transform needs |2μλq⁴/p²| < 1, got " + std::to_string(-z));
    }
    return z;
}

} // namespace

QuarticParams::QuarticParams(double lambda_, double mass_, double hbar_)
    : lambda(lambda_), mass(mass_), hbar(hbar_) {
    if (!(lambda > 0.0) || !(mass > 0.0) || !(hbar > 0.0)) {
        throw InvalidArgument("quartic parameters λ, μ, ħ must be positive");
    }
}

double t0(const QuarticParams& P, double u, double v) {
    return 0.25 * u * specfun::hyp0f1(1.25, P.eta() * std::pow(u, 4) * v * v);
}

double t1(const QuarticParams& P, double u, double v) {
    const double eta = P.eta();
    const double z = eta * std::pow(u, 4) * v * v;
    const Term terms[] = {
        {5.0, {{1.0, 3.5}, {1.25, 2.5, 3.0}}},
        {-1.0, {{1.0}, {1.75, 3.0}}},
    };
    return eta * std::pow(u, 3) * std::pow(v, 4) / 24.0 * combine(terms, 2, z);
}

double t2(const QuarticParams& P, double u, double v) {
    const double eta = P.eta();
    const double z = eta * std::pow(u, 4) * v * v;
    const Term terms[] = {
        {1.0, {{2.0, 2.0, 2.0}, {1.0, 1.0, 2.25, 5.0}}},
        {43.0 / 2.0, {{2.0, 113.0 / 27.0}, {2.25, 86.0 / 27.0, 5.0}}},
        {-75.0 / 8.0, {{1.0, 8.5}, {1.75, 5.0, 7.5}}},
        {39.0 / 8.0, {{1.0}, {2.25, 5.0}}},
    };
    return eta * eta * std::pow(u, 5) * std::pow(v, 8) / 540.0 * combine(terms, 4, z);
}

double t3(const QuarticParams& P, double u, double v) {
    const double eta = P.eta();
    const double z = eta * std::pow(u, 4) * v * v;
    const Term terms[] = {
        {53.0 / 9.0, {{2.0, 2.0, 2.0, 60.0 / 7.0}, {1.0, 1.0, 2.25, 7.0, 53.0 / 7.0}}},
        {-7.0 / 15.0, {{1.0}, {2.25, 7.0}}},
        {27.0 / 4.0, {{2.0, 2.0, 2.0}, {1.0, 1.0, 2.25, 7.0}}},
        {-5.0 / 6.0, {{2.0, 2.0, 2.0}, {1.0, 1.0, 2.75, 7.0}}},
        {4921.0 / 72.0, {{2.0, 2.0}, {1.0, 2.25, 7.0}}},
        {8633.0 / 80.0, {{1.0, 21277.0 / 12644.0}, {8633.0 / 12644.0, 2.25, 7.0}}},
        {-1115.0 / 12.0, {{2.0, 515.0 / 69.0}, {2.75, 446.0 / 69.0, 7.0}}},
        {2275.0 / 16.0, {{1.0, 13.5}, {2.25, 7.0, 12.5}}},
        {-1375.0 / 24.0, {{1.0}, {2.75, 7.0}}},
        {19.0 / 45.0, {{2.0}, {2.25, 7.0}}},
    };
    return std::pow(eta, 3) * std::pow(u, 7) * std::pow(v, 12) / 56700.0 * combine(terms, 10, z);
}

double tau_classical(const QuarticParams& P, double q, double p) {
    if (p == 0.0) throw InvalidArgument("momentum must be nonzero");
    const double z = -2.0 * P.mass * P.lambda * std::pow(q, 4) / (p * p);
    return -(P.mass * q / p) * specfun::hyp2f1(0.5, 1.0, 1.25, z);
}

double wigner_t1(const QuarticParams& P, double q, double p) {
    const double z = phase_argument(P, q, p);
    const Term terms[] = {
        {2.5, {{1.0, 3.5}, {1.25}}},
        {-0.5, {{1.0, 2.5}, {1.75}}},
    };
    const double pre = -P.mass * P.mass * P.lambda * std::pow(q, 3) / std::pow(p, 5) * P.hbar * P.hbar;
    return pre * combine(terms, 2, z);
}

double wigner_t2(const QuarticParams& P, double q, double p) {
    const double z = phase_argument(P, q, p);
    const Term terms[] = {
        {14.0 / 3.0, {{2.0, 2.0, 2.0, 4.5}, {1.0, 1.0, 2.25}}},
        {301.0 / 3.0, {{2.0, 113.0 / 27.0, 4.5}, {2.25, 86.0 / 27.0}}},
        {-175.0 / 4.0, {{1.0, 4.5, 8.5}, {1.75, 7.5}}},
        {91.0 / 4.0, {{1.0, 4.5}, {2.25}}},
    };
    const double pre = -std::pow(P.mass, 3) * P.lambda * P.lambda * std::pow(q, 5) / std::pow(p, 9) *
                       std::pow(P.hbar, 4);
    return pre * combine(terms, 4, z);
}

double wigner_t3(const QuarticParams& P, double q, double p) {
    const double z = phase_argument(P, q, p);
    const Term terms[] = {
        {1166.0 / 3.0, {{2.0, 2.0, 2.0, 60.0 / 7.0, 6.5}, {1.0, 1.0, 2.25, 53.0 / 7.0}}},
        {-154.0 / 5.0, {{1.0, 6.5}, {2.25}}},
        {891.0 / 2.0, {{2.0, 2.0, 2.0, 6.5}, {1.0, 1.0, 2.25}}},
        {-55.0, {{2.0, 2.0, 2.0, 6.5}, {1.0, 1.0, 2.75}}},
        {54131.0 / 12.0, {{2.0, 2.0, 6.5}, {1.0, 2.25}}},
        {284889.0 / 40.0, {{1.0, 21277.0 / 12644.0, 6.5}, {8633.0 / 12644.0, 2.25}}},
        {-12265.0 / 2.0, {{2.0, 515.0 / 69.0, 6.5}, {2.75, 446.0 / 69.0}}},
        {75075.0 / 8.0, {{1.0, 6.5, 13.5}, {2.25, 12.5}}},
        {-15125.0 / 4.0, {{1.0, 6.5}, {2.75}}},
        {418.0 / 15.0, {{2.0, 6.5}, {2.25}}},
    };
    const double pre = -std::pow(P.mass, 4) * std::pow(P.lambda, 3) * std::pow(q, 7) / std::pow(p, 13) *
                       std::pow(P.hbar, 6);
    return pre * combine(terms, 10, z);
}

} // namespace toa::quartic
