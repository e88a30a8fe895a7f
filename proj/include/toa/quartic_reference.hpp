#pragma once

namespace toa::quartic {

/// V(q) = λ q⁴ with mass μ and ħ; η = μλ/(32ħ²) is derived on demand.
struct QuarticParams {
    double lambda = 1.0;
    double mass = 1.0;
    double hbar = 1.0;

    QuarticParams() = default;
    QuarticParams(double lambda_, double mass_, double hbar_);

    double eta() const { return mass * lambda / (32.0 * hbar * hbar); }
};

/// (u/4) ₀F₁(;5/4; η u⁴ v²).
double t0(const QuarticParams& P, double u, double v);
double t1(const QuarticParams& P, double u, double v);
double t2(const QuarticParams& P, double u, double v);
double t3(const QuarticParams& P, double u, double v);

/// Classical arrival time -(μq/p) ₂F₁(1/2, 1; 5/4; -2μλq⁴/p²).
double tau_classical(const QuarticParams& P, double q, double p);

/// Phase-space transforms of t1..t3; the series argument -2μλq⁴/p² must lie in (-1, 1).
double wigner_t1(const QuarticParams& P, double q, double p);
double wigner_t2(const QuarticParams& P, double q, double p);
double wigner_t3(const QuarticParams& P, double q, double p);

} // namespace toa::quartic
