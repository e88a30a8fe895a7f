#pragma once

#include <iosfwd>
#include <vector>

#include "toa/potential.hpp"
#include "toa/series_oracle.hpp"

namespace toa {

struct PhaseTerm {
    int m = 0;          ///< power of q
    int j = 0;          ///< 1/p^{2j+1}
    double coeff = 0.0; ///< carries every μ dependence
    int hbar_power = 0; ///< explicit power of ħ
};

/// 𝒯(q,p) = Σ coeff · ħ^{hbar_power} · q^m / p^{2j+1}.
struct PhaseSpaceSeries {
    std::vector<PhaseTerm> terms;
    double mass = 1.0;
    double hbar = 1.0;

    double evaluate(double q, double p) const;
    /// Only the terms carrying ħ^{hbar_power}, evaluated at the stored ħ.
    double evaluate_order(int hbar_power, double q, double p) const;
    /// Same with ħ supplied explicitly (the coefficients are ħ-free for order tables).
    double evaluate_order(int hbar_power, double q, double p, double hbar_value) const;
    /// Σ_m coeff q^m over the terms with the given ħ power and p-power 2j+1.
    double p_coefficient(int hbar_power, int j, double q) const;
};

/// Kernel monomial coeff · u^m v^n.
struct KernelMonomial {
    int m = 0;
    int n = 0;
    double coeff = 0.0;
};

/// Term map u^m v^n ↦ μ 2^{m+1} n! ħ^n / (i^{n+2} p^{n+1}) q^m. Odd n produce
/// imaginary output; NonRealResult if the imaginary residue exceeds 1e-14 of the
/// real magnitude. Every ħ in the input coefficients is taken as already numeric
/// (hbar_power of the output is 0).
PhaseSpaceSeries wigner_of_terms(const std::vector<KernelMonomial>& terms, double mass, double hbar);
PhaseSpaceSeries wigner_of_series(const AlphaTable& t, double mass, double hbar);
/// Order-resolved transform: α^{(s)}_{m,j} lands in hbar_power 2s with ħ-free coefficients.
PhaseSpaceSeries wigner_of_series(const AlphaOrderTable& t, double mass, double hbar);

/// Classical arrival time at the origin; ClassicallyForbidden if V >= H is
/// found on the path.
double classical_toa(const PotentialSeries& V, double q, double p, double tol = 1e-12);

/// Coefficients L_k of p^{-(2k+1)} in the local time of arrival at fixed q, k = 0..k_max.
std::vector<double> ltoa_terms(const PotentialSeries& V, double q, int k_max, double tol = 1e-13);
double ltoa_series(const PotentialSeries& V, double q, double p, int k_max, double tol = 1e-13);

struct ScalingResult {
    double exponent = 0.0; ///< NaN when vanishing
    bool vanishing = false;
    double value_1 = 0.0;
    double value_2 = 0.0;
};

/// Measured exponent log(𝒯ₙ(ħ₁)/𝒯ₙ(ħ₂)) / log(ħ₁/ħ₂) from the order-n series
/// transform (table truncated at J, M = 1 + degree·J).
ScalingResult hbar_scaling_check(const PotentialSeries& V, int n, double hbar_1, double hbar_2, double q, double p,
                                 int J = 14);

/// Rows (m, j, hbar_power, coeff).
void write_phase_series_csv(std::ostream& os, const PhaseSpaceSeries& s);

} // namespace toa
