#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace toa {

/**
 * @brief Entire analytic potential V(q) = sum_{s=1}^{S} a_s q^s, together with
 *        the particle mass and the reduced Planck constant.
 *
 * The constant term is never stored: every kernel depends on the potential only
 * through differences V(x) - V(y). `shifted()` re-expands about a new origin and
 * records the constant it had to discard.
 *
 * Instances are immutable after construction.
 */
class PotentialSeries {
public:
    static constexpr int kDefaultMaxDegree = 32;

    /// `coeffs[0]` is a_1. An empty list is the free particle.
    explicit PotentialSeries(std::vector<double> coeffs, double mass = 1.0, double hbar = 1.0,
                             int max_degree = kDefaultMaxDegree);

    static PotentialSeries free_particle(double mass = 1.0, double hbar = 1.0);
    /// a_degree = strength, everything else zero.
    static PotentialSeries monomial(int degree, double strength, double mass = 1.0,
                                    double hbar = 1.0);

    /// Horner evaluation of V(q).
    double operator()(double q) const;
    double eval(double q) const { return (*this)(q); }

    /// n-th derivative V^{(n)}(q); zero once n exceeds the degree.
    double derivative(int n, double q) const;

    /// Series of q ↦ V(q + x) in powers of q, constant dropped.
    PotentialSeries shifted(double x) const;

    /// True iff a_s = 0 for every s >= 3 (free, linear-ramp and harmonic cases).
    bool is_linear() const;

    /// a_1 .. a_S.
    std::span<const double> coefficients() const { return coeffs_; }
    /// a_s, zero outside 1..S.
    double coefficient(int s) const;
    /// S: index of the last stored coefficient (trailing zeros kept).
    int degree() const { return static_cast<int>(coeffs_.size()); }
    /// Largest s with a_s != 0, or 0 for the free particle.
    int effective_degree() const;

    double mass() const { return mass_; }
    double hbar() const { return hbar_; }
    /// μ / (2ħ²), the coupling that multiplies every potential difference.
    double coupling() const { return mass_ / (2.0 * hbar_ * hbar_); }
    /// Constant discarded by the last shift (0 for unshifted potentials).
    double dropped_constant() const { return dropped_constant_; }

    PotentialSeries with_constants(double mass, double hbar) const;

    /// Stable hash of (coefficients, μ, ħ) used to tag derived tables and grids.
    std::uint64_t fingerprint() const;

    std::string describe() const;

private:
    std::vector<double> coeffs_;
    double mass_;
    double hbar_;
    double dropped_constant_ = 0.0;
};

/// Parses {"coeffs":[a1,a2,...],"mass":μ,"hbar":ħ}; mass and hbar default to 1.
PotentialSeries potential_from_json(const nlohmann::json& doc);
nlohmann::json potential_to_json(const PotentialSeries& V);

} // namespace toa
