#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "toa/potential.hpp"

namespace toa {

using Rational = boost::multiprecision::cpp_rational;

/// α_{m,n} for 0 <= m <= M, 0 <= n <= N: T(u,v) = Σ α_{m,n} u^m v^n.
struct AlphaTable {
    int M = 0;
    int N = 0;
    std::vector<double> values;
    std::uint64_t potential_id = 0;

    double at(int m, int n) const {
        if (m < 0 || n < 0 || m > M || n > N) return 0.0;
        return values[static_cast<std::size_t>(m) * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(n)];
    }
};

/// Same table in exact rational arithmetic. Potential coefficients, μ and ħ are
/// taken as the exact binary values of their doubles.
struct ExactAlphaTable {
    int M = 0;
    int N = 0;
    std::vector<Rational> values;
    std::uint64_t potential_id = 0;

    const Rational& at(int m, int n) const;
};

/// ħ-free order split α^{(s)}_{m,j}: α_{m,2j} = Σ_s (μ/2ħ²)^{j-s} α^{(s)}_{m,j}.
/// Entries exist for 0 <= s <= J, 0 <= m <= M, 0 <= j <= J.
struct AlphaOrderTable {
    int M = 0;
    int J = 0;
    double coupling = 0.0; ///< μ/(2ħ²) of the potential the table was built from
    std::vector<double> values;
    std::uint64_t potential_id = 0;

    double at(int s, int m, int j) const {
        if (s < 0 || m < 0 || j < 0 || s > J || m > M || j > J) return 0.0;
        return values[index(s, m, j)];
    }
    std::size_t index(int s, int m, int j) const {
        return (static_cast<std::size_t>(s) * static_cast<std::size_t>(M + 1) + static_cast<std::size_t>(m)) *
                   static_cast<std::size_t>(J + 1) +
               static_cast<std::size_t>(j);
    }
};

struct SeriesValue {
    double value = 0.0;
    /// Largest |term| on the truncation boundary (m = M or the top v-power).
    double boundary_proxy = 0.0;
    /// boundary_proxy > 1e-10 |value|.
    bool truncation_warning = false;
};

AlphaTable build_alpha(const PotentialSeries& V, int M, int N);
ExactAlphaTable build_alpha_exact(const PotentialSeries& V, int M, int N);
AlphaOrderTable build_alpha_orders(const PotentialSeries& V, int M, int J);

SeriesValue series_kernel_eval(const AlphaTable& t, double u, double v);
/// Exact partial sum at the exact binary values of u and v, rounded once.
SeriesValue series_kernel_eval(const ExactAlphaTable& t, double u, double v);
/// Tₙ(u,v) = Σ_{m,j} u^m v^{2j} (μ/2ħ²)^{j-n} α^{(n)}_{m,j}.
SeriesValue order_series_eval(const AlphaOrderTable& t, int n, double u, double v);

/// Rows (m, n, value) of the nonzero entries.
void write_alpha_csv(std::ostream& os, const AlphaTable& t);
/// Rows (s, m, j, value) of the nonzero entries.
void write_alpha_orders_csv(std::ostream& os, const AlphaOrderTable& t);

} // namespace toa
