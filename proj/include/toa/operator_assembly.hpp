#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "toa/kernel_engine.hpp"
#include "toa/potential.hpp"

namespace toa {

/// N uniform nodes on [-L, L].
struct CoordinateGrid {
    double L = 1.0;
    int N = 2;
    double step = 0.0;
    std::vector<double> q;

    CoordinateGrid() = default;
    CoordinateGrid(double L_, int N_);
};

/// K[i][j] = (μ/iħ) sgn(qᵢ - qⱼ) T(qᵢ + qⱼ, qᵢ - qⱼ), zero diagonal.
struct OperatorMatrix {
    CoordinateGrid grid;
    int n_max = 0;
    double mass = 1.0;
    double hbar = 1.0;
    std::vector<std::complex<double>> entries;

    int size() const { return grid.N; }
    std::complex<double>& at(int i, int j) {
        return entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.N) + static_cast<std::size_t>(j)];
    }
    const std::complex<double>& at(int i, int j) const {
        return entries[static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.N) + static_cast<std::size_t>(j)];
    }
};

struct Wavefunction {
    CoordinateGrid grid;
    std::vector<std::complex<double>> samples;
    double norm = 1.0; ///< √(Σ|ψ|²Δq) before the last normalize()

    void normalize();

    static Wavefunction gaussian(const CoordinateGrid& grid, double q0, double p0, double sigma, double hbar = 1.0);
    /// Rows "q,re,im" (header optional), resampled onto the grid by linear
    /// interpolation, zero outside the sampled range, then normalized.
    static Wavefunction from_csv(std::istream& is, const CoordinateGrid& grid);
};

OperatorMatrix assemble(const PotentialSeries& V, int n_max, double L, int N, const EngineOptions& options = {});

struct ExpectationValue {
    double value = 0.0;
    double imag_residue = 0.0;
};

/// Σᵢⱼ conj(ψᵢ) K[i][j] ψⱼ Δq²; NonRealExpectation if the imaginary part
/// exceeds 1e-10 |real part| + 1e-14.
double expectation(const OperatorMatrix& K, const Wavefunction& psi);
ExpectationValue expectation_detail(const OperatorMatrix& K, const Wavefunction& psi);

/// max over (i,j) of |K[i][j] - conj(K[j][i])|.
double hermiticity_defect(const OperatorMatrix& K);

/// Rows (i, j, re, im).
void write_matrix_csv(std::ostream& os, const OperatorMatrix& K);

} // namespace toa
