#include "toa/operator_assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "toa/errors.hpp"

namespace toa {

CoordinateGrid::CoordinateGrid(double L_, int N_) : L(L_), N(N_) {
    if (N < 2) throw InvalidArgument("coordinate grid needs N >= 2");
    if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("coordinate grid needs L > 0");
    step = 2.0 * L / (N - 1);
    q.resize(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) q[static_cast<std::size_t>(i)] = -L + step * i;
    q.back() = L;
}

void Wavefunction::normalize() {
    double total = 0.0;
    for (const auto& z : samples) total += std::norm(z);
    norm = std::sqrt(total * grid.step);
    if (!(norm > 0.0)) throw InvalidArgument("cannot normalize a vanishing wavefunction");
    for (auto& z : samples) z /= norm;
}

Wavefunction Wavefunction::gaussian(const CoordinateGrid& grid, double q0, double p0, double sigma, double hbar) {
    if (!(sigma > 0.0)) throw InvalidArgument("Gaussian width must be positive");
    if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
    Wavefunction psi;
    psi.grid = grid;
    psi.samples.resize(grid.q.size());
    const double amp = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    for (std::size_t i = 0; i < grid.q.size(); ++i) {
        const double x = grid.q[i];
        const double env = amp * std::exp(-(x - q0) * (x - q0) / (4.0 * sigma * sigma));
        psi.samples[i] = std::polar(env, p0 * x / hbar);
    }
    psi.normalize();
    return psi;
}

Wavefunction Wavefunction::from_csv(std::istream& is, const CoordinateGrid& grid) {
    struct Row {
        double q, re, im;
    };
    std::vector<Row> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        Row r{};
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r.q, &r.re, &r.im) != 3) {
            if (rows.empty()) continue; // header
            throw InvalidArgument("wavefunction CSV: malformed row \"" + line + "\"");
        }
        rows.push_back(r);
    }
    if (rows.size() < 2) throw InvalidArgument("wavefunction CSV needs at least two rows");
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.q < b.q; });
    Wavefunction psi;
    psi.grid = grid;
    psi.samples.assign(grid.q.size(), {0.0, 0.0});
    for (std::size_t i = 0; i < grid.q.size(); ++i) {
        const double x = grid.q[i];
        if (x < rows.front().q || x > rows.back().q) continue;
        auto hi = std::lower_bound(rows.begin(), rows.end(), x, [](const Row& r, double v) { return r.q < v; });
        if (hi == rows.begin()) {
            psi.samples[i] = {hi->re, hi->im};
            continue;
        }
        auto lo = hi - 1;
        const double t = (hi->q == lo->q) ? 0.0 : (x - lo->q) / (hi->q - lo->q);
        psi.samples[i] = {lo->re + t * (hi->re - lo->re), lo->im + t * (hi->im - lo->im)};
    }
    psi.normalize();
    return psi;
}

OperatorMatrix assemble(const PotentialSeries& V, int n_max, double L, int N, const EngineOptions& options) {
    if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
    OperatorMatrix K;
    K.grid = CoordinateGrid(L, N);
    K.n_max = n_max;
    K.mass = V.mass();
    K.hbar = V.hbar();
    K.entries.assign(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), {0.0, 0.0});
    KernelEngine engine(V, KernelDomain{-2.0 * L, 2.0 * L, 2.0 * L}, options);
    const double scale = V.mass() / V.hbar();
    for (int i = 0; i < N; ++i) {
        for (int j = i + 1; j < N; ++j) {
            const double qi = K.grid.q[static_cast<std::size_t>(i)];
            const double qj = K.grid.q[static_cast<std::size_t>(j)];
            const double T = engine.full_kernel(n_max, qi + qj, qi - qj).value;
            // (μ/iħ) sgn(qᵢ - qⱼ) T with qᵢ < qⱼ
            const std::complex<double> k(0.0, scale * T);
            K.at(i, j) = k;
            K.at(j, i) = -k;
        }
    }
    return K;
}

ExpectationValue expectation_detail(const OperatorMatrix& K, const Wavefunction& psi) {
    if (psi.samples.size() != static_cast<std::size_t>(K.size())) {
        throw InvalidArgument("wavefunction and operator live on different grids");
    }
    const int N = K.size();
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < N; ++i) {
        std::complex<double> row(0.0, 0.0);
        for (int j = 0; j < N; ++j) row += K.at(i, j) * psi.samples[static_cast<std::size_t>(j)];
        acc += std::conj(psi.samples[static_cast<std::size_t>(i)]) * row;
    }
    acc *= K.grid.step * K.grid.step;
    return {acc.real(), std::abs(acc.imag())};
}

double expectation(const OperatorMatrix& K, const Wavefunction& psi) {
    const auto e = expectation_detail(K, psi);
    if (e.imag_residue > 1e-10 * std::abs(e.value) + 1e-14) {
        std::ostringstream os;
        os << "expectation value has imaginary part " << e.imag_residue << " against real part " << e.value;
        throw NonRealExpectation(os.str());
    }
    return e.value;
}

double hermiticity_defect(const OperatorMatrix& K) {
    double worst = 0.0;
    for (int i = 0; i < K.size(); ++i) {
        for (int j = 0; j < K.size(); ++j) worst = std::max(worst, std::abs(K.at(i, j) - std::conj(K.at(j, i))));
    }
    return worst;
}

void write_matrix_csv(std::ostream& os, const OperatorMatrix& K) {
    os << "i,j,re,im\n";
    char buf[128];
    for (int i = 0; i < K.size(); ++i) {
        for (int j = 0; j < K.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", i, j, K.at(i, j).real(), K.at(i, j).imag());
            os << buf;
        }
    }
}

} // namespace toa
