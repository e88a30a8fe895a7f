#include "toa/interpolation.hpp"

#include <cmath>
#include <numbers>

#include "toa/errors.hpp"

namespace toa {

ChebAxis::ChebAxis(double lo, double hi, int n) : lo_(lo), hi_(hi) {
    if (n < 2) throw InvalidArgument("a Chebyshev axis needs at least 2 nodes");
    if (!(hi > lo)) throw InvalidArgument("a Chebyshev axis needs lo < hi");
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    nodes_.resize(static_cast<std::size_t>(n));
    weights_.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double x;
        if (2 * k == n - 1) {
            x = mid;
        } else {
            x = mid - half * std::cos(std::numbers::pi * k / (n - 1));
        }
        nodes_[static_cast<std::size_t>(k)] = x;
        weights_[static_cast<std::size_t>(k)] = (k % 2 == 0) ? 1.0 : -1.0;
    }
    nodes_.front() = lo;
    nodes_.back() = hi;
    weights_.front() *= 0.5;
    weights_.back() *= 0.5;
}

void ChebAxis::basis(double x, std::span<double> out) const {
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (x == nodes_[i]) {
            for (std::size_t k = 0; k < n; ++k) out[k] = 0.0;
            out[i] = 1.0;
            return;
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = weights_[i] / (x - nodes_[i]);
        total += out[i];
    }
    for (std::size_t i = 0; i < n; ++i) out[i] /= total;
}

std::vector<double> ChebAxis::basis(double x) const {
    std::vector<double> b(nodes_.size());
    basis(x, b);
    return b;
}

double tensor_interpolate(const ChebAxis& x_axis, const ChebAxis& y_axis,
                          std::span<const double> values, double x, double y) {
    const auto bx = x_axis.basis(x);
    const auto by = y_axis.basis(y);
    const std::size_t ny = by.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < bx.size(); ++i) {
        if (bx[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < ny; ++j) row += values[i * ny + j] * by[j];
        acc += bx[i] * row;
    }
    return acc;
}

} // namespace toa
