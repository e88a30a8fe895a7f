#pragma once

#include <span>
#include <vector>

namespace toa {

/// Chebyshev–Lobatto nodes on [lo, hi] in ascending order, with the barycentric
/// weights of the global interpolant through all of them. Both endpoints are
/// nodes; on a symmetric interval with an odd node count the midpoint is
/// exactly zero.
class ChebAxis {
public:
    ChebAxis() = default;
    ChebAxis(double lo, double hi, int n);

    int size() const { return static_cast<int>(nodes_.size()); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& nodes() const { return nodes_; }

    /// Cardinal basis values ℓ_i(x); a unit vector when x is a node.
    void basis(double x, std::span<double> out) const;
    std::vector<double> basis(double x) const;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Tensor-product interpolant of samples f(x_i, y_j) stored row-major (i major).
double tensor_interpolate(const ChebAxis& x_axis, const ChebAxis& y_axis,
                          std::span<const double> values, double x, double y);

} // namespace toa
