#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "toa/interpolation.hpp"
#include "toa/potential.hpp"

namespace toa {

struct EngineOptions {
    /// Chebyshev–Lobatto nodes per axis (made odd on domains straddling u = 0).
    int nodes = 33;
    /// Relative tolerance of every quadrature used to fill grids and evaluate T₀.
    double tol = 1e-13;
    int max_intervals = 2000;
};

/// Rectangle [u_min, u_max] × [0, v_max] covered by the grids; negative v is
/// reached by the even reflection T(u,-v) = T(u,v).
struct KernelDomain {
    double u_min = 0.0;
    double u_max = 1.0;
    double v_max = 1.0;
};

/// Samples of Tₙ on a Chebyshev–Lobatto tensor grid, read back through the
/// global barycentric interpolant.
struct KernelGrid {
    int order = 0;
    ChebAxis u_axis;
    ChebAxis v_axis;
    std::vector<double> values; ///< (i, j) at i * v_size + j
    std::uint64_t potential_id = 0;

    int u_size() const { return u_axis.size(); }
    int v_size() const { return v_axis.size(); }
    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(v_size()) + static_cast<std::size_t>(j)];
    }
    bool contains(double u, double v) const;
    /// Interpolated Tₙ(u, v); throws DomainError outside the rectangle.
    double eval(double u, double v) const;
};

struct PointEstimate {
    double value = 0.0;
    double error = 0.0;
};

/// T₀(u,v) = (1/4) ∫₀ᵘ ₀F₁(;1; (μ/2ħ²) v² [V(u/2) - V(s/2)]) ds (signed for u < 0).
PointEstimate t0_eval(const PotentialSeries& V, double u, double v, double tol = 1e-13);

/// Picard iterate T_{0,k}(u,v) = (1/4) Σ_{i<=k} c^i v^{2i}/(i!)² ∫₀ᵘ [V(u/2) - V(s/2)]^i ds.
double t0_picard(const PotentialSeries& V, double u, double v, int iterations, double tol = 1e-13);

struct FullKernel {
    double value = 0.0;
    /// |T_{n_max}(u,v)|, the size of the last included order.
    double last_term = 0.0;
    std::vector<double> terms; ///< T₀ .. T_{n_max}
};

/**
 * @brief Memoized evaluator of T₀ and the corrections Tₙ for one potential.
 *
 * Order n >= 1 is filled node by node from the nested integral
 *   Tₙ = c Σ_{r=1}^{n} κ_r ∫₀ᵘ ds V^{(2r+1)}(s/2) ∫₀ᵛ dw w^{2r+1} T_{n-r}(s,w)
 *        ₀F₁(;1; c (v² - w²)[V(u/2) - V(s/2)]),   κ_r = 1/((2r+1)! 4^r),
 * reading T_{n-r} from the already built lower-order grids. Grids are immutable
 * once published; concurrent readers share them, one writer fills at a time.
 */
class KernelEngine {
public:
    explicit KernelEngine(PotentialSeries V, KernelDomain domain = {}, EngineOptions options = {});

    const PotentialSeries& potential() const { return V_; }
    KernelDomain domain() const;
    const EngineOptions& options() const { return options_; }

    /// Grows the domain to contain (u, v), discarding grids built so far.
    void cover(double u, double v);

    /// Grid of order n, building orders 0..n on demand.
    std::shared_ptr<const KernelGrid> grid(int n);

    /// Tₙ(u,v): t0_eval for n = 0, the order-n grid interpolant otherwise.
    double term(int n, double u, double v);

    FullKernel full_kernel(int n_max, double u, double v);

    /// True when every V^{(2r+1)} with r >= 1 vanishes identically.
    bool corrections_vanish() const;

private:
    std::shared_ptr<const KernelGrid> build(int n, const std::vector<std::shared_ptr<const KernelGrid>>& lower) const;

    PotentialSeries V_;
    EngineOptions options_;
    KernelDomain domain_;
    std::vector<std::shared_ptr<const KernelGrid>> grids_;
    mutable std::shared_mutex mutex_;
};

/// Order-n grid on [0,U] × [0,Vmax] (or [U,0] for U < 0), lower orders built internally.
KernelGrid build_correction_grid(const PotentialSeries& V, int n, double U, double Vmax, int nodes = 33,
                                 double tol = 1e-13);

/// Σ_{n<=n_max} Tₙ(u,v) on a private engine sized to the point.
FullKernel full_kernel(const PotentialSeries& V, int n_max, double u, double v, const EngineOptions& options = {});

using KernelFunction = std::function<double(double u, double v)>;
/// Tₖ(u, v) for order k.
using OrderFunction = std::function<double(int k, double u, double v)>;

/// Central cross-stencil estimate of ∂²f/∂u∂v, with one Richardson halving.
double mixed_derivative(const KernelFunction& f, double u, double v, double h, bool richardson = true);

/// -(2ħ²/μ) ∂²T/∂u∂v + [V((u+v)/2) - V((u-v)/2)] T(u,v).
double tke_residual(const PotentialSeries& V, const KernelFunction& kernel, double u, double v, double h = 1e-3);

/// ∂²Tₙ/∂v∂u - c Σ_{r=0}^{n} κ_r V^{(2r+1)}(u/2) v^{2r+1} T_{n-r}(u,v).
double correction_pde_residual(const PotentialSeries& V, int n, const OrderFunction& orders, double u, double v,
                               double h = 1e-3);
double correction_pde_residual(KernelEngine& engine, int n, double u, double v, double h = 1e-3);

/// Header line "order,U_min,U,V,nodes", one data line, then "i,j,u,v,value" rows.
void write_grid_csv(std::ostream& os, const KernelGrid& g);
KernelGrid read_grid_csv(std::istream& is);

} // namespace toa
