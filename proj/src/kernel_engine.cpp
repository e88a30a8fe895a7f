#include "toa/kernel_engine.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

#include "toa/errors.hpp"
#include "toa/quadrature.hpp"
#include "toa/specfun.hpp"

namespace toa {

namespace {

double kappa(int r) {
    double f = 1.0;
    for (int i = 2; i <= 2 * r + 1; ++i) f *= i;
    return 1.0 / (f * std::ldexp(1.0, 2 * r));
}

bool odd_derivative_vanishes(const PotentialSeries& V, int order) {
    for (int l = order; l <= V.degree(); ++l) {
        if (V.coefficient(l) != 0.0) return false;
    }
    return true;
}

double domain_slack(double lo, double hi) { return 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)}); }

KernelDomain normalized(KernelDomain d) {
    if (d.u_min < 0.0 && d.u_max > 0.0) {
        const double U = std::max(-d.u_min, d.u_max);
        d.u_min = -U;
        d.u_max = U;
    }
    if (!(d.u_max > d.u_min)) throw InvalidArgument("kernel domain needs u_min < u_max");
    if (!(d.v_max > 0.0)) throw InvalidArgument("kernel domain needs v_max > 0");
    return d;
}

int node_count(const KernelDomain& d, int nodes) {
    if (nodes < 3) throw InvalidArgument("kernel grids need at least 3 nodes per axis");
    if (d.u_min < 0.0 && d.u_max > 0.0 && nodes % 2 == 0) return nodes + 1;
    return nodes;
}

quad::Options quad_options(double tol, int max_intervals) {
    quad::Options q;
    q.rel_tol = tol;
    q.max_intervals = max_intervals;
    return q;
}

// Tₙ(u,v) for n >= 1 from the lower-order grids.
double correction_value(const PotentialSeries& V, int n, double u, double v,
                        const std::vector<std::shared_ptr<const KernelGrid>>& lower, const quad::Options& q) {
    if (u == 0.0 || v == 0.0) return 0.0;
    std::vector<int> rs;
    for (int r = 1; r <= n; ++r) {
        if (!odd_derivative_vanishes(V, 2 * r + 1)) rs.push_back(r);
    }
    if (rs.empty()) return 0.0;

    const double c = V.coupling();
    const double Vu = V(0.5 * u);
    const ChebAxis& ua = lower[0]->u_axis;
    const ChebAxis& va = lower[0]->v_axis;
    const auto nu = static_cast<std::size_t>(ua.size());
    const auto nv = static_cast<std::size_t>(va.size());
    std::vector<double> bu(nu), bw(nv), rows(rs.size() * nv), weight(rs.size()), peak(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) {
        for (double x : lower[static_cast<std::size_t>(n - rs[k])]->values) peak[k] = std::max(peak[k], std::abs(x));
    }

    // Bound on ∫₀ᵛ |inner integrand| built from grid max-norms: interpolated
    // values carry ~eps*peak of noise, so no quadrature can resolve below it.
    auto inner_bound = [&](double s) {
        const double dV = Vu - V(0.5 * s);
        const double growth = dV > 0.0 ? specfun::hyp0f1(1.0, c * v * v * dV) : 1.0;
        double b = 0.0;
        for (std::size_t k = 0; k < rs.size(); ++k) {
            const int r = rs[k];
            b += kappa(r) * std::abs(V.derivative(2 * r + 1, 0.5 * s)) * peak[k] *
                 std::pow(std::abs(v), 2 * r + 2) / (2 * r + 2);
        }
        return b * growth;
    };
    constexpr double kNoise = 64.0 * std::numeric_limits<double>::epsilon();

    auto outer = [&](double s) {
        const double dV = Vu - V(0.5 * s);
        ua.basis(s, bu);
        bool any = false;
        for (std::size_t k = 0; k < rs.size(); ++k) {
            const int r = rs[k];
            weight[k] = kappa(r) * V.derivative(2 * r + 1, 0.5 * s);
            double* row = &rows[k * nv];
            for (std::size_t j = 0; j < nv; ++j) row[j] = 0.0;
            if (weight[k] == 0.0) continue;
            any = true;
            const auto& F = lower[static_cast<std::size_t>(n - r)]->values;
            for (std::size_t i = 0; i < nu; ++i) {
                if (bu[i] == 0.0) continue;
                const double b = bu[i];
                const double* src = &F[i * nv];
                for (std::size_t j = 0; j < nv; ++j) row[j] += b * src[j];
            }
        }
        if (!any) return 0.0;
        auto inner = [&](double w) {
            va.basis(w, bw);
            double acc = 0.0;
            const double w2 = w * w;
            for (std::size_t k = 0; k < rs.size(); ++k) {
                if (weight[k] == 0.0) continue;
                const double* row = &rows[k * nv];
                double T = 0.0;
                for (std::size_t j = 0; j < nv; ++j) T += bw[j] * row[j];
                acc += weight[k] * std::pow(w2, rs[k]) * w * T;
            }
            if (acc == 0.0) return 0.0;
            return acc * specfun::hyp0f1(1.0, c * (v * v - w2) * dV);
        };
        quad::Options qi = q;
        qi.abs_tol = kNoise * inner_bound(s);
        return quad::integrate(inner, 0.0, v, qi).value;
    };
    double outer_bound = 0.0;
    for (int k = 1; k <= 8; ++k) outer_bound = std::max(outer_bound, inner_bound(u * k / 8.0));
    quad::Options qo = q;
    qo.abs_tol = kNoise * std::abs(u) * outer_bound;
    return c * quad::integrate(outer, 0.0, u, qo).value;
}

} // namespace

bool KernelGrid::contains(double u, double v) const {
    const double su = domain_slack(u_axis.lo(), u_axis.hi());
    const double sv = domain_slack(0.0, v_axis.hi());
    return u >= u_axis.lo() - su && u <= u_axis.hi() + su && std::abs(v) <= v_axis.hi() + sv;
}

double KernelGrid::eval(double u, double v) const {
    if (!contains(u, v)) {
        std::ostringstream os;
        os << "point (" << u << ", " << v << ") outside the grid of order " << order;
        throw DomainError(os.str());
    }
    const double uu = std::clamp(u, u_axis.lo(), u_axis.hi());
    const double vv = std::min(std::abs(v), v_axis.hi());
    return tensor_interpolate(u_axis, v_axis, values, uu, vv);
}

PointEstimate t0_eval(const PotentialSeries& V, double u, double v, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("t0_eval: tolerance must be positive");
    if (u == 0.0) return {0.0, 0.0};
    if (v == 0.0 || V.effective_degree() == 0) return {0.25 * u, 0.0};
    const double x = V.coupling() * v * v;
    const double Vu = V(0.5 * u);
    auto f = [&](double s) { return specfun::hyp0f1(1.0, x * (Vu - V(0.5 * s))); };
    const auto r = quad::integrate(f, 0.0, u, quad_options(tol, 2000));
    return {0.25 * r.value, 0.25 * r.error};
}

double t0_picard(const PotentialSeries& V, double u, double v, int iterations, double tol) {
    if (iterations < 0) throw InvalidArgument("t0_picard: iterations must be non-negative");
    if (!(tol > 0.0)) throw InvalidArgument("t0_picard: tolerance must be positive");
    const double Vu = V(0.5 * u);
    const double x = V.coupling() * v * v;
    double total = 0.25 * u;
    double scale = 1.0;
    for (int k = 1; k <= iterations; ++k) {
        scale *= x / (static_cast<double>(k) * k);
        if (scale == 0.0) break;
        auto f = [&](double s) { return std::pow(Vu - V(0.5 * s), k); };
        const double moment = quad::integrate(f, 0.0, u, quad_options(tol, 2000)).value;
        total += 0.25 * scale * moment;
    }
    return total;
}

KernelEngine::KernelEngine(PotentialSeries V, KernelDomain domain, EngineOptions options)
    : V_(std::move(V)), options_(options), domain_(normalized(domain)) {
    if (!(options_.tol > 0.0)) throw InvalidArgument("engine tolerance must be positive");
    node_count(domain_, options_.nodes);
}

KernelDomain KernelEngine::domain() const {
    std::shared_lock lock(mutex_);
    return domain_;
}

bool KernelEngine::corrections_vanish() const { return odd_derivative_vanishes(V_, 3); }

void KernelEngine::cover(double u, double v) {
    {
        std::shared_lock lock(mutex_);
        const double su = domain_slack(domain_.u_min, domain_.u_max);
        if (u >= domain_.u_min - su && u <= domain_.u_max + su &&
            std::abs(v) <= domain_.v_max + domain_slack(0.0, domain_.v_max)) {
            return;
        }
    }
    std::unique_lock lock(mutex_);
    KernelDomain d = domain_;
    d.u_min = std::min(d.u_min, u);
    d.u_max = std::max(d.u_max, u);
    d.v_max = std::max(d.v_max, std::abs(v));
    domain_ = normalized(d);
    grids_.clear();
}

std::shared_ptr<const KernelGrid> KernelEngine::grid(int n) {
    if (n < 0) throw InvalidArgument("grid order must be non-negative");
    {
        std::shared_lock lock(mutex_);
        if (static_cast<int>(grids_.size()) > n) return grids_[static_cast<std::size_t>(n)];
    }
    std::unique_lock lock(mutex_);
    while (static_cast<int>(grids_.size()) <= n) {
        const int k = static_cast<int>(grids_.size());
        try {
            grids_.push_back(build(k, grids_));
        } catch (const QuadratureFailure& e) {
            if (k == n) throw;
            throw MissingDependency("order " + std::to_string(n) + " needs order " + std::to_string(k) +
                                    ", which failed: " + e.what());
        }
    }
    return grids_[static_cast<std::size_t>(n)];
}

std::shared_ptr<const KernelGrid> KernelEngine::build(
    int n, const std::vector<std::shared_ptr<const KernelGrid>>& lower) const {
    const int nodes = node_count(domain_, options_.nodes);
    auto g = std::make_shared<KernelGrid>();
    g->order = n;
    g->u_axis = ChebAxis(domain_.u_min, domain_.u_max, nodes);
    g->v_axis = ChebAxis(0.0, domain_.v_max, nodes);
    g->potential_id = V_.fingerprint();
    g->values.assign(static_cast<std::size_t>(nodes) * static_cast<std::size_t>(nodes), 0.0);
    const bool zero = n >= 1 && corrections_vanish();
    const auto q = quad_options(options_.tol, options_.max_intervals);
    for (int i = 0; i < nodes; ++i) {
        const double u = g->u_axis.node(i);
        for (int j = 0; j < nodes; ++j) {
            const double v = g->v_axis.node(j);
            double value = 0.0;
            if (n == 0) {
                value = t0_eval(V_, u, v, options_.tol).value;
            } else if (!zero) {
                value = correction_value(V_, n, u, v, lower, q);
            }
            g->values[static_cast<std::size_t>(i) * static_cast<std::size_t>(nodes) + static_cast<std::size_t>(j)] = value;
        }
    }
    return g;
}

double KernelEngine::term(int n, double u, double v) {
    if (n < 0) throw InvalidArgument("kernel order must be non-negative");
    if (n == 0) return t0_eval(V_, u, v, options_.tol).value;
    if (u == 0.0 || v == 0.0 || corrections_vanish()) return 0.0;
    cover(u, v);
    return grid(n)->eval(u, std::abs(v));
}

FullKernel KernelEngine::full_kernel(int n_max, double u, double v) {
    if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
    FullKernel out;
    out.terms.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double t = term(n, u, v);
        out.terms.push_back(t);
        out.value += t;
    }
    out.last_term = std::abs(out.terms.back());
    return out;
}

KernelGrid build_correction_grid(const PotentialSeries& V, int n, double U, double Vmax, int nodes, double tol) {
    if (n < 1) throw InvalidArgument("build_correction_grid: order must be >= 1");
    if (U == 0.0) throw InvalidArgument("build_correction_grid: U must be nonzero");
    KernelDomain d{std::min(0.0, U), std::max(0.0, U), Vmax};
    EngineOptions opt;
    opt.nodes = nodes;
    opt.tol = tol;
    KernelEngine engine(V, d, opt);
    return *engine.grid(n);
}

FullKernel full_kernel(const PotentialSeries& V, int n_max, double u, double v, const EngineOptions& options) {
    if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
    if (u == 0.0 || v == 0.0 || n_max == 0 || odd_derivative_vanishes(V, 3)) {
        FullKernel out;
        out.terms.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
        out.terms[0] = t0_eval(V, u, v, options.tol).value;
        out.value = out.terms[0];
        out.last_term = std::abs(out.terms.back());
        return out;
    }
    KernelEngine engine(V, KernelDomain{std::min(0.0, u), std::max(0.0, u), std::abs(v)}, options);
    return engine.full_kernel(n_max, u, v);
}

double mixed_derivative(const KernelFunction& f, double u, double v, double h, bool richardson) {
    if (!(h > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    auto cross = [&](double k) {
        return (f(u + k, v + k) - f(u + k, v - k) - f(u - k, v + k) + f(u - k, v - k)) / (4.0 * k * k);
    };
    const double d1 = cross(h);
    if (!richardson) return d1;
    const double d2 = cross(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

double tke_residual(const PotentialSeries& V, const KernelFunction& kernel, double u, double v, double h) {
    const double d = mixed_derivative(kernel, u, v, h);
    const double dV = V(0.5 * (u + v)) - V(0.5 * (u - v));
    return -d / V.coupling() + dV * kernel(u, v);
}

double correction_pde_residual(const PotentialSeries& V, int n, const OrderFunction& orders, double u, double v,
                               double h) {
    if (n < 0) throw InvalidArgument("correction order must be non-negative");
    const double d = mixed_derivative([&](double a, double b) { return orders(n, a, b); }, u, v, h);
    double source = 0.0;
    for (int r = 0; r <= n; ++r) {
        const double dr = V.derivative(2 * r + 1, 0.5 * u);
        if (dr == 0.0) continue;
        source += kappa(r) * dr * std::pow(v, 2 * r + 1) * orders(n - r, u, v);
    }
    return d - V.coupling() * source;
}

double correction_pde_residual(KernelEngine& engine, int n, double u, double v, double h) {
    engine.cover(u + h, v + h);
    engine.cover(u - h, v - h);
    return correction_pde_residual(
        engine.potential(), n, [&engine](int k, double a, double b) { return engine.term(k, a, b); }, u, v, h);
}

void write_grid_csv(std::ostream& os, const KernelGrid& g) {
    char buf[160];
    os << "order,U_min,U,V,nodes\n";
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d\n", g.order, g.u_axis.lo(), g.u_axis.hi(),
                  g.v_axis.hi(), g.u_size());
    os << buf;
    os << "i,j,u,v,value\n";
    for (int i = 0; i < g.u_size(); ++i) {
        for (int j = 0; j < g.v_size(); ++j) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", i, j, g.u_axis.node(i), g.v_axis.node(j),
                          g.at(i, j));
            os << buf;
        }
    }
}

KernelGrid read_grid_csv(std::istream& is) {
    std::string line;
    auto fail = [](const std::string& why) { return InvalidArgument("grid CSV: " + why); };
    if (!std::getline(is, line) || line.rfind("order,", 0) != 0) throw fail("missing header");
    if (!std::getline(is, line)) throw fail("missing grid description");
    KernelGrid g;
    double lo = 0, hi = 0, vmax = 0;
    int nodes = 0;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%d", &g.order, &lo, &hi, &vmax, &nodes) != 5) {
        throw fail("malformed grid description");
    }
    g.u_axis = ChebAxis(lo, hi, nodes);
    g.v_axis = ChebAxis(0.0, vmax, nodes);
    g.values.assign(static_cast<std::size_t>(nodes) * static_cast<std::size_t>(nodes), 0.0);
    if (!std::getline(is, line)) throw fail("missing value header");
    std::size_t seen = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int i = 0, j = 0;
        double u = 0, v = 0, value = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf", &i, &j, &u, &v, &value) != 5) throw fail("malformed row");
        if (i < 0 || j < 0 || i >= nodes || j >= nodes) throw fail("row index out of range");
        g.values[static_cast<std::size_t>(i) * static_cast<std::size_t>(nodes) + static_cast<std::size_t>(j)] = value;
        ++seen;
    }
    if (seen != g.values.size()) throw fail("expected " + std::to_string(g.values.size()) + " rows");
    return g;
}

} // namespace toa
