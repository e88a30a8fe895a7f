#include "toa/series_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "toa/errors.hpp"

namespace toa {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void check_sizes(int a, int b, const char* what) {
    if (a < 1 || b < 1) throw InvalidArgument(std::string(what) + ": truncation orders must be >= 1");
}

// Shared recurrence: α_{m,n} = c/(mn) Σ_s a_s/2^{s-1} Σ_k C(s,2k+1) α_{m-s+2k, n-2k-2}.
template <class Scalar, class Coef>
std::vector<Scalar> alpha_recurrence(int M, int N, int S, const Scalar& c, Coef coef) {
    const auto W = static_cast<std::size_t>(N + 1);
    std::vector<Scalar> a(static_cast<std::size_t>(M + 1) * W, Scalar(0));
    auto at = [&](int m, int n) -> Scalar& {
        return a[static_cast<std::size_t>(m) * W + static_cast<std::size_t>(n)];
    };
    if (M >= 1) at(1, 0) = Scalar(1) / 4;
    for (int n = 1; n <= N; ++n) {
        for (int m = 1; m <= M; ++m) {
            Scalar acc(0);
            for (int s = 1; s <= S; ++s) {
                const Scalar& as = coef(s);
                if (as == 0) continue;
                Scalar inner(0);
                for (int k = 0; 2 * k + 1 <= s; ++k) {
                    const int mm = m - s + 2 * k;
                    const int nn = n - 2 * k - 2;
                    if (mm < 0 || nn < 0) continue;
                    const Scalar& prev = at(mm, nn);
                    if (prev == 0) continue;
                    inner += Scalar(binomial(s, 2 * k + 1)) * prev;
                }
                if (inner == 0) continue;
                acc += as * inner / Scalar(std::ldexp(1.0, s - 1));
            }
            if (acc != 0) at(m, n) = c * acc / Scalar(m * n);
        }
    }
    return a;
}

} // namespace

const Rational& ExactAlphaTable::at(int m, int n) const {
    static const Rational zero(0);
    if (m < 0 || n < 0 || m > M || n > N) return zero;
    return values[static_cast<std::size_t>(m) * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(n)];
}

AlphaTable build_alpha(const PotentialSeries& V, int M, int N) {
    check_sizes(M, N, "build_alpha");
    std::vector<double> coeffs(V.coefficients().begin(), V.coefficients().end());
    AlphaTable t;
    t.M = M;
    t.N = N;
    t.potential_id = V.fingerprint();
    t.values = alpha_recurrence<double>(M, N, V.degree(), V.coupling(),
                                        [&coeffs](int s) -> const double& { return coeffs[static_cast<std::size_t>(s) - 1]; });
    return t;
}

ExactAlphaTable build_alpha_exact(const PotentialSeries& V, int M, int N) {
    check_sizes(M, N, "build_alpha_exact");
    std::vector<Rational> coeffs;
    for (double a : V.coefficients()) coeffs.emplace_back(a);
    const Rational hbar(V.hbar());
    const Rational c = Rational(V.mass()) / (2 * hbar * hbar);
    ExactAlphaTable t;
    t.M = M;
    t.N = N;
    t.potential_id = V.fingerprint();
    t.values = alpha_recurrence<Rational>(M, N, V.degree(), c,
                                          [&coeffs](int s) -> const Rational& { return coeffs[static_cast<std::size_t>(s) - 1]; });
    return t;
}

AlphaOrderTable build_alpha_orders(const PotentialSeries& V, int M, int J) {
    check_sizes(M, J, "build_alpha_orders");
    AlphaOrderTable t;
    t.M = M;
    t.J = J;
    t.coupling = V.coupling();
    t.potential_id = V.fingerprint();
    t.values.assign(static_cast<std::size_t>(J + 1) * static_cast<std::size_t>(M + 1) * static_cast<std::size_t>(J + 1), 0.0);
    const int S = V.degree();
    if (M >= 1) t.values[t.index(0, 1, 0)] = 0.25;
    for (int j = 1; j <= J; ++j) {
        for (int s = 0; s < j; ++s) {
            for (int m = 1; m <= M; ++m) {
                double acc = 0.0;
                for (int r = 0; r <= s; ++r) {
                    for (int l = 2 * r + 1; l <= S; ++l) {
                        const double al = V.coefficient(l);
                        if (al == 0.0) continue;
                        const double prev = t.at(s - r, m - l + 2 * r, j - r - 1);
                        if (prev == 0.0) continue;
                        acc += al / std::ldexp(1.0, l - 1) * binomial(l, 2 * r + 1) * prev;
                    }
                }
                t.values[t.index(s, m, j)] = acc / (2.0 * m * j);
            }
        }
    }
    return t;
}

namespace {

SeriesValue finish(double value, double proxy) {
    return {value, proxy, proxy > 1e-10 * std::abs(value)};
}

} // namespace

SeriesValue series_kernel_eval(const AlphaTable& t, double u, double v) {
    double total = 0.0;
    double proxy = 0.0;
    const int top = t.N - (t.N % 2);
    double um = 1.0;
    for (int m = 0; m <= t.M; ++m) {
        double row = 0.0;
        double vn = 1.0;
        for (int n = 0; n <= t.N; ++n) {
            const double a = t.at(m, n);
            if (a != 0.0) {
                const double term = a * um * vn;
                row += term;
                if (m == t.M || n >= top) proxy = std::max(proxy, std::abs(term));
            }
            vn *= v;
        }
        total += row;
        um *= u;
    }
    return finish(total, proxy);
}

SeriesValue series_kernel_eval(const ExactAlphaTable& t, double u, double v) {
    const Rational ru(u), rv(v);
    Rational total(0);
    double proxy = 0.0;
    const int top = t.N - (t.N % 2);
    Rational um(1);
    for (int m = 0; m <= t.M; ++m) {
        Rational vn(1);
        for (int n = 0; n <= t.N; ++n) {
            const Rational& a = t.at(m, n);
            if (a != 0) {
                Rational term = a * um * vn;
                total += term;
                if (m == t.M || n >= top) proxy = std::max(proxy, std::abs(term.convert_to<double>()));
            }
            vn *= rv;
        }
        um *= ru;
    }
    return finish(total.convert_to<double>(), proxy);
}

SeriesValue order_series_eval(const AlphaOrderTable& t, int n, double u, double v) {
    if (n < 0 || n > t.J) throw InvalidArgument("order_series_eval: order outside the table");
    double total = 0.0;
    double proxy = 0.0;
    for (int j = n; j <= t.J; ++j) {
        const double scale = std::pow(t.coupling, j - n) * std::pow(v, 2 * j);
        double um = 1.0;
        for (int m = 0; m <= t.M; ++m) {
            const double a = t.at(n, m, j);
            if (a != 0.0) {
                const double term = a * um * scale;
                total += term;
                if (m == t.M || j == t.J) proxy = std::max(proxy, std::abs(term));
            }
            um *= u;
        }
    }
    return finish(total, proxy);
}

void write_alpha_csv(std::ostream& os, const AlphaTable& t) {
    os << "m,n,value\n";
    char buf[64];
    for (int m = 0; m <= t.M; ++m) {
        for (int n = 0; n <= t.N; ++n) {
            const double a = t.at(m, n);
            if (a == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%.17g", a);
            os << m << ',' << n << ',' << buf << '\n';
        }
    }
}

void write_alpha_orders_csv(std::ostream& os, const AlphaOrderTable& t) {
    os << "s,m,j,value\n";
    char buf[64];
    for (int s = 0; s <= t.J; ++s) {
        for (int m = 0; m <= t.M; ++m) {
            for (int j = 0; j <= t.J; ++j) {
                const double a = t.at(s, m, j);
                if (a == 0.0) continue;
                std::snprintf(buf, sizeof buf, "%.17g", a);
                os << s << ',' << m << ',' << j << ',' << buf << '\n';
            }
        }
    }
}

} // namespace toa
