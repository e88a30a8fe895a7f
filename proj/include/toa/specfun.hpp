#pragma once

#include <vector>

namespace toa::specfun {

/// Parameter lists of a generalized hypergeometric function pFq(a; b; z).
struct HypParams {
    std::vector<double> numerator;   ///< a_1 .. a_p
    std::vector<double> denominator; ///< b_1 .. b_q, none zero or a negative integer
};

/// Stopping rule shared by every series in this module: stop once
/// |term| < abs_tol + rel_tol*|sum| and the ratio-test tail bound agrees.
struct SeriesControl {
    double rel_tol = 1e-15;
    double abs_tol = 0.0;
    int max_terms = 10000;
};

struct SeriesResult {
    double value = 0.0;
    double error_estimate = 0.0;
    /// sum |term_k| / |sum|; digits lost to cancellation are ~log10(condition).
    double condition = 1.0;
    int terms = 0;
};

/// Rising factorial (x)_k = x (x+1) ... (x+k-1); (x)_0 = 1.
double pochhammer(double x, int k);

/// 0F1(; b; z). Negative arguments below -9 with b >= 1 go through the Bessel
/// identity 0F1(;b;-x) = Γ(b) x^{(1-b)/2} J_{b-1}(2√x).
double hyp0f1(double b, double z, const SeriesControl& ctl = {});
SeriesResult hyp0f1_detail(double b, double z, const SeriesControl& ctl = {});

/// pFq(a; b; z) by direct summation. Requires p <= q, or p = q+1 with |z| < 1;
/// 2F1 with z <= -1/2 is continued with the Pfaff transformation.
double hyp_pfq(const HypParams& params, double z, const SeriesControl& ctl = {});
SeriesResult hyp_pfq_detail(const HypParams& params, double z, const SeriesControl& ctl = {});

double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctl = {});

} // namespace toa::specfun
