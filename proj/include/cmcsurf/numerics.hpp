#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace cmcsurf {

enum class QuadratureMethod { DoubleExponential, GaussAfterSineSubstitution };

struct QuadratureSpec {
    QuadratureMethod method = QuadratureMethod::DoubleExponential;
    double abs_tol = 1e-14;
    double rel_tol = 1e-13;
    int max_levels = 12;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int levels = 0;
    long evaluations = 0;
};

// f(x, x - a, b - x). The two gaps are computed from the substitution
// variable directly, so integrands with sqrt(x - a) factors keep full
// relative precision next to the endpoints.
using GapIntegrand = std::function<double(double, double, double)>;

QuadratureResult integrate_endpoint_singular(const GapIntegrand& f, double a, double b,
                                             const QuadratureSpec& spec = {});
double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   const QuadratureSpec& spec = {});

// Smooth integrand on a half line [a, inf) by x = a + t/(1-t) folding; used for
// decaying integrands such as the conformal factor.
double integrate_half_line(const std::function<double(double)>& f, double a,
                           const QuadratureSpec& spec = {});

struct RootBracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

// Evaluates f at both ends; throws DomainError if there is no sign change.
RootBracket make_bracket(const std::function<double(double)>& f, double lo, double hi);

struct RootResult {
    double root = 0.0;
    double f_root = 0.0;
    double width = 0.0;
    int iterations = 0;
};

// Brent's method. The returned root always lies in [lo, hi].
RootResult find_root(const std::function<double(double)>& f, const RootBracket& bracket,
                     double tol = 1e-14, int max_iter = 200);

// Indices i with a sign change between values[i] and values[i+1] (zeros count).
std::vector<std::size_t> sign_changes(const std::vector<double>& values);

struct RationalApprox {
    std::int64_t p = 0;
    std::int64_t q = 1;
    double residual = 0.0;
};

// Last continued-fraction convergent of x with denominator <= qmax.
RationalApprox rational_approx(double x, std::int64_t qmax);

// Evenly spaced grid with n >= 2 points including both ends.
std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace cmcsurf
