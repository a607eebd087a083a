#include "cmcsurf/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "cmcsurf/errors.hpp"

namespace cmcsurf {

namespace {

constexpr double kPi = std::numbers::pi;

// Beyond t = 4 the tanh-sinh gaps are ~1e-37 of the half width.
constexpr double kTanhSinhTMax = 4.0;

double checked(double v, double x) {
    if (!std::isfinite(v))
        throw NumericalError(fmt::format("integrand is not finite at x = {:.17g}", x));
    return v;
}

// Contribution of the pair of nodes +-t (or the single node t = 0).
double tanh_sinh_node(const GapIntegrand& f, double a, double b, double t, long& evals) {
    const double half = 0.5 * (b - a);
    const double u = 0.5 * kPi * std::sinh(std::abs(t));
    const double e = std::exp(-2.0 * u);
    const double small_gap = half * 2.0 * e / (1.0 + e);
    const double large_gap = half * 2.0 / (1.0 + e);
    const double w = half * 0.5 * kPi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    if (w == 0.0 || small_gap == 0.0) return 0.0;
    if (t == 0.0) {
        const double x = a + half;
        ++evals;
        return w * checked(f(x, half, half), x);
    }
    // Node near b and its mirror near a.
    const double xr = b - small_gap;
    const double xl = a + small_gap;
    evals += 2;
    return w * (checked(f(xr, large_gap, small_gap), xr) + checked(f(xl, small_gap, large_gap), xl));
}

QuadratureResult tanh_sinh(const GapIntegrand& f, double a, double b, const QuadratureSpec& spec) {
    QuadratureResult res;
    double h = 1.0;
    double sum = tanh_sinh_node(f, a, b, 0.0, res.evaluations);
    for (int k = 1; k * h <= kTanhSinhTMax; ++k) sum += tanh_sinh_node(f, a, b, k * h, res.evaluations);
    double prev = h * sum;
    for (int level = 1; level <= spec.max_levels; ++level) {
        h *= 0.5;
        // Only the odd multiples of the new step are new nodes.
        for (int k = 1; k * h <= kTanhSinhTMax; k += 2) sum += tanh_sinh_node(f, a, b, k * h, res.evaluations);
        const double cur = h * sum;
        res.levels = level;
        res.value = cur;
        res.error_estimate = std::abs(cur - prev);
        if (level >= 3 && res.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(cur)))
            return res;
        prev = cur;
    }
    throw NumericalError(fmt::format("tanh-sinh quadrature on [{}, {}] did not converge in {} levels "
                                     "(last estimate {:.3e}, last change {:.3e})",
                                     a, b, spec.max_levels, res.value, res.error_estimate));
}

struct GaussRule {
    std::array<double, 20> x{};
    std::array<double, 20> w{};
};

// 20-point Gauss-Legendre nodes by Newton iteration on P_20.
const GaussRule& gauss20() {
    static const GaussRule rule = [] {
        GaussRule r;
        constexpr int n = 20;
        for (int i = 0; i < n; ++i) {
            double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 1.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0;
                double p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (z * p1 - p0) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            r.x[i] = z;
            r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return r;
    }();
    return rule;
}

// x = c + half sin(theta): the 1/sqrt endpoint behaviour becomes smooth in theta.
QuadratureResult sine_gauss(const GapIntegrand& f, double a, double b, const QuadratureSpec& spec) {
    const GaussRule& g = gauss20();
    const double half = 0.5 * (b - a);
    auto panel_sum = [&](int panels, long& evals) {
        const double width = kPi / panels;
        double total = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double mid = -0.5 * kPi + (p + 0.5) * width;
            for (int i = 0; i < 20; ++i) {
                const double theta = mid + 0.5 * width * g.x[i];
                const double sl = std::sin(0.25 * kPi + 0.5 * theta);
                const double sr = std::sin(0.25 * kPi - 0.5 * theta);
                const double left = 2.0 * half * sl * sl;
                const double right = 2.0 * half * sr * sr;
                const double x = a + left;
                ++evals;
                total += 0.5 * width * g.w[i] * checked(f(x, left, right), x) * half * std::cos(theta);
            }
        }
        return total;
    };
    QuadratureResult res;
    double prev = panel_sum(1, res.evaluations);
    for (int level = 1; level <= spec.max_levels; ++level) {
        const double cur = panel_sum(1 << level, res.evaluations);
        res.levels = level;
        res.value = cur;
        res.error_estimate = std::abs(cur - prev);
        if (res.error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::abs(cur))) return res;
        prev = cur;
    }
    throw NumericalError(fmt::format("sine-substituted Gauss quadrature on [{}, {}] did not converge in {} levels "
                                     "(last change {:.3e})",
                                     a, b, spec.max_levels, res.error_estimate));
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw DomainError("quadrature tolerances must be positive");
    if (max_levels < 3 || max_levels > 24)
        throw DomainError(fmt::format("max_levels must be in [3, 24], got {}", max_levels));
}

QuadratureResult integrate_endpoint_singular(const GapIntegrand& f, double a, double b,
                                             const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a) || !std::isfinite(b))
        throw DomainError("integration limits must be finite");
    if (a == b) return {};
    if (a > b) {
        QuadratureResult r = integrate_endpoint_singular(
            [&](double x, double l, double r) { return f(x, r, l); }, b, a, spec);
        r.value = -r.value;
        return r;
    }
    return spec.method == QuadratureMethod::DoubleExponential ? tanh_sinh(f, a, b, spec)
                                                              : sine_gauss(f, a, b, spec);
}

double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   const QuadratureSpec& spec) {
    return integrate_endpoint_singular([&](double x, double, double) { return f(x); }, a, b, spec).value;
}

double integrate_half_line(const std::function<double(double)>& f, double a, const QuadratureSpec& spec) {
    // x = a + (1 - g)/g with g the gap to the folded endpoint t = 1.
    return integrate_endpoint_singular(
               [&](double, double t, double g) {
                   const double x = a + t / g;
                   const double v = f(x);
                   return v == 0.0 ? 0.0 : v / (g * g);
               },
               0.0, 1.0, spec)
        .value;
}

RootBracket make_bracket(const std::function<double(double)>& f, double lo, double hi) {
    RootBracket br{lo, hi, f(lo), f(hi)};
    if (!std::isfinite(br.f_lo) || !std::isfinite(br.f_hi))
        throw NumericalError(fmt::format("function not finite at bracket ends [{}, {}]", lo, hi));
    if (br.f_lo * br.f_hi > 0.0)
        throw DomainError(fmt::format("no sign change on [{:.10g}, {:.10g}] (f = {:.3e}, {:.3e})", lo, hi,
                                      br.f_lo, br.f_hi));
    return br;
}

RootResult find_root(const std::function<double(double)>& f, const RootBracket& bracket, double tol,
                     int max_iter) {
    double a = bracket.lo, b = bracket.hi;
    double fa = bracket.f_lo, fb = bracket.f_hi;
    if (fa * fb > 0.0)
        throw DomainError(fmt::format("invalid bracket [{}, {}]: f has the same sign at both ends", a, b));
    if (fa == 0.0) return {a, 0.0, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0.0, 0};
    const double lo = std::min(a, b), hi = std::max(a, b);

    double c = a, fc = fa;
    double d = b - a, e = d;
    RootResult out;
    for (int it = 1; it <= max_iter; ++it) {
        if (fb * fc > 0.0) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        out = {std::clamp(b, lo, hi), fb, std::abs(c - b), it};
        if (std::abs(xm) <= tol1 || fb == 0.0) return out;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (!std::isfinite(fb)) throw NumericalError(fmt::format("root finder hit non-finite f at {:.17g}", b));
    }
    throw NumericalError(fmt::format("root finder did not converge in {} iterations (width {:.3e})", max_iter,
                                     out.width));
}

std::vector<std::size_t> sign_changes(const std::vector<double>& values) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double u = values[i], v = values[i + 1];
        if (!std::isfinite(u) || !std::isfinite(v)) continue;
        if ((u <= 0.0 && v > 0.0) || (u >= 0.0 && v < 0.0) || (u == 0.0 && v == 0.0)) idx.push_back(i);
    }
    return idx;
}

RationalApprox rational_approx(double x, std::int64_t qmax) {
    if (qmax < 1) throw DomainError("qmax must be at least 1");
    if (!std::isfinite(x)) throw DomainError("cannot approximate a non-finite value");
    // Convergents h/k with the usual two-term recurrences.
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
    std::int64_t k_prev = 0, k = 1;
    double frac = x - std::floor(x);
    for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
        const double inv = 1.0 / frac;
        if (inv > static_cast<double>(qmax) + 1.0) break;
        const auto an = static_cast<std::int64_t>(std::floor(inv));
        const std::int64_t k_next = an * k + k_prev;
        if (k_next > qmax) break;
        const std::int64_t h_next = an * h + h_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        frac = inv - static_cast<double>(an);
    }
    return {h, k, std::abs(x - static_cast<double>(h) / static_cast<double>(k))};
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n < 2) throw DomainError("a grid needs at least two points");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = hi;
    return g;
}

} // namespace cmcsurf
