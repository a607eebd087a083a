#include "cmcsurf/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "cmcsurf/errors.hpp"

namespace cmcsurf {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

// Below this |kappa - 4 tau^2| both printed branches lose everything to cancellation.
constexpr double kSeriesThreshold = 1e-6;

double sphere_root(double H, const SpaceParams& sp) {
    const double s2 = 4.0 * H * H + sp.kappa;
    if (!(s2 > 0.0))
        throw DomainError(fmt::format("no CMC sphere for 4H^2 + kappa = {:.6g} <= 0", s2));
    return std::sqrt(s2);
}

void require_nonnegative_H(double H) {
    if (!(H >= 0.0) || !std::isfinite(H))
        throw DomainError(fmt::format("mean curvature must be finite and >= 0, got {}", H));
}

// y'(u) written as a function of the positive latitude u, together with y''.
struct Slope {
    double d1;
    double d2;
};

Slope slope(double u, double H, const SpaceParams& sp) {
    const double b = sp.bundle_ratio();
    const double c = 4.0 * H * H / sp.kappa;
    const double f = H / sp.tau;
    if (sp.is_berger()) {
        const double T = std::tan(u);
        const double p = 1.0 + b * T * T, q = 1.0 - c * T * T;
        const double g = T * std::sqrt(p / q);
        const double dg = std::sqrt(p / q) * (1.0 + b * T * T / p + c * T * T / q);
        return {f * g, f * (1.0 + T * T) * dg};
    }
    const double th = std::tanh(u);
    const double p = 1.0 - b * th * th, q = 1.0 + c * th * th;
    const double g = th * std::sqrt(p / q);
    const double dg = std::sqrt(p / q) * (1.0 - b * th * th / p - c * th * th / q);
    return {f * g, f * (1.0 - th * th) * dg};
}

} // namespace

double arc_series(double d, double w) {
    if (std::abs(d) < kSeriesThreshold) {
        double term = w, sum = w;
        const double r = d * w * w;
        for (int n = 1; n < 60; ++n) {
            term *= r;
            const double add = term / (2.0 * n + 1.0);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    if (d < 0.0) {
        const double r = std::sqrt(-d);
        return std::atan(r * w) / r;
    }
    const double r = std::sqrt(d);
    if (!(r * w < 1.0)) throw DomainError("arctanh argument outside (-1, 1)");
    return std::atanh(r * w) / r;
}

bool SphereProfile::embedded() const { return std::abs(y0) < kPi; }

double sphere_half_domain(double H, const SpaceParams& sp) {
    sp.validate();
    require_nonnegative_H(H);
    sphere_root(H, sp);
    if (sp.is_berger()) return H == 0.0 ? 0.5 * kPi : std::atan(std::sqrt(sp.kappa) / (2.0 * H));
    return std::atanh(std::sqrt(-sp.kappa) / (2.0 * H));
}

SphereProfile sphere_profile(double H, const SpaceParams& sp) {
    SphereProfile p;
    p.H = H;
    p.sp = sp;
    p.a = sphere_half_domain(H, sp);
    p.y0 = sphere_profile_y(0.0, H, sp);
    return p;
}

double aux_branch(double x, double H, const SpaceParams& sp) {
    const double b = sp.bundle_ratio();
    const double c = 4.0 * H * H / sp.kappa;
    if (sp.is_berger()) {
        const double T2 = std::tan(x) * std::tan(x);
        return std::sqrt(std::max(0.0, 1.0 - c * T2)) / std::sqrt(1.0 + b * T2);
    }
    const double th2 = std::tanh(x) * std::tanh(x);
    return std::sqrt(std::max(0.0, 1.0 + c * th2)) / std::sqrt(1.0 - b * th2);
}

double sphere_profile_y(double x, double H, const SpaceParams& sp) {
    const double a = sphere_half_domain(H, sp);
    const double s = sphere_root(H, sp);
    const double d = sp.deviation();
    const double tol = 1e-12 * std::max(1.0, a);
    if (sp.is_berger()) {
        if (x < -tol || x > a + tol)
            throw DomainError(fmt::format("x = {} outside the sphere profile domain [0, {}]", x, a));
        const double lam = aux_branch(std::clamp(x, 0.0, a), H, sp);
        const double tail = H == 0.0 ? 0.0 : (H / sp.tau) * (d / s) * arc_series(d, lam / s);
        return -std::atan2(sp.tau * lam, H) - tail;
    }
    if (x < -a - tol || x > tol)
        throw DomainError(fmt::format("x = {} outside the sphere profile domain [{}, 0]", x, -a));
    const double rho = aux_branch(std::clamp(x, -a, 0.0), H, sp);
    return std::atan2(sp.tau * rho, H) + (H / sp.tau) * (d / s) * arc_series(d, rho / s);
}

double sphere_profile_dy(double x, double H, const SpaceParams& sp) { return slope(x, H, sp).d1; }

double sphere_profile_d2y(double x, double H, const SpaceParams& sp) { return slope(x, H, sp).d2; }

ImmersionJet sphere_immersion_jet(double x, double t, double H, const SpaceParams& sp) {
    const double a = sphere_half_domain(H, sp);
    if (!(x > -a && x < a) || !(t >= -kPi && t <= kPi))
        throw DomainError(fmt::format("({}, {}) outside ]-a, a[ x [-pi, pi] with a = {}", x, t, a));
    // u is the latitude; sigma flips y on the second half.
    const bool first = x < 0.0;
    const double u = first ? x + a : a - x;
    const double eps = first ? 1.0 : -1.0;
    const double sigma = first ? 1.0 : -1.0;
    const double y = sp.is_berger() ? sphere_profile_y(u, H, sp) : sphere_profile_y(-u, H, sp);
    const Slope sl = slope(u, H, sp);
    const double y1 = sl.d1, y2 = sl.d2;
    const Complex ey = std::exp(kI * (sigma * y));
    const Complex et = std::exp(kI * t);
    double c, sn;  // cos/cosh and sin/sinh of u
    double dc, dsn;  // their u-derivatives
    if (sp.is_berger()) {
        c = std::cos(u);
        sn = std::sin(u);
        dc = -sn;
        dsn = c;
    } else {
        c = std::cosh(u);
        sn = std::sinh(u);
        dc = sn;
        dsn = c;
    }
    // f(u) = c(u) e^{i sigma y(u)}; second derivative of c is -c (Berger) or +c.
    const double ddc = sp.is_berger() ? -c : c;
    const double ddsn = sp.is_berger() ? -sn : sn;
    const Complex f1 = (dc + kI * sigma * c * y1) * ey;
    const Complex f2 = (ddc + 2.0 * kI * sigma * dc * y1 + kI * sigma * c * y2 - c * y1 * y1) * ey;

    ImmersionJet j;
    j.p = {c * ey, sn * et};
    j.d1[0] = {eps * f1, eps * dsn * et};
    j.d1[1] = {0.0, kI * sn * et};
    j.d2[0] = {f2, ddsn * et};
    j.d2[1] = {0.0, eps * kI * dsn * et};
    j.d2[2] = {0.0, -sn * et};
    return j;
}

AmbientPoint sphere_immersion(double x, double t, double H, const SpaceParams& sp) {
    return sphere_immersion_jet(x, t, H, sp).p;
}

double conformal_factor(double x, double H, const SpaceParams& sp) {
    sphere_root(H, sp);
    const double k = 4.0 * (H * H + sp.tau * sp.tau);
    const double ch = std::cosh(std::abs(x));
    if (!std::isfinite(ch)) return 0.0;
    const double sech2 = 1.0 / (ch * ch);
    // 16(H^2+tau^2) cosh^2 / [4(H^2+tau^2) cosh^2 + d]^2, divided through by cosh^4.
    const double den = k + sp.deviation() * sech2;
    return 4.0 * k * sech2 / (den * den);
}

double sphere_area(double H, const SpaceParams& sp) {
    sp.validate();
    require_nonnegative_H(H);
    const double s = sphere_root(H, sp);
    const double d = sp.deviation();
    return 8.0 * kPi / (s * s) * (1.0 + 4.0 * (H * H + sp.tau * sp.tau) / s * arc_series(d, 1.0 / s));
}

double sphere_volume(double H, const SpaceParams& sp) {
    sp.validate();
    if (!sp.is_berger()) throw DomainError("the enclosed-volume formula is available for Berger spheres only");
    require_nonnegative_H(H);
    const double s = sphere_root(H, sp);
    const double k = sp.kappa;
    const double tau = std::abs(sp.tau);
    const double d = sp.deviation();
    const double s2 = s * s;
    const double n = d * (2.0 * H * H + k) - 2.0 * tau * tau * s2;
    const double bracket = 2.0 * std::atan2(tau, H) - k * H / (tau * s2) +
                           (2.0 * H / tau) * (n / (s2 * s)) * arc_series(d, 1.0 / s);
    return 16.0 * kPi * tau / (k * k) * bracket;
}

double berger_total_volume(const SpaceParams& sp) {
    sp.validate();
    if (!sp.is_berger()) throw DomainError("Sl(2,R) has infinite volume");
    return 32.0 * kPi * kPi * std::abs(sp.tau) / (sp.kappa * sp.kappa);
}

TorusMeasures torus_area_volume(double H, const SpaceParams& sp) {
    sp.validate();
    if (!sp.is_berger()) throw DomainError("Clifford tori are available for Berger spheres only");
    require_nonnegative_H(H);
    const double s = sphere_root(H, sp);
    const double k = sp.kappa;
    const double tau = std::abs(sp.tau);
    return {4.0 * tau / k * (4.0 * kPi * kPi / s), 16.0 * kPi * kPi * tau / (k * k) * (1.0 - 2.0 * H / s)};
}

double clifford_radius(double H, RadiusSign sign, const SpaceParams& sp) {
    sp.validate();
    if (!sp.is_berger()) throw DomainError("Clifford tori are available for Berger spheres only");
    require_nonnegative_H(H);
    const double s = sphere_root(H, sp);
    const double v = 0.5 + (sign == RadiusSign::Plus ? 1.0 : -1.0) * H / s;
    return std::sqrt(v);
}

} // namespace cmcsurf
