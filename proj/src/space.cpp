#include "cmcsurf/space.hpp"

#include <cmath>
#include <fmt/format.h>

#include "cmcsurf/errors.hpp"

namespace cmcsurf {

namespace {

const Complex kI{0.0, 1.0};

// Real inner product on C^2 = R^4 with signature (+,+,s,s).
double q_product(const AmbientVector& a, const AmbientVector& b, double s) {
    return std::real(a.dz * std::conj(b.dz)) + s * std::real(a.dw * std::conj(b.dw));
}

AmbientVector position(const AmbientPoint& p) { return {p.z, p.w}; }

} // namespace

std::string_view to_string(SpaceKind kind) {
    return kind == SpaceKind::BergerSphere ? "berger" : "sl2r";
}

void SpaceParams::validate() const {
    if (!std::isfinite(kappa) || !std::isfinite(tau))
        throw DomainError("kappa and tau must be finite");
    if (tau == 0.0)
        throw DomainError("tau must be non-zero (product spaces are not supported)");
    if (std::abs(deviation()) < 1e-14 * std::max(1.0, std::abs(kappa)))
        throw DomainError("kappa - 4 tau^2 must be non-zero (space forms are not supported)");
    if (kind == SpaceKind::BergerSphere && !(kappa > 0.0))
        throw DomainError(fmt::format("Berger spheres need kappa > 0, got {}", kappa));
    if (kind == SpaceKind::Sl2R && !(kappa < 0.0))
        throw DomainError(fmt::format("Sl(2,R) needs kappa < 0, got {}", kappa));
}

SpaceParams make_space(SpaceKind kind, double kappa, double tau) {
    SpaceParams sp{kind, kappa, tau};
    sp.validate();
    return sp;
}

SpaceParams berger(double kappa, double tau) { return make_space(SpaceKind::BergerSphere, kappa, tau); }
SpaceParams sl2r(double kappa, double tau) { return make_space(SpaceKind::Sl2R, kappa, tau); }

AmbientVector operator+(const AmbientVector& a, const AmbientVector& b) { return {a.dz + b.dz, a.dw + b.dw}; }
AmbientVector operator-(const AmbientVector& a, const AmbientVector& b) { return {a.dz - b.dz, a.dw - b.dw}; }
AmbientVector operator*(double c, const AmbientVector& a) { return {c * a.dz, c * a.dw}; }

double quadric_residual(const AmbientPoint& p, const SpaceParams& sp) {
    return std::norm(p.z) + sp.quadric_sign() * std::norm(p.w) - 1.0;
}

AmbientPoint make_point(Complex z, Complex w, const SpaceParams& sp) {
    AmbientPoint p{z, w};
    double r = quadric_residual(p, sp);
    if (!(std::abs(r) <= kQuadricTolerance))
        throw DomainError(fmt::format("point ({}{:+}i, {}{:+}i) is off the {} quadric (residual {:.3e})",
                                      z.real(), z.imag(), w.real(), w.imag(), to_string(sp.kind), r));
    return p;
}

Frame frame_at(const AmbientPoint& p, const SpaceParams& sp) {
    const Complex zb = std::conj(p.z);
    const Complex wb = std::conj(p.w);
    Frame f;
    if (sp.is_berger()) {
        f.e1 = {-wb, zb};
        f.e2 = {-kI * wb, kI * zb};
    } else {
        f.e1 = {wb, zb};
        f.e2 = {kI * wb, kI * zb};
    }
    f.v = {kI * p.z, kI * p.w};
    return f;
}

std::array<double, 3> frame_norms2(const SpaceParams& sp) {
    const double k = sp.kappa;
    const double horizontal = 4.0 / std::abs(k);
    return {horizontal, horizontal, 16.0 * sp.tau * sp.tau / (k * k)};
}

double tangency_residual(const AmbientVector& v, const AmbientPoint& p, const SpaceParams& sp) {
    return q_product(v, position(p), sp.quadric_sign());
}

AmbientVector project_tangent(const AmbientVector& v, const AmbientPoint& p, const SpaceParams& sp) {
    double r = tangency_residual(v, p, sp);
    if (!(std::abs(r) <= kTangencyTolerance))
        throw DomainError(fmt::format("vector is not tangent to the quadric (normal component {:.3e})", r));
    // The position vector has unit Q-norm on the quadric.
    return v - r * position(p);
}

std::array<double, 3> frame_coefficients(const AmbientVector& v, const AmbientPoint& p,
                                         const SpaceParams& sp) {
    const double s = sp.quadric_sign();
    const Frame f = frame_at(p, sp);
    return {q_product(v, f.e1, s) / q_product(f.e1, f.e1, s),
            q_product(v, f.e2, s) / q_product(f.e2, f.e2, s),
            q_product(v, f.v, s) / q_product(f.v, f.v, s)};
}

AmbientVector from_frame(const std::array<double, 3>& c, const AmbientPoint& p, const SpaceParams& sp) {
    const Frame f = frame_at(p, sp);
    return c[0] * f.e1 + c[1] * f.e2 + c[2] * f.v;
}

double metric_frame(const std::array<double, 3>& a, const std::array<double, 3>& b, const SpaceParams& sp) {
    const auto n = frame_norms2(sp);
    return n[0] * a[0] * b[0] + n[1] * a[1] * b[1] + n[2] * a[2] * b[2];
}

double metric_eval(const AmbientVector& u, const AmbientVector& v, const AmbientPoint& p,
                   const SpaceParams& sp) {
    const AmbientVector up = project_tangent(u, p, sp);
    const AmbientVector vp = project_tangent(v, p, sp);
    if (sp.is_berger()) {
        // (4/kappa)[<X,Y> + (4tau^2/kappa - 1)<X,V><Y,V>] with the round metric.
        const AmbientVector V = frame_at(p, sp).v;
        const double xv = q_product(up, V, 1.0);
        const double yv = q_product(vp, V, 1.0);
        return 4.0 / sp.kappa * (q_product(up, vp, 1.0) + (sp.bundle_ratio() - 1.0) * xv * yv);
    }
    return metric_frame(frame_coefficients(up, p, sp), frame_coefficients(vp, p, sp), sp);
}

double killing_coefficient(const SpaceParams& sp) {
    const double c = sp.kappa / (4.0 * sp.tau);
    return sp.is_berger() ? c : -c;
}

AmbientVector killing_field(const AmbientPoint& p, const SpaceParams& sp) {
    return killing_coefficient(sp) * frame_at(p, sp).v;
}

std::array<double, 3> ConnectionTable::evaluate(int a, int b) const {
    const auto& t = entries_[a][b];
    return {t[0].value(sp_), t[1].value(sp_), t[2].value(sp_)};
}

std::array<double, 3> ConnectionTable::contract(const std::array<double, 3>& x,
                                                const std::array<double, 3>& y) const {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (int a = 0; a < 3; ++a) {
        if (x[a] == 0.0) continue;
        for (int b = 0; b < 3; ++b) {
            if (y[b] == 0.0) continue;
            const auto e = evaluate(a, b);
            for (int k = 0; k < 3; ++k) out[k] += x[a] * y[b] * e[k];
        }
    }
    return out;
}

ConnectionTable connection_table(const SpaceParams& sp) {
    sp.validate();
    const Coefficient zero{};
    const Coefficient one{1, 0};
    const Coefficient minus_one{-1, 0};
    const Coefficient ratio{0, 1};
    const Coefficient minus_ratio{0, -1};
    const Coefficient ratio_minus_two{-2, 1};
    const Coefficient two_minus_ratio{2, -1};

    // The two spaces differ only in the sign of the [E1, E2] term.
    const Coefficient e1e2 = sp.is_berger() ? minus_one : one;
    const Coefficient e2e1 = sp.is_berger() ? one : minus_one;

    std::array<std::array<CoefficientTriple, 3>, 3> t{};
    t[kE1][kE1] = {zero, zero, zero};
    t[kE1][kE2] = {zero, zero, e1e2};
    t[kE1][kV] = {zero, ratio, zero};
    t[kE2][kE1] = {zero, zero, e2e1};
    t[kE2][kE2] = {zero, zero, zero};
    t[kE2][kV] = {minus_ratio, zero, zero};
    t[kV][kE1] = {zero, ratio_minus_two, zero};
    t[kV][kE2] = {two_minus_ratio, zero, zero};
    t[kV][kV] = {zero, zero, zero};
    return ConnectionTable(sp, t);
}

} // namespace cmcsurf
