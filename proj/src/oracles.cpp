#include "cmcsurf/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "cmcsurf/errors.hpp"
#include "cmcsurf/numerics.hpp"

namespace cmcsurf {

namespace {

constexpr double kPi = std::numbers::pi;

AmbientVector as_vector(const AmbientPoint& p) { return {p.z, p.w}; }
AmbientPoint as_point(const AmbientVector& v) { return {v.dz, v.dw}; }

double qdot(const AmbientVector& a, const AmbientVector& b, double s) {
    return std::real(a.dz * std::conj(b.dz)) + s * std::real(a.dw * std::conj(b.dw));
}

AmbientVector diff(const AmbientPoint& a, const AmbientPoint& b) { return {a.z - b.z, a.w - b.w}; }

AmbientVector sum(const AmbientPoint& a, const AmbientPoint& b) { return {a.z + b.z, a.w + b.w}; }

// Differences at step h: central in v; in u central (dir = 0) or one-sided
// towards dir = +1 / -1 when the central stencil would cross a break.
ImmersionJet fd_jet(const SurfaceSampler& s, double u, double v, double h, int dir) {
    const double period = s.v1 - s.v0;
    auto f = [&](double uu, double vv) {
        if (s.v_periodic) {
            if (vv < s.v0) vv += period;
            if (vv > s.v1) vv -= period;
        }
        return s.map(uu, vv);
    };
    const AmbientPoint c = f(u, v);
    const AmbientPoint vp = f(u, v + h), vm = f(u, v - h);
    const AmbientVector twice_c = 2.0 * as_vector(c);
    ImmersionJet j;
    j.p = c;
    j.d1[1] = (0.5 / h) * diff(vp, vm);
    j.d2[2] = (1.0 / (h * h)) * (sum(vp, vm) - twice_c);
    if (dir == 0) {
        const AmbientPoint up = f(u + h, v), um = f(u - h, v);
        const AmbientPoint pp = f(u + h, v + h), pm = f(u + h, v - h);
        const AmbientPoint mp = f(u - h, v + h), mm = f(u - h, v - h);
        j.d1[0] = (0.5 / h) * diff(up, um);
        j.d2[0] = (1.0 / (h * h)) * (sum(up, um) - twice_c);
        j.d2[1] = (0.25 / (h * h)) * (diff(pp, pm) - diff(mp, mm));
        return j;
    }
    const double k = dir * h;
    auto at = [&](int i, double dv) { return as_vector(f(u + i * k, v + dv)); };
    const AmbientVector f0 = as_vector(c), f1 = at(1, 0.0), f2 = at(2, 0.0), f3 = at(3, 0.0);
    // Second-order one-sided stencils.
    j.d1[0] = (0.5 / k) * ((-3.0) * f0 + 4.0 * f1 - f2);
    j.d2[0] = (1.0 / (h * h)) * (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f3);
    auto du = [&](double dv) { return (0.5 / k) * ((-3.0) * at(0, dv) + 4.0 * at(1, dv) - at(2, dv)); };
    j.d2[1] = (0.5 / h) * (du(h) - du(-h));
    return j;
}

// Direction of a u stencil of half-width 3h that stays on one smooth piece.
int stencil_side(const SurfaceSampler& s, double u, double h) {
    auto blocked = [&](double lo, double hi) {
        if (lo < s.u0 || hi > s.u1) return true;
        for (double b : s.u_breaks)
            if (lo < b && b < hi) return true;
        return false;
    };
    if (!blocked(u - 1.01 * h, u + 1.01 * h)) return 0;
    if (!blocked(u, u + 3.01 * h)) return 1;
    if (!blocked(u - 3.01 * h, u)) return -1;
    return 0;
}

// Parametrisations may be singular at a break (sqrt-type latitude), so the
// step shrinks with the distance to the nearest one.
double step_near_breaks(const SurfaceSampler& s, double u, double h) {
    double dist = INFINITY;
    for (double b : s.u_breaks) dist = std::min(dist, std::abs(u - b));
    return std::clamp(0.05 * dist, 1e-7, h);
}

AmbientVector extrapolate(const AmbientVector& fine, const AmbientVector& coarse) {
    return (4.0 / 3.0) * fine - (1.0 / 3.0) * coarse;
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

} // namespace

ImmersionJet sample_jet(const SurfaceSampler& surf, double u, double v, const FiniteDifference& fd) {
    if (surf.has_jet()) return surf.jet(u, v);
    if (!surf.map) throw DomainError("surface sampler has neither a map nor a jet");
    if (!(fd.h > 0.0)) throw DomainError("finite-difference step must be positive");
    const double h = step_near_breaks(surf, u, fd.h);
    const int dir = stencil_side(surf, u, h);
    const ImmersionJet coarse = fd_jet(surf, u, v, h, dir);
    if (!fd.richardson) return coarse;
    ImmersionJet fine = fd_jet(surf, u, v, 0.5 * h, dir);
    for (int i = 0; i < 2; ++i) fine.d1[i] = extrapolate(fine.d1[i], coarse.d1[i]);
    for (int i = 0; i < 3; ++i) fine.d2[i] = extrapolate(fine.d2[i], coarse.d2[i]);
    return fine;
}

SurfaceFrameData fundamental_forms(const SurfaceSampler& surf, double u, double v, const SpaceParams& sp,
                                   const FiniteDifference& fd) {
    const ImmersionJet j = sample_jet(surf, u, v, fd);
    const double eps = sp.quadric_sign();
    const Frame fr = frame_at(j.p, sp);
    const std::array<AmbientVector, 3> ek{fr.e1, fr.e2, fr.v};
    std::array<double, 3> qn;
    for (int k = 0; k < 3; ++k) qn[k] = qdot(ek[k], ek[k], eps);
    // The frame fields are R-linear in the point, so d/du E_k(Phi) = E_k(Phi_u).
    std::array<Frame, 2> dframe{frame_at(as_point(j.d1[0]), sp), frame_at(as_point(j.d1[1]), sp)};
    auto dek = [&](int i, int k) -> const AmbientVector& {
        return k == 0 ? dframe[i].e1 : (k == 1 ? dframe[i].e2 : dframe[i].v);
    };

    SurfaceFrameData out;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 3; ++k) out.d[i][k] = qdot(j.d1[i], ek[k], eps) / qn[k];

    const auto G = frame_norms2(sp);
    out.g11 = metric_frame(out.d[0], out.d[0], sp);
    out.g12 = metric_frame(out.d[0], out.d[1], sp);
    out.g22 = metric_frame(out.d[1], out.d[1], sp);
    const double det = out.g11 * out.g22 - out.g12 * out.g12;
    if (!(det > 1e-300) || !std::isfinite(det))
        throw NumericalError(fmt::format("degenerate first fundamental form at ({}, {}): det = {:.3e}", u, v, det));

    std::array<double, 3> bu, bv;
    for (int k = 0; k < 3; ++k) {
        const double sk = std::sqrt(G[k]);
        bu[k] = out.d[0][k] * sk;
        bv[k] = out.d[1][k] * sk;
    }
    auto n = cross(bu, bv);
    const double nn = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (int k = 0; k < 3; ++k) out.normal[k] = n[k] / nn / std::sqrt(G[k]);

    const ConnectionTable table = connection_table(sp);
    // Frame coefficients of nabla_{Phi_i} Phi_j.
    auto second = [&](int i, int jj, const AmbientVector& phi_ij) {
        std::array<double, 3> c = table.contract(out.d[i], out.d[jj]);
        for (int k = 0; k < 3; ++k) c[k] += (qdot(phi_ij, ek[k], eps) + qdot(j.d1[jj], dek(i, k), eps)) / qn[k];
        return metric_frame(c, out.normal, sp);
    };
    out.h11 = second(0, 0, j.d2[0]);
    out.h12 = second(0, 1, j.d2[1]);
    out.h22 = second(1, 1, j.d2[2]);
    return out;
}

double numeric_mean_curvature(const SurfaceSampler& surf, double u, double v, const SpaceParams& sp,
                              const FiniteDifference& fd) {
    const SurfaceFrameData f = fundamental_forms(surf, u, v, sp, fd);
    const double det = f.g11 * f.g22 - f.g12 * f.g12;
    return (f.g22 * f.h11 - 2.0 * f.g12 * f.h12 + f.g11 * f.h22) / (2.0 * det);
}

double numeric_normal_tilt(const SurfaceSampler& surf, double u, double v, const SpaceParams& sp,
                           const FiniteDifference& fd) {
    const SurfaceFrameData f = fundamental_forms(surf, u, v, sp, fd);
    return killing_coefficient(sp) * frame_norms2(sp)[2] * f.normal[2];
}

double numeric_area(const SurfaceSampler& surf, const SpaceParams& sp, const AreaOptions& opts) {
    QuadratureSpec q;
    q.rel_tol = opts.rel_tol;
    q.abs_tol = 1e-15;
    auto density = [&](double u, double v) {
        const SurfaceFrameData f = fundamental_forms(surf, u, v, sp);
        const double det = f.g11 * f.g22 - f.g12 * f.g12;
        return std::sqrt(std::max(0.0, det));
    };
    auto density_safe = [&](double u, double v) {
        try {
            const double d = density(u, v);
            return std::isfinite(d) ? d : 0.0;
        } catch (const NumericalError&) {
            // Degenerate at a collapsed circle; the density vanishes there.
            return 0.0;
        } catch (const DomainError&) {
            return 0.0;
        }
    };
    auto inner = [&](double u) {
        if (surf.v_periodic) {
            const int n = opts.periodic_points;
            const double h = (surf.v1 - surf.v0) / n;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += density_safe(u, surf.v0 + i * h);
            return acc * h;
        }
        return integrate_endpoint_singular([&](double v) { return density_safe(u, v); }, surf.v0, surf.v1, q);
    };
    std::vector<double> cuts{surf.u0};
    for (double b : surf.u_breaks)
        if (b > surf.u0 && b < surf.u1) cuts.push_back(b);
    cuts.push_back(surf.u1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate_endpoint_singular(inner, cuts[i], cuts[i + 1], q);
    return total;
}

double numeric_volume_coarea(double H, const SpaceParams& sp) {
    sp.validate();
    if (!sp.is_berger()) throw DomainError("co-area volume is available for Berger spheres only");
    const double a = sphere_half_domain(H, sp);
    auto f = [&](double t) {
        const double y = sphere_profile_y(std::min(t, a), H, sp);
        return std::sin(t) * std::cos(t) * std::abs(y);
    };
    QuadratureSpec q;
    q.abs_tol = 1e-16;
    q.rel_tol = 1e-14;
    const double I = integrate_endpoint_singular(f, 0.0, a, q);
    return 64.0 * kPi * std::abs(sp.tau) / (sp.kappa * sp.kappa) * I;
}

SurfaceSampler great_sphere_sampler(const SpaceParams& sp) {
    sp.validate();
    if (!sp.is_berger()) throw DomainError("the great sphere lives in Berger spheres");
    SurfaceSampler s;
    s.map = [](double u, double v) {
        return AmbientPoint{Complex{std::cos(u), 0.0}, std::sin(u) * std::exp(Complex{0.0, v})};
    };
    s.u0 = 0.0;
    s.u1 = kPi;
    s.v0 = 0.0;
    s.v1 = 2.0 * kPi;
    s.v_periodic = true;
    return s;
}

SurfaceSampler clifford_torus_sampler(double r, const SpaceParams& sp) {
    sp.validate();
    if (!sp.is_berger()) throw DomainError("Clifford tori live in Berger spheres");
    if (!(r > 0.0 && r < 1.0)) throw DomainError(fmt::format("torus radius must lie in (0, 1), got {}", r));
    const double rr = std::sqrt(1.0 - r * r);
    SurfaceSampler s;
    s.map = [=](double u, double v) {
        return AmbientPoint{r * std::exp(Complex{0.0, u}), rr * std::exp(Complex{0.0, v})};
    };
    s.u0 = 0.0;
    s.u1 = 2.0 * kPi;
    s.v0 = 0.0;
    s.v1 = 2.0 * kPi;
    s.v_periodic = true;
    return s;
}

SurfaceSampler sphere_sampler(double H, const SpaceParams& sp, bool use_jet) {
    const double a = sphere_half_domain(H, sp);
    SurfaceSampler s;
    s.map = [=](double x, double t) { return sphere_immersion(x, t, H, sp); };
    if (use_jet) s.jet = [=](double x, double t) { return sphere_immersion_jet(x, t, H, sp); };
    s.u0 = -a;
    s.u1 = a;
    s.v0 = -kPi;
    s.v1 = kPi;
    s.u_breaks = {0.0};
    s.v_periodic = true;
    return s;
}

SurfaceSampler rescaled(const SurfaceSampler& surf, double scale) {
    if (!(scale > 0.0)) throw DomainError("scale must be positive");
    SurfaceSampler s = surf;
    if (surf.map) s.map = [m = surf.map, scale](double u, double v) { return m(u / scale, v); };
    if (surf.jet) {
        s.jet = [jt = surf.jet, scale](double u, double v) {
            ImmersionJet j = jt(u / scale, v);
            j.d1[0] = (1.0 / scale) * j.d1[0];
            j.d2[0] = (1.0 / (scale * scale)) * j.d2[0];
            j.d2[1] = (1.0 / scale) * j.d2[1];
            return j;
        };
    }
    s.u0 = surf.u0 * scale;
    s.u1 = surf.u1 * scale;
    for (double& b : s.u_breaks) b *= scale;
    return s;
}

SurfaceSampler swapped(const SurfaceSampler& surf) {
    SurfaceSampler s;
    if (surf.map) s.map = [m = surf.map](double u, double v) { return m(v, u); };
    if (surf.jet) {
        s.jet = [jt = surf.jet](double u, double v) {
            ImmersionJet j = jt(v, u);
            std::swap(j.d1[0], j.d1[1]);
            std::swap(j.d2[0], j.d2[2]);
            return j;
        };
    }
    s.u0 = surf.v0;
    s.u1 = surf.v1;
    s.v0 = surf.u0;
    s.v1 = surf.u1;
    return s;
}

} // namespace cmcsurf
