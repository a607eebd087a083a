#include "cmcsurf/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "cmcsurf/closed_forms.hpp"
#include "cmcsurf/errors.hpp"

namespace cmcsurf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance from the axis at which the axis-crossing starts are placed.
constexpr double kAxisOffset = 1e-9;

void require_H(double H) {
    if (!(H >= 0.0) || !std::isfinite(H))
        throw DomainError(fmt::format("H must be finite and >= 0 (use the reflection symmetry), got {}", H));
}

// Sign class of 4H^2 + kappa in Sl2R, with a small band treated as zero.
int sl2r_regime(double H, const SpaceParams& sp) {
    const double q = 4.0 * H * H + sp.kappa;
    const double tol = 1e-12 * std::max(1.0, std::abs(sp.kappa));
    if (q > tol) return 1;
    if (q < -tol) return -1;
    return 0;
}

std::string describe(const FlowParams& fp, const SpaceParams& sp) {
    return fmt::format("(H = {}, E = {}) in {}(kappa = {}, tau = {})", fp.H, fp.E, to_string(sp.kind), sp.kappa,
                       sp.tau);
}

} // namespace

bool EnergyRange::contains(double E, double tol) const {
    const bool above = lo_closed ? E >= lo - tol : E > lo + tol;
    const bool below = hi_closed ? E <= hi + tol : E < hi - tol;
    return above && below;
}

EnergyRange admissible_energy_range(double H, const SpaceParams& sp) {
    sp.validate();
    require_H(H);
    const double q = 4.0 * H * H + sp.kappa;
    if (sp.is_berger()) {
        const double s = std::sqrt(q);
        return {(-2.0 * H - s) / 4.0, (-2.0 * H + s) / 4.0, true, true};
    }
    switch (sl2r_regime(H, sp)) {
    case 1: return {-kInf, (2.0 * H - std::sqrt(q)) / 4.0, false, false};
    case 0: return {-kInf, H / 2.0, false, false};
    default: return {-kInf, kInf, false, false};
    }
}

bool admissible(const FlowParams& fp, const SpaceParams& sp) {
    if (!std::isfinite(fp.E)) return false;
    return admissible_energy_range(fp.H, sp).contains(fp.E);
}

double band_poly(double t, const FlowParams& fp, const SpaceParams& sp) {
    const double k = sp.kappa, H = fp.H, E = fp.E;
    const double a = 1.0 + 4.0 * H * H / k;
    if (sp.is_berger()) return (a * t - (1.0 - 8.0 * H * E / k)) * t + 4.0 * E * E / k;
    return (a * t + (1.0 + 8.0 * H * E / k)) * t + 4.0 * E * E / k;
}

std::string_view to_string(BandShape shape) {
    switch (shape) {
    case BandShape::TwoSided: return "two_sided";
    case BandShape::OneSidedUnbounded: return "one_sided_unbounded";
    case BandShape::Degenerate: return "degenerate";
    }
    return "unknown";
}

TurningBand turning_points(const FlowParams& fp, const SpaceParams& sp) {
    if (!admissible(fp, sp)) throw DomainError("inadmissible energy for " + describe(fp, sp));
    const double k = sp.kappa, H = fp.H, E = fp.E;
    const double q = 4.0 * H * H + k;
    TurningBand band;
    if (sp.is_berger()) {
        const EnergyRange r = admissible_energy_range(H, sp);
        if (std::abs(E - r.lo) <= kEnergyEqualityTol || std::abs(E - r.hi) <= kEnergyEqualityTol) {
            band.shape = BandShape::Degenerate;
            band.t1 = band.t2 = (k - 8.0 * H * E) / (2.0 * q);
            band.x1 = band.x2 = std::asin(std::sqrt(band.t1));
            return band;
        }
        const double disc = std::max(0.0, k * k - 16.0 * k * E * (H + E));
        const double t2 = (k - 8.0 * H * E + std::sqrt(disc)) / (2.0 * q);
        // Small root from the product of the roots, free of cancellation.
        const double t1 = t2 > 0.0 ? (4.0 * E * E / q) / t2 : 0.0;
        band.shape = BandShape::TwoSided;
        band.t1 = std::clamp(t1, 0.0, 1.0);
        band.t2 = std::clamp(t2, 0.0, 1.0);
        band.x1 = std::asin(std::sqrt(band.t1));
        band.x2 = std::asin(std::sqrt(band.t2));
        return band;
    }
    const int regime = sl2r_regime(H, sp);
    if (regime == 0) {
        band.shape = BandShape::OneSidedUnbounded;
        band.t1 = E * E / (H * (H - 2.0 * E));
        band.t2 = kInf;
        band.x1 = -std::asinh(std::sqrt(band.t1));
        band.x2 = -kInf;
        return band;
    }
    const double disc = std::max(0.0, 16.0 * k * E * (H - E) + k * k);
    const double sq = std::sqrt(disc);
    if (regime > 0) {
        const double t2 = (-8.0 * H * E - k + sq) / (2.0 * q);
        const double t1 = t2 > 0.0 ? (4.0 * E * E / q) / t2 : 0.0;
        band.shape = BandShape::TwoSided;
        band.t1 = std::max(0.0, t1);
        band.t2 = std::max(0.0, t2);
        band.x1 = -std::asinh(std::sqrt(band.t2));
        band.x2 = -std::asinh(std::sqrt(band.t1));
        return band;
    }
    // 4H^2 + kappa < 0: p opens upwards with one non-positive root; t >= the other.
    const double t_neg = (-8.0 * H * E - k + sq) / (2.0 * q);
    const double t1 = t_neg < 0.0 ? (4.0 * E * E / q) / t_neg : (-8.0 * H * E - k - sq) / (2.0 * q);
    band.shape = BandShape::OneSidedUnbounded;
    band.t1 = std::max(0.0, t1);
    band.t2 = kInf;
    band.x1 = -std::asinh(std::sqrt(band.t1));
    band.x2 = -kInf;
    return band;
}

double period_T(const FlowParams& fp, const SpaceParams& sp, const QuadratureSpec& qs) {
    const TurningBand band = turning_points(fp, sp);
    if (band.shape != BandShape::TwoSided)
        throw DomainError(fmt::format("period undefined for a {} band at {}", to_string(band.shape), describe(fp, sp)));
    const double k = sp.kappa, H = fp.H, E = fp.E, tau = sp.tau;
    const double b = sp.bundle_ratio();
    const double a = std::abs(1.0 + 4.0 * H * H / k);
    const double x1 = band.x1, x2 = band.x2;
    GapIntegrand f;
    if (sp.is_berger() && std::abs(E + H) <= kEnergyEqualityTol) {
        // E = -H: x2 = pi/2 and m = -H cos^2 x; with cos x = sin(gr) the pole end is regular.
        f = [=](double x, double gl, double) {
            const double c = std::cos(x), sx = std::sin(x);
            const double den = a * std::sin(gl) * std::sin(x + x1);
            if (!(den > 0.0)) return 0.0;
            return -H * std::sqrt(c * c + b * sx * sx) / (tau * std::sqrt(den));
        };
        (void)x2;
    } else if (sp.is_berger()) {
        f = [=](double x, double gl, double gr) {
            const double sx = std::sin(x), cx = std::cos(x);
            const double t = sx * sx;
            const double m = E + H * t;
            const double tx = sx / cx;
            // sin^2 x cos^2 x - (4/k) m^2 = a (t - t1)(t2 - t), each factor as a product of sines.
            const double den = a * std::sin(gl) * std::sin(x + x1) * std::sin(gr) * std::sin(x2 + x);
            if (!(den > 0.0)) return 0.0;
            return m * std::sqrt(1.0 + b * tx * tx) / (tau * std::sqrt(den));
        };
    } else {
        f = [=](double x, double gl, double gr) {
            const double sh = std::sinh(x), th = std::tanh(x);
            const double t = sh * sh;
            const double m = E + H * t;
            const double den = a * std::sinh(gl) * std::sinh(-x1 - x) * std::sinh(gr) * std::sinh(-x - x2);
            if (!(den > 0.0)) return 0.0;
            return m * std::sqrt(1.0 - b * th * th) / (tau * std::sqrt(den));
        };
    }
    return 2.0 * integrate_endpoint_singular(f, x1, x2, qs).value;
}

double pole_chain_y_s1(double H, const SpaceParams& sp, const QuadratureSpec& qs) {
    if (!sp.is_berger()) throw DomainError("pole chains occur in Berger spheres only");
    if (!(H > 0.0)) throw DomainError("pole chains need H > 0");
    // The band for E = -H is [arcsin(2H/s), pi/2], so half the period integral.
    return 0.5 * period_T({H, -H}, sp, qs);
}

std::optional<RationalWitness> rational_witness(double x, double tol, std::int64_t qmax) {
    const RationalApprox r = rational_approx(x, qmax);
    if (r.residual <= tol) return RationalWitness{r.p, r.q, r.residual};
    return std::nullopt;
}

std::optional<RationalWitness> compactness_test(double T, double tol, std::int64_t qmax) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError(fmt::format("period must be >= 0, got {}", T));
    return rational_witness(T / kPi, tol, qmax);
}

std::string_view class_name(const SurfaceClass& c) {
    struct V {
        std::string_view operator()(const surface::Sphere&) const { return "Sphere"; }
        std::string_view operator()(const surface::CliffordTorus&) const { return "CliffordTorus"; }
        std::string_view operator()(const surface::Unduloid&) const { return "Unduloid"; }
        std::string_view operator()(const surface::Nodoid&) const { return "Nodoid"; }
        std::string_view operator()(const surface::PoleChain&) const { return "PoleChain"; }
        std::string_view operator()(const surface::GreatSphere&) const { return "GreatSphere"; }
        std::string_view operator()(const surface::OpenSphereGraph&) const { return "OpenSphereGraph"; }
        std::string_view operator()(const surface::OpenUnduloidGraph&) const { return "OpenUnduloidGraph"; }
        std::string_view operator()(const surface::OpenNodoidGraph&) const { return "OpenNodoidGraph"; }
    };
    return std::visit(V{}, c);
}

namespace {

surface::Unduloid make_unduloid(double T, const ClassifyOptions& o) {
    surface::Unduloid u;
    u.T = T;
    u.compact = compactness_test(std::abs(T), o.tol, o.qmax);
    // Compact and embedded exactly when the period is 2pi/k.
    const double ratio = 2.0 * kPi / std::abs(T);
    const double kk = std::round(ratio);
    u.embedded = kk >= 1.0 && std::abs(ratio - kk) <= o.tol;
    return u;
}

surface::Sphere make_sphere(double H, const SpaceParams& sp) {
    const SphereProfile p = sphere_profile(H, sp);
    return {p.embedded(), p.y0};
}

} // namespace

SurfaceClass classify(const FlowParams& fp, const SpaceParams& sp, const ClassifyOptions& o) {
    sp.validate();
    require_H(fp.H);
    const EnergyRange range = admissible_energy_range(fp.H, sp);
    if (!range.contains(fp.E, o.eq_tol)) throw DomainError("inadmissible energy for " + describe(fp, sp));
    const double H = fp.H, E = fp.E;
    const bool e_zero = std::abs(E) <= o.eq_tol;

    if (sp.is_berger()) {
        if (e_zero) {
            if (H <= o.eq_tol) return surface::GreatSphere{};
            return make_sphere(H, sp);
        }
        if (std::abs(E - range.lo) <= o.eq_tol) return surface::CliffordTorus{clifford_radius(H, RadiusSign::Minus, sp)};
        if (std::abs(E - range.hi) <= o.eq_tol) return surface::CliffordTorus{clifford_radius(H, RadiusSign::Plus, sp)};
        if (std::abs(E + H) <= o.eq_tol) {
            surface::PoleChain pc;
            pc.y_s1 = pole_chain_y_s1(H, sp);
            pc.compact = rational_witness(std::abs(pc.y_s1) / (2.0 * kPi), o.tol, o.qmax);
            pc.embedded_torus = std::abs(pc.y_s1 + 0.5 * kPi) <= o.tol;
            return pc;
        }
        const double T = period_T(fp, sp);
        if (E > 0.0 || E < -H) return make_unduloid(T, o);
        return surface::Nodoid{T, compactness_test(std::abs(T), o.tol, o.qmax)};
    }

    if (sl2r_regime(H, sp) > 0) {
        if (e_zero) return make_sphere(H, sp);
        const double T = period_T(fp, sp);
        if (E > 0.0) return make_unduloid(T, o);
        return surface::Nodoid{T, compactness_test(std::abs(T), o.tol, o.qmax)};
    }
    if (e_zero) return surface::OpenSphereGraph{};
    if (E > 0.0) return surface::OpenUnduloidGraph{};
    return surface::OpenNodoidGraph{};
}

ProfileSetup default_setup(const FlowParams& fp, const SpaceParams& sp) {
    if (!admissible(fp, sp)) throw DomainError("inadmissible energy for " + describe(fp, sp));
    ProfileSetup st;
    const double H = fp.H, E = fp.E;
    // At a turning point alpha is pi/2 or 3pi/2; the energy decides which.
    auto at_turning_point = [&](double x) {
        const double e1 = energy(x, 0.5 * kPi, H, sp);
        const double e2 = energy(x, 1.5 * kPi, H, sp);
        return ProfileState{0.0, x, 0.0, std::abs(e1 - E) <= std::abs(e2 - E) ? 0.5 * kPi : 1.5 * kPi};
    };
    const bool e_zero = std::abs(E) <= kEnergyEqualityTol;

    if (sp.is_berger() && e_zero && H <= kEnergyEqualityTol) {
        st.start = {0.0, kAxisOffset, 0.0, 0.0};
        return st;
    }
    const TurningBand band = turning_points(fp, sp);
    if (band.shape == BandShape::Degenerate) {
        st.start = at_turning_point(band.x1);
        st.opts.turning_point_events = false;
        return st;
    }
    if (sp.is_berger()) {
        // Spheres and nodoids start at the outer turning point, the others at the inner one.
        const bool outer = e_zero || (E < 0.0 && E > -H);
        st.start = at_turning_point(outer ? band.x2 : band.x1);
        return st;
    }
    if (band.shape == BandShape::OneSidedUnbounded && e_zero) {
        // Leaves the axis with cos(alpha) < 0 towards x -> -inf.
        const SinCos sc = alpha_from_energy(-kAxisOffset, Branch::Minus, fp, sp);
        st.start = {0.0, -kAxisOffset, 0.0, std::atan2(sc.sin_alpha, sc.cos_alpha)};
        if (st.start.alpha < 0.0) st.start.alpha += 2.0 * kPi;
        return st;
    }
    st.start = at_turning_point(band.x1);
    return st;
}

} // namespace cmcsurf
