#include "cmcsurf/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "cmcsurf/errors.hpp"
#include "cmcsurf/numerics.hpp"
#include "cmcsurf/ode.hpp"

namespace cmcsurf {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Squared denominator of C; strictly positive in both spaces.
double tilt_den2(double x, double alpha, const SpaceParams& sp) {
    const double b = sp.bundle_ratio();
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    if (sp.is_berger()) {
        const double cx = std::cos(x), sx = std::sin(x);
        return ca * ca * (cx * cx + b * sx * sx) + b * sa * sa;
    }
    const double ch = std::cosh(x), sh = std::sinh(x);
    return ca * ca * (ch * ch - b * sh * sh) - b * sa * sa;
}

// Radicand of cos(alpha) on the energy shell, clamped when within roundoff of 0.
double clamp_radicand(double r, double x) {
    if (r < -1e-9)
        throw DomainError(fmt::format("x = {:.15g} lies outside the admissible band (radicand {:.3e})", x, r));
    return std::max(r, 0.0);
}

} // namespace

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::TurningPoint: return "turning_point";
    case EventKind::AxisTouch: return "axis_touch";
    case EventKind::Reflection: return "reflection";
    case EventKind::PoleTouch: return "pole_touch";
    }
    return "unknown";
}

std::vector<std::size_t> ProfileCurve::event_indices(EventKind kind) const {
    std::vector<std::size_t> out;
    for (const auto& e : events)
        if (e.kind == kind) out.push_back(e.index);
    return out;
}

double tilt_C(double x, double alpha, const SpaceParams& sp) {
    const double d = std::sqrt(tilt_den2(x, alpha, sp));
    const double num = (sp.is_berger() ? std::cos(x) : std::cosh(x)) * std::cos(alpha);
    return std::clamp(num / d, -1.0, 1.0);
}

ProfileRhs ode_rhs(const ProfileState& st, double H, const SpaceParams& sp) {
    const double b = sp.bundle_ratio();
    const double x = st.x, a = st.alpha;
    const double ca = std::cos(a), sa = std::sin(a);
    const double d = std::sqrt(tilt_den2(x, a, sp));
    const double d3 = d * d * d;
    ProfileRhs r;
    r.dx = ca;
    if (sp.is_berger()) {
        const double cx = std::cos(x), sx = std::sin(x);
        r.dy = sa / cx;
        if (sx == 0.0) {
            r.singular = true;
            r.dalpha = std::numeric_limits<double>::quiet_NaN();
            return r;
        }
        const double tx = sx / cx;
        const double bracket = (1.0 - b) * cx * cx * ca * ca + b * (1.0 - tx * tx);
        r.dalpha = (2.0 * H * d3 / sp.tau - (sa / tx) * bracket) / (cx * cx + b * sx * sx);
    } else {
        const double ch = std::cosh(x), sh = std::sinh(x);
        r.dy = sa / ch;
        if (sh == 0.0) {
            r.singular = true;
            r.dalpha = std::numeric_limits<double>::quiet_NaN();
            return r;
        }
        const double th = sh / ch;
        const double bracket = (1.0 - b) * ca * ca * ch * ch + b * (2.0 * ca * ca - 1.0) * (1.0 + th * th);
        r.dalpha = (2.0 * H * d3 / sp.tau - (sa / th) * bracket) / (ch * ch - b * sh * sh);
    }
    return r;
}

double energy(double x, double alpha, double H, const SpaceParams& sp) {
    const double d = std::sqrt(tilt_den2(x, alpha, sp));
    const double sa = std::sin(alpha);
    if (sp.is_berger()) {
        const double sx = std::sin(x);
        return sp.tau * sx * std::cos(x) * sa / d - H * sx * sx;
    }
    const double sh = std::sinh(x);
    return sp.tau * sh * std::cosh(x) * sa / d - H * sh * sh;
}

SinCos alpha_from_energy(double x, Branch branch, const FlowParams& fp, const SpaceParams& sp) {
    const double b = sp.bundle_ratio();
    const double k = sp.kappa;
    const double tau = sp.tau;
    const double sign_cos = branch == Branch::Plus ? 1.0 : -1.0;
    if (sp.is_berger()) {
        const double sx = std::sin(x), cx = std::cos(x);
        if (!(cx > 0.0)) throw DomainError(fmt::format("x = {} is outside the chart cos x > 0", x));
        const double m = fp.E + fp.H * sx * sx;
        if (sx == 0.0) {
            if (m != 0.0) throw DomainError("the axis x = 0 is only reached when E = 0");
            return {0.0, sign_cos};
        }
        const double tx = sx / cx;
        const double rho = std::sqrt(tau * tau * sx * sx + (1.0 - b) * m * m);
        const double rad = clamp_radicand(1.0 - (4.0 / k) * m * m / (sx * sx * cx * cx), x);
        return {sgn(tau) * m * std::sqrt(1.0 + b * tx * tx) / rho,
                sign_cos * std::abs(tau * sx) * std::sqrt(rad) / rho};
    }
    const double sh = std::sinh(x), ch = std::cosh(x);
    const double m = fp.E + fp.H * sh * sh;
    if (sh == 0.0) {
        if (m != 0.0) throw DomainError("the axis x = 0 is only reached when E = 0");
        return {0.0, sign_cos};
    }
    const double th = sh / ch, sech2 = 1.0 / (ch * ch);
    const double mu = std::sqrt(tau * tau * sh * sh + m * m * (1.0 - b * (th * th - sech2)));
    const double rad = clamp_radicand(1.0 + (4.0 / k) * m * m / (ch * ch * sh * sh), x);
    return {sgn(tau * sh) * m * std::sqrt(1.0 - b * th * th) / mu,
            sign_cos * std::abs(tau * sh) * std::sqrt(rad) / mu};
}

double q_poly(double t, const FlowParams& fp, const SpaceParams& sp) {
    if (!sp.is_berger()) throw DomainError("q(t) is defined for Berger spheres only");
    const double H = fp.H, E = fp.E, k = sp.kappa;
    const double d = sp.deviation();
    const double c3 = (H / (k * k)) * d * (4.0 * H * H + k);
    const double c2 = (d / k) * (12.0 * E * H * H / k - (E + 2.0 * H));
    const double c1 = 12.0 * H * E * E * d / (k * k) + 2.0 * E + H;
    const double c0 = 4.0 * E * E * E * d / (k * k) - E;
    return ((c3 * t + c2) * t + c1) * t + c0;
}

double alpha_prime_from_sin_derivative(double x, const FlowParams& fp, const SpaceParams& sp) {
    const double b = sp.bundle_ratio();
    const double tau = sp.tau;
    const double H = fp.H;
    // Validates the band and the chart.
    alpha_from_energy(x, Branch::Plus, fp, sp);
    if (sp.is_berger()) {
        const double sx = std::sin(x), cx = std::cos(x);
        if (sx == 0.0) throw SingularityError("alpha' is singular on the axis");
        const double tx = sx / cx;
        const double m = fp.E + H * sx * sx;
        const double dm = 2.0 * H * sx * cx;
        const double S = std::sqrt(1.0 + b * tx * tx);
        const double dS = b * tx / (cx * cx) / S;
        const double rho2 = tau * tau * sx * sx + (1.0 - b) * m * m;
        const double rho = std::sqrt(rho2);
        const double drho = (2.0 * tau * tau * sx * cx + 2.0 * (1.0 - b) * m * dm) / (2.0 * rho);
        return sgn(tau) * ((dm * S + m * dS) / rho - m * S * drho / rho2);
    }
    const double sh = std::sinh(x), ch = std::cosh(x);
    if (sh == 0.0) throw SingularityError("alpha' is singular on the axis");
    const double th = sh / ch, sech2 = 1.0 / (ch * ch);
    const double m = fp.E + H * sh * sh;
    const double dm = 2.0 * H * sh * ch;
    const double S = std::sqrt(1.0 - b * th * th);
    const double dS = -b * th * sech2 / S;
    const double W = 1.0 - b * (th * th - sech2);
    const double dW = -4.0 * b * th * sech2;
    const double mu2 = tau * tau * sh * sh + m * m * W;
    const double mu = std::sqrt(mu2);
    const double dmu = (2.0 * tau * tau * sh * ch + 2.0 * m * dm * W + m * m * dW) / (2.0 * mu);
    return sgn(tau * sh) * ((dm * S + m * dS) / mu - m * S * dmu / mu2);
}

double alpha_prime_reduced(double x, const FlowParams& fp, const SpaceParams& sp) {
    if (!sp.is_berger()) return alpha_prime_from_sin_derivative(x, fp, sp);
    alpha_from_energy(x, Branch::Plus, fp, sp);
    const double sx = std::sin(x), cx = std::cos(x);
    if (sx == 0.0) throw SingularityError("alpha' is singular on the axis");
    const double b = sp.bundle_ratio();
    const double tau2 = sp.tau * sp.tau;
    const double t = sx * sx;
    const double m = fp.E + fp.H * t;
    const double rho2 = tau2 * t + (1.0 - b) * m * m;
    const double den = cx * std::sqrt(cx * cx + b * t) * rho2 * std::sqrt(rho2);
    return sgn(sp.tau) * tau2 * (sx / cx) * q_poly(t, fp, sp) / den;
}

namespace {

using S3 = ode::State<3>;

constexpr int kEvTurning = 0;
constexpr int kEvAxis = 1;
constexpr int kEvPole = 2;

// The raw ODE is unstable next to the pole (y' ~ sin(alpha)/cos x), so it stops
// at cos x = kPoleGap and the rest is done by quadrature on the energy shell.
constexpr double kPoleGap = 1e-3;

bool reaches_pole(const FlowParams& fp, const SpaceParams& sp) {
    return sp.is_berger() && std::abs(fp.E + fp.H) <= 1e-12;
}

struct RawArc {
    std::vector<ProfileState> samples;  // excludes the start state
    int event = -1;
};

RawArc run_raw(const ProfileState& st, const FlowParams& fp, const SpaceParams& sp, double s_end,
               const IntegrationOptions& opts) {
    RawArc arc;
    const ode::Rhs<3> rhs = [&](double s, const S3& y) {
        const ProfileRhs r = ode_rhs({s, y[0], y[1], y[2]}, fp.H, sp);
        if (r.singular) throw SingularityError("profile ODE evaluated on the axis");
        return S3{r.dx, r.dy, r.dalpha};
    };
    std::vector<ode::Event<3>> events;
    if (opts.turning_point_events)
        events.push_back({[](double, const S3& y) { return std::cos(y[2]); }, kEvTurning});
    if (sp.is_berger()) {
        events.push_back({[](double, const S3& y) { return std::sin(y[0]); }, kEvAxis});
        if (reaches_pole(fp, sp))
            events.push_back({[](double, const S3& y) { return std::cos(y[0]) - kPoleGap; }, kEvPole});
    } else {
        events.push_back({[](double, const S3& y) { return std::sinh(y[0]); }, kEvAxis});
    }
    ode::Options o;
    o.rtol = opts.rtol;
    o.atol = opts.atol;
    const ode::StepObserver<3> obs = [&](const ode::DenseStep<3>& ds) {
        const double span = ds.t_stop - ds.t0;
        const int n = std::max(1, static_cast<int>(std::ceil(span / opts.max_sample_ds - 1e-9)));
        for (int j = 1; j <= n; ++j) {
            const double s = j == n ? ds.t_stop : ds.t0 + span * j / n;
            const S3 y = (j == n && ds.t_stop == ds.t1()) ? ds.y1 : ds(s);
            arc.samples.push_back({s, y[0], y[1], y[2]});
        }
    };
    const auto out = ode::integrate<3>(rhs, st.s, S3{st.x, st.y, st.alpha}, s_end, events, o, obs);
    arc.event = out.event_id;
    return arc;
}

// Reflection across the vertical line through a turning point, time reversed.
ProfileState reflect_turning(const ProfileState& p, const ProfileState& e) {
    return {2.0 * e.s - p.s, p.x, 2.0 * e.y - p.y, 2.0 * e.alpha - p.alpha};
}

// Continuation through the pole: the same arc traversed back with y shifted by
// pi; alpha picks up the chart change (alpha + pi at the pole itself).
ProfileState reflect_pole(const ProfileState& p, const ProfileState& e) {
    return {2.0 * e.s - p.s, p.x, 2.0 * e.y + kPi - p.y, 2.0 * e.alpha + kPi - p.alpha};
}

ProfileState snap_turning(ProfileState p) {
    p.alpha = kPi * (std::round((p.alpha - 0.5 * kPi) / kPi) + 0.5);
    return p;
}

// From x_e (cos x_e = kPoleGap, moving up) to the pole along the energy shell.
// With the gap g = pi/2 - x: cos x = sin g, and m/cos x = (E + H)/cos x - H cos x
// stays finite.
ProfileState pole_state(const ProfileState& e, const FlowParams& fp, const SpaceParams& sp) {
    const double b = sp.bundle_ratio();
    const double tau = sp.tau, k = sp.kappa;
    const double eh = fp.E + fp.H;
    struct Shell {
        double sin_over_c;  // sin(alpha) / cos x
        double cos_a;
    };
    auto shell = [&](double g) {
        const double c = std::sin(g), sx = std::cos(g);
        const double m_c = eh / c - fp.H * c;
        const double m = m_c * c;
        const double rho = std::sqrt(tau * tau * sx * sx + (1.0 - b) * m * m);
        const double rad = std::max(0.0, 1.0 - (4.0 / k) * m_c * m_c / (sx * sx));
        return Shell{sgn(tau) * m_c * std::sqrt(c * c + b * sx * sx) / (c * rho), std::abs(tau * sx) * std::sqrt(rad) / rho};
    };
    const double x_lo = e.x, x_hi = 0.5 * kPi;
    QuadratureSpec q;
    q.rel_tol = 1e-12;
    const double ds = integrate_endpoint_singular(
        [&](double, double, double gr) { return 1.0 / shell(gr).cos_a; }, x_lo, x_hi, q).value;
    const double dy = integrate_endpoint_singular(
        [&](double, double, double gr) {
            const Shell sh = shell(gr);
            return sh.sin_over_c / sh.cos_a;
        },
        x_lo, x_hi, q).value;
    return {e.s + ds, x_hi, e.y + dy, kPi * std::round(e.alpha / kPi)};
}

class Builder {
public:
    Builder(ProfileCurve& c, double s_end, int max_events) : c_(c), s_end_(s_end), max_events_(max_events) {}

    // False once the span is exhausted.
    bool push(const ProfileState& p) {
        if (p.s > s_end_ + 1e-12) return false;
        c_.samples.push_back(p);
        return true;
    }
    std::size_t last() const { return c_.samples.size() - 1; }
    void mark(EventKind k) { c_.events.push_back({last(), k}); }
    // Marks a turning-point or pole event; false when the event budget is used up.
    bool count(EventKind k) {
        mark(k);
        ++n_events_;
        return !(max_events_ > 0 && n_events_ >= max_events_);
    }

private:
    ProfileCurve& c_;
    double s_end_;
    int max_events_;
    int n_events_ = 0;
};

EventKind kind_of(int ev) { return ev == kEvPole ? EventKind::PoleTouch : EventKind::TurningPoint; }

// Appends reflected copies of a complete event-to-event arc until the span or
// the event budget is exhausted.
void continue_by_reflection(std::vector<ProfileState> arc, EventKind k_begin, EventKind k_end, Builder& b) {
    for (;;) {
        const ProfileState e = arc.back();
        std::vector<ProfileState> next;
        next.reserve(arc.size() + 1);
        if (k_end == EventKind::PoleTouch) {
            next.push_back(reflect_pole(e, e));
            if (!b.push(next.back())) return;
            b.mark(EventKind::Reflection);
        } else {
            next.push_back(e);
            b.mark(EventKind::Reflection);
        }
        for (std::size_t i = arc.size() - 1; i-- > 0;) {
            next.push_back(k_end == EventKind::PoleTouch ? reflect_pole(arc[i], e) : reflect_turning(arc[i], e));
            if (!b.push(next.back())) return;
        }
        if (!b.count(k_begin)) return;
        arc = std::move(next);
        std::swap(k_begin, k_end);
    }
}

} // namespace

ProfileCurve integrate_profile(const ProfileState& start, const FlowParams& fp, const SpaceParams& sp,
                               double span, const IntegrationOptions& opts) {
    sp.validate();
    if (!(span > 0.0) || !std::isfinite(span)) throw DomainError("span must be positive and finite");
    if (!(opts.max_sample_ds > 0.0)) throw DomainError("max_sample_ds must be positive");
    const double e0 = energy(start.x, start.alpha, fp.H, sp);
    if (std::abs(e0 - fp.E) > 1e-10 * (1.0 + std::abs(fp.E)))
        throw DomainError(fmt::format("start state has energy {:.15g}, expected {:.15g}", e0, fp.E));

    ProfileCurve c;
    c.sp = sp;
    c.fp = fp;
    const double s_end = start.s + span;
    Builder b(c, s_end, opts.max_events);
    b.push(start);

    ProfileState cur = start;
    std::size_t arc_begin = 0;
    // A start on a turning point makes the first arc a complete one.
    bool arc_full = opts.turning_point_events && std::abs(std::cos(start.alpha)) <= 1e-12;
    EventKind begin_kind = EventKind::TurningPoint;

    for (;;) {
        RawArc raw = run_raw(cur, fp, sp, s_end, opts);
        for (const auto& p : raw.samples) c.samples.push_back(p);
        if (raw.event < 0) break;
        if (raw.event == kEvAxis) {
            b.mark(EventKind::AxisTouch);
            break;
        }
        const EventKind kind = kind_of(raw.event);
        if (kind == EventKind::PoleTouch) {
            if (std::cos(c.samples.back().alpha) <= 0.0) throw NumericalError("pole approached with dx/ds <= 0");
            if (!b.push(pole_state(c.samples.back(), fp, sp))) break;
        } else {
            c.samples.back() = snap_turning(c.samples.back());
        }
        const std::size_t idx = b.last();
        if (!b.count(kind)) break;

        if (arc_full && opts.reflect) {
            std::vector<ProfileState> arc(c.samples.begin() + static_cast<std::ptrdiff_t>(arc_begin),
                                          c.samples.end());
            continue_by_reflection(std::move(arc), begin_kind, kind, b);
            break;
        }
        if (kind == EventKind::TurningPoint) {
            cur = c.samples.back();
            arc_begin = idx;
            arc_full = true;
            begin_kind = kind;
            continue;
        }
        // The raw ODE cannot cross the pole, so mirror the part traversed since
        // the last event and resume the raw integration from its far end.
        const ProfileState e = c.samples.back();
        bool in_span = b.push(reflect_pole(e, e));
        if (in_span) b.mark(EventKind::Reflection);
        for (std::size_t i = idx; in_span && i-- > arc_begin;) in_span = b.push(reflect_pole(c.samples[i], e));
        if (!in_span) break;
        cur = c.samples.back();
        arc_begin = b.last();
        if (arc_full && !b.count(begin_kind)) break;
    }

    double drift = 0.0;
    for (const auto& p : c.samples)
        drift = std::max(drift, std::abs(energy(p.x, p.alpha, fp.H, sp) - fp.E) / (1.0 + std::abs(fp.E)));
    c.max_energy_drift = drift;
    if (drift > opts.energy_tol)
        throw NumericalError(fmt::format("energy drift {:.3e} exceeds tolerance {:.1e}", drift, opts.energy_tol));
    return c;
}

} // namespace cmcsurf
