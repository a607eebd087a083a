#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cmcsurf/space.hpp"

namespace cmcsurf {

// Point of the generating curve. Berger: gamma = (cos x e^{iy}, sin x);
// Sl2R: gamma = (cosh x e^{iy}, sinh x). alpha is never wrapped mod 2pi.
struct ProfileState {
    double s = 0.0;
    double x = 0.0;
    double y = 0.0;
    double alpha = 0.0;
};

struct FlowParams {
    double H = 0.0;
    double E = 0.0;
};

enum class EventKind { TurningPoint, AxisTouch, Reflection, PoleTouch };

std::string_view to_string(EventKind kind);

struct ProfileEvent {
    std::size_t index = 0;
    EventKind kind = EventKind::TurningPoint;
};

struct ProfileCurve {
    SpaceParams sp;
    FlowParams fp;
    std::vector<ProfileState> samples;
    std::vector<ProfileEvent> events;
    double max_energy_drift = 0.0;  // relative to 1 + |E|

    std::vector<std::size_t> event_indices(EventKind kind) const;
};

// Sign of cos(alpha) picked by alpha_from_energy.
enum class Branch { Plus, Minus };

struct SinCos {
    double sin_alpha = 0.0;
    double cos_alpha = 0.0;
};

struct ProfileRhs {
    double dx = 0.0;
    double dy = 0.0;
    double dalpha = 0.0;
    bool singular = false;  // dalpha undefined on the axis
};

// C = <N, xi> along the rotational surface.
double tilt_C(double x, double alpha, const SpaceParams& sp);

ProfileRhs ode_rhs(const ProfileState& state, double H, const SpaceParams& sp);

// Energy first integral in the form where cos(alpha) cancels, finite at
// turning points.
double energy(double x, double alpha, double H, const SpaceParams& sp);

// (sin alpha, cos alpha) on the energy level E at profile coordinate x.
// Throws DomainError when x lies outside the admissible band.
SinCos alpha_from_energy(double x, Branch branch, const FlowParams& fp, const SpaceParams& sp);

// The cubic q(t) of the Berger alpha' reduction.
double q_poly(double t, const FlowParams& fp, const SpaceParams& sp);

// alpha' on the energy level as a function of x alone. Throws SingularityError
// on the axis and DomainError outside the band.
double alpha_prime_reduced(double x, const FlowParams& fp, const SpaceParams& sp);

// Same quantity as the x-derivative of sin(alpha) from alpha_from_energy.
double alpha_prime_from_sin_derivative(double x, const FlowParams& fp, const SpaceParams& sp);

struct IntegrationOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double energy_tol = 1e-8;
    double max_sample_ds = 0.01;
    // Stop after this many turning-point or pole events; 0 means span only.
    int max_events = 0;
    // Off for stationary curves (Clifford tori) where cos(alpha) vanishes identically.
    bool turning_point_events = true;
    // Continue by reflection once a full event-to-event arc is known.
    bool reflect = true;
};

// Arc-length integration from start over the given span with turning-point,
// axis and pole events. Throws NumericalError on step collapse or when the
// energy drift exceeds opts.energy_tol.
ProfileCurve integrate_profile(const ProfileState& start, const FlowParams& fp, const SpaceParams& sp,
                               double span, const IntegrationOptions& opts = {});

} // namespace cmcsurf
