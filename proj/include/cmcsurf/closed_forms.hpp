#pragma once

#include <array>

#include "cmcsurf/space.hpp"

namespace cmcsurf {

// Closed-form data of the rotational CMC sphere with mean curvature H.
struct SphereProfile {
    double H = 0.0;
    SpaceParams sp;
    double a = 0.0;   // half domain of the latitude parameter
    double y0 = 0.0;  // y at the pole (x = 0)

    // The pole angle must not wrap past half a turn.
    bool embedded() const;
};

// arctan(sqrt(kappa)/2H) on Berger (pi/2 when H = 0), arctanh(sqrt(-kappa)/2H)
// on Sl2R. Throws DomainError when no sphere exists.
double sphere_half_domain(double H, const SpaceParams& sp);

SphereProfile sphere_profile(double H, const SpaceParams& sp);

// lambda(x) on Berger, rho(x) on Sl2R.
double aux_branch(double x, double H, const SpaceParams& sp);

// Berger: x in [0, a], y(a) = 0. Sl2R: x in [-a, 0], y(-a) = 0.
double sphere_profile_y(double x, double H, const SpaceParams& sp);

// The integrand y'(x) the profile was obtained from.
double sphere_profile_dy(double x, double H, const SpaceParams& sp);
double sphere_profile_d2y(double x, double H, const SpaceParams& sp);

// Two-sheet parametrisation on ]-a, a[ x ]-pi, pi[.
AmbientPoint sphere_immersion(double x, double t, double H, const SpaceParams& sp);

struct ImmersionJet {
    AmbientPoint p;
    std::array<AmbientVector, 2> d1;  // d/dx, d/dt
    std::array<AmbientVector, 3> d2;  // xx, xt, tt
};

// Value with exact first and second partials. The latitude parametrisation
// has y' ~ 1/sqrt at x = 0, so finite differences are useless near there.
ImmersionJet sphere_immersion_jet(double x, double t, double H, const SpaceParams& sp);

// e^{2u(x)} for the conformal parametrisation of the sphere.
double conformal_factor(double x, double H, const SpaceParams& sp);

double sphere_area(double H, const SpaceParams& sp);

// Berger only: the volume of the region Omega_H bounded by the sphere.
double sphere_volume(double H, const SpaceParams& sp);

// 32 pi^2 |tau| / kappa^2.
double berger_total_volume(const SpaceParams& sp);

struct TorusMeasures {
    double area = 0.0;
    double volume = 0.0;  // the smaller of the two enclosed volumes
};

TorusMeasures torus_area_volume(double H, const SpaceParams& sp);

enum class RadiusSign { Plus, Minus };

// sqrt(1/2 +- H / sqrt(4H^2 + kappa)).
double clifford_radius(double H, RadiusSign sign, const SpaceParams& sp);

// sum_n d^n w^{2n+1}/(2n+1): arctan(sqrt(-d) w)/sqrt(-d) for d < 0,
// arctanh(sqrt(d) w)/sqrt(d) for d > 0, with a series near d = 0.
double arc_series(double d, double w);

} // namespace cmcsurf
