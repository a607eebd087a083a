#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cmcsurf/closed_forms.hpp"
#include "cmcsurf/space.hpp"

namespace cmcsurf {

// A parametrised surface (u, v) -> quadric point. With a jet the oracle uses
// exact derivatives, otherwise central differences.
struct SurfaceSampler {
    std::function<AmbientPoint(double, double)> map;
    std::function<ImmersionJet(double, double)> jet;  // optional
    double u0 = 0.0, u1 = 1.0;
    double v0 = 0.0, v1 = 1.0;
    // Interior u where the integrand has a kink or a 1/sqrt blow-up.
    std::vector<double> u_breaks;
    // v is an angle and the map is periodic over [v0, v1]; area then uses the trapezoid rule.
    bool v_periodic = false;

    bool has_jet() const { return static_cast<bool>(jet); }
};

struct FiniteDifference {
    double h = 1e-3;
    bool richardson = true;
};

// Value, first and second partials at (u, v).
ImmersionJet sample_jet(const SurfaceSampler& surf, double u, double v, const FiniteDifference& fd = {});

struct SurfaceFrameData {
    std::array<std::array<double, 3>, 2> d;  // frame coefficients of Phi_u, Phi_v
    std::array<double, 3> normal;            // unit normal, frame coefficients
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    double h11 = 0.0, h12 = 0.0, h22 = 0.0;
};

// First and second fundamental forms from the connection table. The normal is
// oriented like Phi_u x Phi_v in the orthonormal frame; the sampler's parameter
// order decides the sign of H and of the tilt.
SurfaceFrameData fundamental_forms(const SurfaceSampler& surf, double u, double v, const SpaceParams& sp,
                                   const FiniteDifference& fd = {});

double numeric_mean_curvature(const SurfaceSampler& surf, double u, double v, const SpaceParams& sp,
                              const FiniteDifference& fd = {});

// g(N, xi) with the unit vertical Killing field.
double numeric_normal_tilt(const SurfaceSampler& surf, double u, double v, const SpaceParams& sp,
                           const FiniteDifference& fd = {});

struct AreaOptions {
    double rel_tol = 1e-9;
    int periodic_points = 64;
};

double numeric_area(const SurfaceSampler& surf, const SpaceParams& sp, const AreaOptions& opts = {});

// (64 pi |tau| / kappa^2) int_0^a sin t cos t |y(t)| dt over the sphere profile.
double numeric_volume_coarea(double H, const SpaceParams& sp);

// Test surfaces.
SurfaceSampler great_sphere_sampler(const SpaceParams& sp);     // (cos u, sin u e^{iv}), u in (0, pi)
SurfaceSampler clifford_torus_sampler(double r, const SpaceParams& sp);  // (r e^{iu}, sqrt(1-r^2) e^{iv})
SurfaceSampler sphere_sampler(double H, const SpaceParams& sp, bool use_jet = true);
// Same surface with u scaled: (u, v) -> sphere(u / scale, v).
SurfaceSampler rescaled(const SurfaceSampler& surf, double scale);
// (u, v) -> (v, u); flips the orientation.
SurfaceSampler swapped(const SurfaceSampler& surf);

} // namespace cmcsurf
