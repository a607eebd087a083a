#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "cmcsurf/numerics.hpp"
#include "cmcsurf/profile.hpp"
#include "cmcsurf/space.hpp"

namespace cmcsurf {

// Tolerance for the equality branches (E = 0, E = -H, interval endpoints).
inline constexpr double kEnergyEqualityTol = 1e-12;

struct EnergyRange {
    double lo = 0.0;  // -inf when unbounded
    double hi = 0.0;  // +inf when unbounded
    bool lo_closed = false;
    bool hi_closed = false;

    bool contains(double E, double tol = kEnergyEqualityTol) const;
};

EnergyRange admissible_energy_range(double H, const SpaceParams& sp);
bool admissible(const FlowParams& fp, const SpaceParams& sp);

// Berger: (1 + 4H^2/k) t^2 - (1 - 8HE/k) t + 4E^2/k, admissible where <= 0.
// Sl2R:   (1 + 4H^2/k) t^2 + (1 + 8HE/k) t + 4E^2/k, admissible where >= 0.
double band_poly(double t, const FlowParams& fp, const SpaceParams& sp);

enum class BandShape { TwoSided, OneSidedUnbounded, Degenerate };

std::string_view to_string(BandShape shape);

// t-values are sin^2 x (Berger) or sinh^2 x (Sl2R). Sl2R coordinates follow the
// x <= 0 convention: x1 = -arcsinh sqrt(t2) <= x2 = -arcsinh sqrt(t1).
struct TurningBand {
    BandShape shape = BandShape::TwoSided;
    double t1 = 0.0;
    double t2 = 0.0;  // == t1 when degenerate, +inf when one-sided
    double x1 = 0.0;
    double x2 = 0.0;  // Sl2R one-sided: the single turning coordinate is x1, x2 = -inf
};

TurningBand turning_points(const FlowParams& fp, const SpaceParams& sp);

// Signed period integral over one oscillation. For Berger and the Sl2R x <= 0
// convention it is the y-advance (up to the orientation of x) between two
// turning points of the same kind. Throws DomainError unless the band is two-sided.
double period_T(const FlowParams& fp, const SpaceParams& sp, const QuadratureSpec& q = {});

// Berger, E = -H: y at the first pole visit when starting at the turning point.
double pole_chain_y_s1(double H, const SpaceParams& sp, const QuadratureSpec& q = {});

struct RationalWitness {
    std::int64_t p = 0;
    std::int64_t q = 1;
    double residual = 0.0;
};

// Witness that x is close to a rational with denominator <= qmax.
std::optional<RationalWitness> rational_witness(double x, double tol, std::int64_t qmax);

// Numeric stand-in for "T is a rational multiple of pi".
std::optional<RationalWitness> compactness_test(double T, double tol = 1e-9, std::int64_t qmax = 10000);

struct ClassifyOptions {
    double tol = 1e-9;
    std::int64_t qmax = 10000;
    double eq_tol = kEnergyEqualityTol;
};

namespace surface {

struct Sphere {
    bool embedded = false;
    double y0 = 0.0;
};
struct CliffordTorus {
    double r = 0.0;
};
struct Unduloid {
    double T = 0.0;
    std::optional<RationalWitness> compact;
    bool embedded = false;
};
struct Nodoid {
    double T = 0.0;
    std::optional<RationalWitness> compact;
};
struct PoleChain {
    double y_s1 = 0.0;
    std::optional<RationalWitness> compact;
    bool embedded_torus = false;
};
struct GreatSphere {};
struct OpenSphereGraph {};
struct OpenUnduloidGraph {};
struct OpenNodoidGraph {};

} // namespace surface

using SurfaceClass =
    std::variant<surface::Sphere, surface::CliffordTorus, surface::Unduloid, surface::Nodoid, surface::PoleChain,
                 surface::GreatSphere, surface::OpenSphereGraph, surface::OpenUnduloidGraph,
                 surface::OpenNodoidGraph>;

std::string_view class_name(const SurfaceClass& c);

SurfaceClass classify(const FlowParams& fp, const SpaceParams& sp, const ClassifyOptions& opts = {});

// Initial condition used for each classification case (turning point, axis or the
// great-sphere start), and whether turning-point events make sense.
struct ProfileSetup {
    ProfileState start;
    IntegrationOptions opts;
};

ProfileSetup default_setup(const FlowParams& fp, const SpaceParams& sp);

} // namespace cmcsurf
