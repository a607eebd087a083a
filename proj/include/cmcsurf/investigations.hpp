#pragma once

#include <optional>
#include <vector>

#include "cmcsurf/space.hpp"

namespace cmcsurf {

// --- Lawson scan: minimal unduloids with T(0, E) = 2 pi -------------------

struct PeriodSample {
    double E = 0.0;
    double T = 0.0;
};

struct LawsonRoot {
    double E = 0.0;
    double T = 0.0;
    double residual = 0.0;  // |T - 2 pi|
    double lo = 0.0, hi = 0.0;
};

struct LawsonScan {
    SpaceParams sp;
    std::vector<PeriodSample> samples;
    std::vector<LawsonRoot> roots;  // increasing E

    std::optional<double> E_star() const;
};

// Energies in (0, sqrt(kappa)/4), stopping short of both ends (axis and torus).
std::vector<double> default_lawson_grid(const SpaceParams& sp, std::size_t n = 400);

LawsonScan lawson_scan(const SpaceParams& sp, const std::vector<double>& E_grid);
LawsonScan lawson_scan(const SpaceParams& sp, std::size_t n = 400);

// pi sqrt(1 + kappa / 4tau^2): T(0, E) as E reaches sqrt(kappa)/4, where the
// unduloids collapse onto the minimal Clifford torus.
double minimal_period_limit(const SpaceParams& sp);

struct Tau0Estimate {
    double tau0 = 0.0;
    double lo = 0.0;  // predicate true here
    double hi = 0.0;  // predicate false here
    int bisections = 0;
};

// Bisection on tau of "the Lawson scan finds E*". Throws DomainError when the
// predicate has the same value at both ends.
Tau0Estimate tau0_estimate(double kappa, double tau_lo = 0.4, double tau_hi = 0.9, double width = 1e-3,
                           std::size_t grid = 400);

// --- Embeddedness of CMC spheres -------------------------------------------

struct BoundaryPoint {
    double tau = 0.0;
    double H = 0.0;
    double residual = 0.0;  // |y0 + pi|
};

struct EmbeddednessRegion {
    SpaceKind kind = SpaceKind::BergerSphere;
    double kappa = 0.0;
    std::vector<double> taus;
    std::vector<double> Hs;
    // y0 + pi per (tau, H), row-major in tau; NaN where no sphere exists.
    std::vector<double> margin;
    std::vector<BoundaryPoint> boundary;

    double at(std::size_t i_tau, std::size_t i_H) const { return margin[i_tau * Hs.size() + i_H]; }
    bool embedded(std::size_t i_tau, std::size_t i_H) const { return at(i_tau, i_H) > 0.0; }
};

EmbeddednessRegion embeddedness_region(SpaceKind kind, double kappa, const std::vector<double>& taus,
                                       const std::vector<double>& Hs);

// y0(H) + pi.
double embeddedness_margin(double H, const SpaceParams& sp);

// --- Isoperimetric comparison (Berger) --------------------------------------

enum class Family { Sphere, CliffordTorus };

struct IsoperimetricPoint {
    double H = 0.0;  // negative on the mirrored branch
    double area = 0.0;
    double volume = 0.0;
    Family family = Family::Sphere;
};

// Both families, the H >= 0 branch followed by the mirrored one (volume
// replaced by total - volume), each in increasing |H|.
std::vector<IsoperimetricPoint> isoperimetric_profile(const SpaceParams& sp, const std::vector<double>& H_grid);

// Default grid: dense near H = 0, out to where the volumes are tiny.
std::vector<double> default_isoperimetric_grid(const SpaceParams& sp, std::size_t n = 400);

struct MatchedVolume {
    double volume = 0.0;
    double torus_area = 0.0;
    double sphere_area = 0.0;  // smallest sphere area at this volume
    int sphere_count = 0;      // number of spheres enclosing this volume
};

// For each torus H in H_grid (both branches), the spheres with the same volume.
std::vector<MatchedVolume> matched_volumes(const SpaceParams& sp, const std::vector<double>& H_grid);

// Largest open volume interval around half the total where tori have smaller
// area than every sphere of that volume; nullopt if spheres win at half volume.
struct VolumeInterval {
    double lo = 0.0;
    double hi = 0.0;
};
std::optional<VolumeInterval> torus_advantage_interval(const SpaceParams& sp, const std::vector<double>& H_grid);

struct Crossing {
    double tau = 0.0;
    double area_sphere = 0.0;
    double area_torus = 0.0;
};

// tau where the minimal sphere and the minimal Clifford torus have equal area.
Crossing isoperimetric_crossing(double kappa, double tau_lo = 0.1, double tau_hi = 0.9, double width = 1e-4);

} // namespace cmcsurf
