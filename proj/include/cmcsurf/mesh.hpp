#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmcsurf/io.hpp"
#include "cmcsurf/profile.hpp"
#include "cmcsurf/space.hpp"

namespace cmcsurf {

struct Mesh {
    std::vector<AmbientPoint> r4;              // original quadric points
    std::vector<std::array<double, 3>> v;      // chart image
    std::vector<std::array<int, 3>> f;         // 0-based
};

// Berger: stereographic projection from (z, w) = (-1, 0). Sl2R: solid torus
// chart (angle of z, w/|z|) placed around a circle of radius 2. Throws
// GeometryError when the point is the projection pole.
std::array<double, 3> chart_point(const AmbientPoint& p, const SpaceParams& sp);

// Rings across ]-a, a[ plus the two axis points.
Mesh sphere_mesh(double H, const SpaceParams& sp, int rings = 64, int segments = 64);

// {Im z = 0}; contains the projection pole, so Berger charts refuse it.
Mesh great_sphere_mesh(const SpaceParams& sp, int rings = 64, int segments = 64);

Mesh torus_mesh(double r, const SpaceParams& sp, int rings = 64, int segments = 64);

// Surface of revolution of a profile. With closed the last sample is taken to
// coincide with the first and the tube is glued into a torus.
Mesh profile_mesh(const ProfileCurve& curve, bool closed, int rings = 256, int segments = 64);

int euler_characteristic(const Mesh& m);

struct IntersectionReport {
    bool self_intersecting = false;
    std::size_t pairs = 0;  // intersecting triangle pairs found
};

// Edge/triangle sweep over triangle pairs sharing no vertex.
IntersectionReport self_intersections(const Mesh& m, std::size_t max_pairs = 1);

void write_obj(std::ostream& os, const Mesh& m, const Metadata& meta);
void write_obj(const std::string& path, const Mesh& m, const Metadata& meta);

} // namespace cmcsurf
