#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cmcsurf/classify.hpp"
#include "cmcsurf/errors.hpp"
#include "cmcsurf/mesh.hpp"

using namespace cmcsurf;

TEST_CASE("stereographic chart") {
    const SpaceParams sp = berger(4.0, 0.4);
    const auto p = chart_point({1.0, 0.0}, sp);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 0.0);
    CHECK(p[2] == 0.0);
    CHECK_THROWS_AS(chart_point({-1.0, 0.0}, sp), GeometryError);
    CHECK_NOTHROW(chart_point({std::cosh(0.5), std::sinh(0.5)}, sl2r(-4.0, 0.5)));
}

TEST_CASE("topology of the meshes") {
    const SpaceParams sp = berger(4.0, 0.4);
    const Mesh t = torus_mesh(std::sqrt(0.5), sp, 24, 24);
    CHECK(euler_characteristic(t) == 0);
    CHECK_FALSE(self_intersections(t).self_intersecting);
    const Mesh s = sphere_mesh(0.7, sp, 32, 24);
    CHECK(euler_characteristic(s) == 2);
    CHECK_FALSE(self_intersections(s).self_intersecting);
    CHECK(euler_characteristic(sphere_mesh(1.4, sl2r(-4.0, 0.5), 32, 24)) == 2);
    CHECK_THROWS_AS(great_sphere_mesh(sp), GeometryError);
    CHECK_THROWS_AS(torus_mesh(1.2, sp), DomainError);
    CHECK_THROWS_AS(sphere_mesh(0.7, sp, 2, 24), DomainError);
}

TEST_CASE("non-embedded sphere is flagged") {
    const Mesh m = sphere_mesh(0.5, berger(4.0, 0.1), 96, 48);
    CHECK(euler_characteristic(m) == 2);
    CHECK(self_intersections(m).self_intersecting);
}

TEST_CASE("closed Lawson torus mesh from its profile") {
    const SpaceParams sp = berger(4.0, 0.4);
    const FlowParams fp{0.0, 0.2184917890472267};
    ProfileSetup st = default_setup(fp, sp);
    st.opts.max_events = 2;
    ProfileCurve c = integrate_profile(st.start, fp, sp, 1e3, st.opts);
    const auto tp = c.event_indices(EventKind::TurningPoint);
    REQUIRE(tp.size() == 2);
    c.samples.resize(tp[1] + 1);
    CHECK(c.samples.back().x == doctest::Approx(c.samples.front().x).epsilon(1e-8));
    const Mesh m = profile_mesh(c, true, 128, 32);
    CHECK(euler_characteristic(m) == 0);
    CHECK_FALSE(self_intersections(m).self_intersecting);
}

TEST_CASE("OBJ output carries the quadric coordinates") {
    const Mesh m = torus_mesh(0.6, berger(4.0, 0.4), 4, 4);
    std::ostringstream os;
    Metadata meta;
    meta.add("class", std::string("CliffordTorus"));
    write_obj(os, m, meta);
    const std::string s = os.str();
    CHECK(s.rfind("# class: CliffordTorus\n", 0) == 0);
    std::istringstream is(s);
    std::string line;
    int v = 0, f = 0, r4 = 0;
    while (std::getline(is, line)) {
        v += line.rfind("v ", 0) == 0;
        f += line.rfind("f ", 0) == 0;
        r4 += line.rfind("# r4 ", 0) == 0;
    }
    CHECK(v == 16);
    CHECK(r4 == 16);
    CHECK(f == 32);
}
