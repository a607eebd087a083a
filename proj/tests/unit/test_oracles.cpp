#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cmcsurf/closed_forms.hpp"
#include "cmcsurf/errors.hpp"
#include "cmcsurf/oracles.hpp"
#include "cmcsurf/profile.hpp"

using namespace cmcsurf;
constexpr double kPi = std::numbers::pi;

TEST_CASE("great sphere and minimal Clifford torus are minimal") {
    for (const SpaceParams& sp : {berger(4.0, 0.4), berger(1.0, 0.9)}) {
        const SurfaceSampler g = great_sphere_sampler(sp);
        const SurfaceSampler t = clifford_torus_sampler(std::sqrt(0.5), sp);
        for (double u : {0.4, 1.1, 2.5})
            for (double v : {-2.0, 0.3, 1.9}) {
                CHECK(std::abs(numeric_mean_curvature(g, u, v, sp)) < 1e-7);
                CHECK(std::abs(numeric_mean_curvature(t, u, v, sp)) < 1e-7);
            }
    }
}

TEST_CASE("Clifford tori off the middle radius have the expected mean curvature") {
    const SpaceParams sp = berger(4.0, 0.4);
    for (double H : {0.3, 1.2}) {
        const SurfaceSampler t = clifford_torus_sampler(clifford_radius(H, RadiusSign::Minus, sp), sp);
        CHECK(std::abs(numeric_mean_curvature(t, 0.7, 0.2, sp)) == doctest::Approx(H).epsilon(1e-7));
    }
}

TEST_CASE("sphere immersion has mean curvature H in both spaces") {
    for (const auto& [sp, H] : {std::pair{berger(4.0, 0.4), 0.7}, std::pair{berger(2.0, 1.2), 0.3},
                                std::pair{sl2r(-4.0, 0.5), 1.4}}) {
        for (bool jet : {true, false}) {
            const SurfaceSampler s = sphere_sampler(H, sp, jet);
            const double a = s.u1;
            for (double w : {-0.8, -0.4, 0.3, 0.7}) CHECK(numeric_mean_curvature(s, w * a, 0.5, sp) == doctest::Approx(H).epsilon(1e-6));
        }
    }
}

TEST_CASE("finite differences converge at second order without Richardson") {
    const SpaceParams sp = berger(4.0, 0.4);
    const SurfaceSampler s = sphere_sampler(0.7, sp, false);
    const double u = -0.5 * s.u1, H = 0.7;
    FiniteDifference a{2e-3, false}, b{1e-3, false};
    const double ea = std::abs(numeric_mean_curvature(s, u, 0.4, sp, a) - H);
    const double eb = std::abs(numeric_mean_curvature(s, u, 0.4, sp, b) - H);
    CHECK(ea / eb == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("orientation and reparametrisation") {
    const SpaceParams sp = berger(4.0, 0.4);
    const SurfaceSampler s = sphere_sampler(0.7, sp);
    const double u = -0.4 * s.u1, v = 0.3;
    CHECK(numeric_mean_curvature(swapped(s), v, u, sp) == doctest::Approx(-0.7).epsilon(1e-9));
    CHECK(numeric_mean_curvature(rescaled(s, 2.5), 2.5 * u, v, sp) == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(numeric_area(rescaled(s, 0.5), sp) == doctest::Approx(numeric_area(s, sp)).epsilon(1e-9));
    CHECK_THROWS_AS(rescaled(s, 0.0), DomainError);
}

TEST_CASE("normal tilt of the great sphere matches the profile tilt") {
    const SpaceParams sp = berger(4.0, 0.4);
    const SurfaceSampler g = great_sphere_sampler(sp);
    for (double u : {0.3, 0.9, 1.3}) {
        // (cos u, sin u e^{iv}) is the profile x = u, alpha = 0
        CHECK(numeric_normal_tilt(g, u, 0.2, sp) == doctest::Approx(tilt_C(u, 0.0, sp)).epsilon(1e-8));
    }
}

TEST_CASE("degenerate points are reported") {
    const SpaceParams sp = berger(4.0, 0.4);
    CHECK_THROWS_AS(numeric_mean_curvature(great_sphere_sampler(sp), 0.0, 0.0, sp), NumericalError);
    SurfaceSampler empty;
    CHECK_THROWS_AS(sample_jet(empty, 0.0, 0.0), DomainError);
}

TEST_CASE("numeric area of the great sphere") {
    // The great sphere is totally geodesic for a round metric; in Berger spheres
    // its area follows from the sphere formula at H = 0.
    const SpaceParams sp = berger(4.0, 0.4);
    CHECK(numeric_area(great_sphere_sampler(sp), sp) == doctest::Approx(sphere_area(0.0, sp)).epsilon(1e-8));
}
