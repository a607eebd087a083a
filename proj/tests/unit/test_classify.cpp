#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cmcsurf/classify.hpp"
#include "cmcsurf/errors.hpp"

using namespace cmcsurf;
constexpr double kPi = std::numbers::pi;

TEST_CASE("Berger energy interval is closed with torus endpoints") {
    const SpaceParams sp = berger(4.0, 0.4);
    const double H = 0.5, s = std::sqrt(4.0 * H * H + 4.0);
    const EnergyRange r = admissible_energy_range(H, sp);
    CHECK(r.lo == doctest::Approx((-2.0 * H - s) / 4.0));
    CHECK(r.hi == doctest::Approx((-2.0 * H + s) / 4.0));
    CHECK(r.lo_closed);
    CHECK(r.hi_closed);
    CHECK(r.contains(r.hi));
    CHECK_FALSE(r.contains(r.hi + 1e-6));
    CHECK(turning_points({H, r.hi}, sp).shape == BandShape::Degenerate);
}

TEST_CASE("Sl2R energy range depends on the sign of 4H^2 + kappa") {
    const SpaceParams sp = sl2r(-4.0, 1.0);
    const EnergyRange above = admissible_energy_range(1.5, sp);
    CHECK(std::isinf(above.lo));
    CHECK(above.hi == doctest::Approx((3.0 - std::sqrt(5.0)) / 4.0));
    CHECK_FALSE(above.contains(above.hi));
    const EnergyRange at = admissible_energy_range(1.0, sp);
    CHECK(at.hi == doctest::Approx(0.5));
    const EnergyRange below = admissible_energy_range(0.5, sp);
    CHECK(std::isinf(below.lo));
    CHECK(std::isinf(below.hi));
}

TEST_CASE("turning points are roots of the band polynomial") {
    for (const auto& [sp, fp] : {std::pair{berger(4.0, 0.4), FlowParams{0.3, 0.2}},
                                 std::pair{berger(2.0, 1.1), FlowParams{0.8, -0.3}},
                                 std::pair{sl2r(-4.0, 0.5), FlowParams{1.5, -0.4}}}) {
        const TurningBand b = turning_points(fp, sp);
        CHECK(std::abs(band_poly(b.t1, fp, sp)) < 1e-12);
        CHECK(std::abs(band_poly(b.t2, fp, sp)) < 1e-10);
        CHECK(b.t1 <= b.t2);
    }
}

TEST_CASE("period of the minimal unduloid") {
    const SpaceParams sp = berger(4.0, 0.4);
    // small E: close to pi
    CHECK(period_T({0.0, 1e-4}, sp) == doctest::Approx(kPi).epsilon(5e-3));
    // approaches the torus limit pi sqrt(1 + kappa / 4 tau^2)
    CHECK(period_T({0.0, 0.5 - 1e-7}, sp) == doctest::Approx(kPi * std::sqrt(1.0 + 4.0 / 0.64)).epsilon(1e-3));
    CHECK(period_T({0.0, 0.2184917890472267}, sp) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK_THROWS_AS(period_T({0.9, 0.1}, sl2r(-4.0, 1.0)), DomainError);  // one-sided band
}

TEST_CASE("pole chain half period matches its ODE") {
    const SpaceParams sp = berger(4.0, 0.4);
    CHECK(pole_chain_y_s1(0.5, sp) == doctest::Approx(-1.8395589902).epsilon(1e-9));
}

TEST_CASE("rational witnesses") {
    const auto w = rational_witness(2.0 / 3.0 + 1e-12, 1e-9, 100);
    REQUIRE(w.has_value());
    CHECK(w->p == 2);
    CHECK(w->q == 3);
    CHECK_FALSE(rational_witness(std::numbers::sqrt2, 1e-9, 100).has_value());
    const auto t = compactness_test(2.0 * kPi);
    REQUIRE(t.has_value());
    CHECK(t->p == 2);
    CHECK(t->q == 1);
}

TEST_CASE("classification witnesses") {
    const SpaceParams b = berger(4.0, 0.4);
    CHECK(class_name(classify({0.0, 0.0}, b)) == "GreatSphere");
    CHECK(class_name(classify({0.7, 0.0}, b)) == "Sphere");
    CHECK(class_name(classify({0.3, 0.2}, b)) == "Unduloid");
    CHECK(class_name(classify({0.5, -0.7}, b)) == "Unduloid");
    CHECK(class_name(classify({0.5, -0.2}, b)) == "Nodoid");
    CHECK(class_name(classify({0.5, -0.5}, b)) == "PoleChain");
    const SurfaceClass t = classify({0.0, 0.5}, b);
    REQUIRE(std::holds_alternative<surface::CliffordTorus>(t));
    CHECK(std::get<surface::CliffordTorus>(t).r == doctest::Approx(std::sqrt(0.5)));
    const SpaceParams s = sl2r(-4.0, 1.0);
    CHECK(class_name(classify({0.9, 0.0}, s)) == "OpenSphereGraph");
    CHECK(class_name(classify({0.9, 0.1}, s)) == "OpenUnduloidGraph");
    CHECK(class_name(classify({0.9, -0.3}, s)) == "OpenNodoidGraph");
    CHECK(class_name(classify({1.5, 0.0}, s)) == "Sphere");
    CHECK_THROWS_AS(classify({0.5, 5.0}, b), DomainError);
    CHECK_THROWS_AS(classify({-0.5, 0.0}, b), DomainError);
}

TEST_CASE("Lawson torus is compact and embedded") {
    const SurfaceClass c = classify({0.0, 0.2184917890472267}, berger(4.0, 0.4));
    REQUIRE(std::holds_alternative<surface::Unduloid>(c));
    const auto& u = std::get<surface::Unduloid>(c);
    REQUIRE(u.compact.has_value());
    CHECK(u.embedded);
}

TEST_CASE("embeddedness of spheres follows y0") {
    const auto thick = std::get<surface::Sphere>(classify({0.7, 0.0}, berger(4.0, 0.4)));
    CHECK(thick.embedded);
    CHECK(thick.y0 > -kPi);
    const auto thin = std::get<surface::Sphere>(classify({0.5, 0.0}, berger(4.0, 0.1)));
    CHECK_FALSE(thin.embedded);
    CHECK(thin.y0 < -kPi);
}
