#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cmcsurf/classify.hpp"
#include "cmcsurf/errors.hpp"
#include "cmcsurf/profile.hpp"

using namespace cmcsurf;
constexpr double kPi = std::numbers::pi;

TEST_CASE("energy and alpha_from_energy are inverse") {
    for (const SpaceParams& sp : {berger(4.0, 0.4), sl2r(-4.0, 1.0)}) {
        const double H = 1.3;
        for (double E : {-0.4, -0.1, 0.05}) {
            const FlowParams fp{H, E};
            for (double x : {0.3, 0.6, 0.9}) {
                const double xx = sp.is_berger() ? x : -x;
                if (band_poly(std::pow(sp.is_berger() ? std::sin(xx) : std::sinh(xx), 2), fp, sp) < 0.0) continue;
                for (Branch br : {Branch::Plus, Branch::Minus}) {
                    SinCos sc;
                    try {
                        sc = alpha_from_energy(xx, br, fp, sp);
                    } catch (const DomainError&) {
                        continue;
                    }
                    const double alpha = std::atan2(sc.sin_alpha, sc.cos_alpha);
                    CHECK(energy(xx, alpha, H, sp) == doctest::Approx(E).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("tilt is bounded and vanishes for vertical tangents") {
    const SpaceParams sp = berger(4.0, 0.4);
    CHECK(std::abs(tilt_C(0.7, kPi / 2.0, sp)) < 1e-15);
    CHECK(tilt_C(0.0, 0.0, sp) == doctest::Approx(1.0));
    for (double x = 0.05; x < 1.5; x += 0.1)
        for (double a = -3.0; a < 3.0; a += 0.3) CHECK(std::abs(tilt_C(x, a, sp)) <= 1.0);
}

TEST_CASE("right-hand side flags the axis") {
    const SpaceParams sp = berger(4.0, 0.4);
    CHECK(ode_rhs({0.0, 0.0, 0.0, 0.3}, 0.5, sp).singular);
    const ProfileRhs r = ode_rhs({0.0, 0.5, 0.0, 0.3}, 0.5, sp);
    CHECK_FALSE(r.singular);
    CHECK(r.dx == doctest::Approx(std::cos(0.3)));
}

TEST_CASE("reduced alpha' matches the derivative along the energy shell") {
    const SpaceParams sp = berger(4.0, 0.4);
    const FlowParams fp{0.3, 0.2};
    const TurningBand band = turning_points(fp, sp);
    for (double w : {0.2, 0.5, 0.8}) {
        const double x = band.x1 + w * (band.x2 - band.x1);
        CHECK(alpha_prime_reduced(x, fp, sp) ==
              doctest::Approx(alpha_prime_from_sin_derivative(x, fp, sp)).epsilon(1e-8));
        const SinCos sc = alpha_from_energy(x, Branch::Plus, fp, sp);
        const ProfileRhs r = ode_rhs({0.0, x, 0.0, std::atan2(sc.sin_alpha, sc.cos_alpha)}, fp.H, sp);
        CHECK(r.dalpha == doctest::Approx(alpha_prime_reduced(x, fp, sp)).epsilon(1e-8));
    }
}

TEST_CASE("unduloid profile oscillates between the turning points") {
    const SpaceParams sp = berger(4.0, 0.4);
    const FlowParams fp{0.3, 0.3};
    ProfileSetup st = default_setup(fp, sp);
    st.opts.max_events = 6;
    const ProfileCurve c = integrate_profile(st.start, fp, sp, 1e3, st.opts);
    const TurningBand band = turning_points(fp, sp);
    const auto tp = c.event_indices(EventKind::TurningPoint);
    REQUIRE(tp.size() == 6);
    for (std::size_t i : tp) {
        const double x = c.samples[i].x;
        CHECK(std::min(std::abs(x - band.x1), std::abs(x - band.x2)) < 1e-8);
    }
    for (const auto& p : c.samples) {
        CHECK(p.x >= band.x1 - 1e-9);
        CHECK(p.x <= band.x2 + 1e-9);
    }
    CHECK(c.max_energy_drift < 1e-9);
    // two turning points per period; y advances by T
    const double dy = c.samples[tp[4]].y - c.samples[tp[2]].y;
    CHECK(dy == doctest::Approx(period_T(fp, sp)).epsilon(1e-7));
}

TEST_CASE("profiles are deterministic") {
    const SpaceParams sp = berger(4.0, 0.4);
    const FlowParams fp{0.5, -0.2};
    const ProfileSetup st = default_setup(fp, sp);
    const ProfileCurve a = integrate_profile(st.start, fp, sp, 10.0, st.opts);
    const ProfileCurve b = integrate_profile(st.start, fp, sp, 10.0, st.opts);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].y == b.samples[i].y);
        CHECK(a.samples[i].alpha == b.samples[i].alpha);
    }
}

TEST_CASE("pole chain profiles touch the pole") {
    const SpaceParams sp = berger(4.0, 0.4);
    const FlowParams fp{0.5, -0.5};
    const ProfileSetup st = default_setup(fp, sp);
    const ProfileCurve c = integrate_profile(st.start, fp, sp, 10.0, st.opts);
    const auto poles = c.event_indices(EventKind::PoleTouch);
    REQUIRE(poles.size() >= 2);
    for (std::size_t i : poles) CHECK(c.samples[i].x == doctest::Approx(kPi / 2.0).epsilon(1e-9));
    CHECK(c.max_energy_drift < 1e-8);
}

TEST_CASE("sphere profiles reach the axis") {
    const SpaceParams sp = berger(4.0, 0.4);
    const FlowParams fp{0.7, 0.0};
    const ProfileSetup st = default_setup(fp, sp);
    const ProfileCurve c = integrate_profile(st.start, fp, sp, 20.0, st.opts);
    CHECK_FALSE(c.event_indices(EventKind::AxisTouch).empty());
}

TEST_CASE("integration rejects bad input") {
    const SpaceParams sp = berger(4.0, 0.4);
    IntegrationOptions o;
    o.rtol = -1.0;
    CHECK_THROWS_AS(integrate_profile({0.0, 0.5, 0.0, 0.0}, {0.3, 0.3}, sp, 1.0, o), DomainError);
}
