#include "cmcsurf/investigations.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numbers>

#include "cmcsurf/classify.hpp"
#include "cmcsurf/closed_forms.hpp"
#include "cmcsurf/errors.hpp"
#include "cmcsurf/numerics.hpp"

namespace cmcsurf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double lawson_top(const SpaceParams& sp) { return std::sqrt(sp.kappa) / 4.0; }

void require_berger(const SpaceParams& sp, const char* what) {
    sp.validate();
    if (!sp.is_berger()) throw DomainError(fmt::format("{} is defined for Berger spheres only", what));
}

double minimal_period(double E, const SpaceParams& sp) { return period_T({0.0, E}, sp); }

} // namespace

std::optional<double> LawsonScan::E_star() const {
    if (roots.empty()) return std::nullopt;
    return roots.front().E;
}

std::vector<double> default_lawson_grid(const SpaceParams& sp, std::size_t n) {
    require_berger(sp, "the Lawson scan");
    const double top = lawson_top(sp);
    return linspace(1e-3 * top, (1.0 - 1e-4) * top, n);
}

double minimal_period_limit(const SpaceParams& sp) {
    require_berger(sp, "the minimal period limit");
    return kPi * std::sqrt(1.0 + sp.kappa / (4.0 * sp.tau * sp.tau));
}

LawsonScan lawson_scan(const SpaceParams& sp, const std::vector<double>& E_grid) {
    require_berger(sp, "the Lawson scan");
    const double top = lawson_top(sp);
    LawsonScan out;
    out.sp = sp;
    std::vector<double> g;
    for (double E : E_grid) {
        if (!(E > 0.0 && E < top))
            throw DomainError(fmt::format("Lawson energies must lie in (0, {}), got {}", top, E));
        out.samples.push_back({E, minimal_period(E, sp)});
        g.push_back(out.samples.back().T - 2.0 * kPi);
    }
    for (std::size_t i : sign_changes(g)) {
        const double lo = out.samples[i].E, hi = out.samples[i + 1].E;
        auto f = [&](double E) { return minimal_period(E, sp) - 2.0 * kPi; };
        const RootResult r = find_root(f, make_bracket(f, lo, hi), 1e-15);
        out.roots.push_back({r.root, r.f_root + 2.0 * kPi, std::abs(r.f_root), lo, hi});
    }
    return out;
}

LawsonScan lawson_scan(const SpaceParams& sp, std::size_t n) { return lawson_scan(sp, default_lawson_grid(sp, n)); }

Tau0Estimate tau0_estimate(double kappa, double tau_lo, double tau_hi, double width, std::size_t grid) {
    if (!(kappa > 0.0)) throw DomainError("tau0 is defined for Berger spheres (kappa > 0)");
    if (!(tau_lo > 0.0 && tau_hi > tau_lo)) throw DomainError("need 0 < tau_lo < tau_hi");
    if (!(width > 0.0)) throw DomainError("width must be positive");
    auto found = [&](double tau) { return !lawson_scan(berger(kappa, tau), grid).roots.empty(); };
    const bool at_lo = found(tau_lo), at_hi = found(tau_hi);
    if (at_lo == at_hi)
        throw DomainError(fmt::format("Lawson predicate is {} at both tau = {} and tau = {}; widen the bracket",
                                      at_lo ? "true" : "false", tau_lo, tau_hi));
    Tau0Estimate est;
    double lo = tau_lo, hi = tau_hi;
    // Orient so the predicate holds at lo.
    const bool flipped = !at_lo;
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        const bool f = found(mid);
        if (f != flipped) lo = mid; else hi = mid;
        ++est.bisections;
    }
    est.lo = lo;
    est.hi = hi;
    est.tau0 = 0.5 * (lo + hi);
    return est;
}

double embeddedness_margin(double H, const SpaceParams& sp) {
    const SphereProfile p = sphere_profile(H, sp);
    return kPi - std::abs(p.y0);
}

EmbeddednessRegion embeddedness_region(SpaceKind kind, double kappa, const std::vector<double>& taus,
                                       const std::vector<double>& Hs) {
    EmbeddednessRegion r;
    r.kind = kind;
    r.kappa = kappa;
    r.taus = taus;
    r.Hs = Hs;
    r.margin.assign(taus.size() * Hs.size(), kNaN);
    auto has_sphere = [&](double H) { return H >= 0.0 && 4.0 * H * H + kappa > 0.0; };
    for (std::size_t i = 0; i < taus.size(); ++i) {
        SpaceParams sp;
        try {
            sp = make_space(kind, kappa, taus[i]);
        } catch (const DomainError&) {
            continue;  // the round metric or tau = 0: leave the row empty
        }
        for (std::size_t j = 0; j < Hs.size(); ++j)
            if (has_sphere(Hs[j])) r.margin[i * Hs.size() + j] = embeddedness_margin(Hs[j], sp);
    }
    auto refine = [&](double tau0, double tau1, double H0, double H1) {
        // Root along the segment from (tau0, H0) to (tau1, H1).
        auto f = [&](double s) {
            const double tau = tau0 + s * (tau1 - tau0), H = H0 + s * (H1 - H0);
            return embeddedness_margin(H, make_space(kind, kappa, tau));
        };
        const RootResult rr = find_root(f, make_bracket(f, 0.0, 1.0), 1e-15);
        const double s = rr.root;
        r.boundary.push_back({tau0 + s * (tau1 - tau0), H0 + s * (H1 - H0), std::abs(rr.f_root)});
    };
    auto crosses = [](double a, double b) { return std::isfinite(a) && std::isfinite(b) && (a > 0.0) != (b > 0.0); };
    for (std::size_t i = 0; i < taus.size(); ++i)
        for (std::size_t j = 0; j + 1 < Hs.size(); ++j)
            if (crosses(r.at(i, j), r.at(i, j + 1))) refine(taus[i], taus[i], Hs[j], Hs[j + 1]);
    for (std::size_t j = 0; j < Hs.size(); ++j)
        for (std::size_t i = 0; i + 1 < taus.size(); ++i)
            if (crosses(r.at(i, j), r.at(i + 1, j))) refine(taus[i], taus[i + 1], Hs[j], Hs[j]);
    return r;
}

std::vector<double> default_isoperimetric_grid(const SpaceParams& sp, std::size_t n) {
    require_berger(sp, "the isoperimetric profile");
    if (n < 2) throw DomainError("grid needs at least two points");
    // H = (sqrt(kappa)/2) u/(1-u) packs points near H = 0 and reaches H ~ 200 sqrt(kappa).
    std::vector<double> out;
    out.reserve(n);
    for (double u : linspace(0.0, 0.995, n)) out.push_back(0.5 * std::sqrt(sp.kappa) * u / (1.0 - u));
    return out;
}

std::vector<IsoperimetricPoint> isoperimetric_profile(const SpaceParams& sp, const std::vector<double>& H_grid) {
    require_berger(sp, "the isoperimetric profile");
    const double total = berger_total_volume(sp);
    std::vector<IsoperimetricPoint> out;
    for (double H : H_grid) {
        if (!(H >= 0.0)) throw DomainError("isoperimetric grids use H >= 0; the mirrored branch is added");
    }
    for (Family fam : {Family::Sphere, Family::CliffordTorus}) {
        for (int mirror = 0; mirror < 2; ++mirror) {
            for (double H : H_grid) {
                if (mirror && H == 0.0) continue;
                double area, vol;
                if (fam == Family::Sphere) {
                    area = sphere_area(H, sp);
                    vol = sphere_volume(H, sp);
                } else {
                    const TorusMeasures m = torus_area_volume(H, sp);
                    area = m.area;
                    vol = m.volume;
                }
                out.push_back({mirror ? -H : H, area, mirror ? total - vol : vol, fam});
            }
        }
    }
    return out;
}

std::vector<MatchedVolume> matched_volumes(const SpaceParams& sp, const std::vector<double>& H_grid) {
    require_berger(sp, "matched volumes");
    const double total = berger_total_volume(sp);
    std::vector<double> hs = H_grid;
    std::sort(hs.begin(), hs.end());
    std::vector<double> vs;
    for (double H : hs) vs.push_back(sphere_volume(H, sp));

    // Smallest sphere area among the spheres (either branch) of volume V.
    auto spheres_at = [&](double V, MatchedVolume& m) {
        m.sphere_area = std::numeric_limits<double>::infinity();
        m.sphere_count = 0;
        for (double target : {V, total - V}) {
            std::vector<double> g;
            for (double v : vs) g.push_back(v - target);
            for (std::size_t i = 0; i + 1 < g.size(); ++i) {
                const bool hit = (g[i] <= 0.0) != (g[i + 1] <= 0.0);
                if (!hit) continue;
                auto f = [&](double H) { return sphere_volume(H, sp) - target; };
                const double H = find_root(f, make_bracket(f, hs[i], hs[i + 1]), 1e-14).root;
                m.sphere_area = std::min(m.sphere_area, sphere_area(H, sp));
                ++m.sphere_count;
            }
            if (std::abs(g.front()) <= 1e-13 * total) {
                m.sphere_area = std::min(m.sphere_area, sphere_area(hs.front(), sp));
                ++m.sphere_count;
            }
            if (std::abs(V - 0.5 * total) <= 1e-13 * total) break;  // both targets coincide
        }
    };

    std::vector<MatchedVolume> out;
    for (int mirror = 0; mirror < 2; ++mirror) {
        for (double H : hs) {
            if (mirror && H == 0.0) continue;
            const TorusMeasures t = torus_area_volume(H, sp);
            MatchedVolume m;
            m.volume = mirror ? total - t.volume : t.volume;
            m.torus_area = t.area;
            spheres_at(m.volume, m);
            out.push_back(m);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.volume < b.volume; });
    return out;
}

std::optional<VolumeInterval> torus_advantage_interval(const SpaceParams& sp, const std::vector<double>& H_grid) {
    const std::vector<MatchedVolume> m = matched_volumes(sp, H_grid);
    const double half = 0.5 * berger_total_volume(sp);
    std::size_t c = 0;
    for (std::size_t i = 1; i < m.size(); ++i)
        if (std::abs(m[i].volume - half) < std::abs(m[c].volume - half)) c = i;
    auto torus_wins = [&](std::size_t i) { return m[i].sphere_count > 0 && m[i].torus_area < m[i].sphere_area; };
    if (!torus_wins(c)) return std::nullopt;
    std::size_t lo = c, hi = c;
    while (lo > 0 && torus_wins(lo - 1)) --lo;
    while (hi + 1 < m.size() && torus_wins(hi + 1)) ++hi;
    return VolumeInterval{m[lo].volume, m[hi].volume};
}

Crossing isoperimetric_crossing(double kappa, double tau_lo, double tau_hi, double width) {
    if (!(kappa > 0.0)) throw DomainError("the isoperimetric crossing is defined for Berger spheres");
    auto f = [&](double tau) {
        const SpaceParams sp = berger(kappa, tau);
        return sphere_area(0.0, sp) - torus_area_volume(0.0, sp).area;
    };
    const RootResult r = find_root(f, make_bracket(f, tau_lo, tau_hi), std::min(width, 1e-13));
    const SpaceParams sp = berger(kappa, r.root);
    return {r.root, sphere_area(0.0, sp), torus_area_volume(0.0, sp).area};
}

} // namespace cmcsurf
