#include "cmcsurf/figures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>

#include "cmcsurf/classify.hpp"
#include "cmcsurf/closed_forms.hpp"
#include "cmcsurf/errors.hpp"
#include "cmcsurf/investigations.hpp"
#include "cmcsurf/io.hpp"
#include "cmcsurf/numerics.hpp"

namespace cmcsurf {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Writer {
    fs::path dir;
    ordered_json files = ordered_json::array();

    void put(const std::string& name, const CsvTable& t, const std::string& figure, const std::string& what) {
        write_csv((dir / name).string(), t);
        files.push_back({{"file", name}, {"figure", figure}, {"description", what}, {"rows", t.rows.size()}});
    }
};

void period_panel(Writer& w, const FigureOptions& o) {
    CsvTable t;
    t.meta = base_metadata();
    t.meta.add("space", std::string("berger")).add("kappa", 4.0).add("H", 0.0);
    t.columns = {"tau", "E", "T"};
    for (double tau : kPeriodFigureTaus) {
        const SpaceParams sp = berger(4.0, tau);
        const LawsonScan scan = lawson_scan(sp, o.grid);
        for (const auto& s : scan.samples) t.add_row({tau, s.E, s.T});
        t.meta.add(fmt::format("lawson_roots_tau_{}", format_number(tau)), static_cast<double>(scan.roots.size()));
    }
    w.put("period.csv", t, "period T(0,E) of minimal unduloids, three values of tau",
          "T(0,E) for 0 < E < 1/2 at kappa = 4; the line T = 2 pi marks embedded minimal tori");
}

void region_panel(Writer& w, const FigureOptions& o, SpaceKind kind, double kappa, double tau_lo, double tau_hi,
                  double H_lo, double H_hi, const std::string& stem, const std::string& figure) {
    const auto taus = linspace(tau_lo, tau_hi, o.grid);
    const auto Hs = linspace(H_lo, H_hi, o.grid);
    const EmbeddednessRegion r = embeddedness_region(kind, kappa, taus, Hs);
    CsvTable t;
    t.meta = base_metadata();
    t.meta.add("space", std::string(to_string(kind))).add("kappa", kappa);
    t.meta.add("margin", std::string("pi - |y0|; nan where no sphere exists"));
    t.columns = {"tau", "H", "margin", "embedded"};
    for (std::size_t i = 0; i < taus.size(); ++i)
        for (std::size_t j = 0; j < Hs.size(); ++j) {
            const double m = r.at(i, j);
            t.add_row({format_number(taus[i]), format_number(Hs[j]), format_number(m),
                       std::isfinite(m) ? (m > 0.0 ? "1" : "0") : "none"});
        }
    w.put(stem + ".csv", t, figure, "embeddedness margin of CMC spheres on a (tau, H) grid");
    CsvTable b;
    b.meta = t.meta;
    b.columns = {"tau", "H", "residual"};
    for (const auto& p : r.boundary) b.add_row({p.tau, p.H, p.residual});
    w.put(stem + "_boundary.csv", b, figure, "points with y0 = -pi located along grid lines");
}

void isoperimetric_panel(Writer& w, const FigureOptions& o, double tau) {
    const SpaceParams sp = berger(4.0, tau);
    const auto grid = default_isoperimetric_grid(sp, o.grid);
    auto pts = isoperimetric_profile(sp, grid);
    std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a.family != b.family) return a.family < b.family;
        return a.volume < b.volume;
    });
    CsvTable t;
    t.meta = base_metadata(sp);
    t.meta.add("total_volume", berger_total_volume(sp));
    t.columns = {"family", "H", "volume", "area"};
    for (const auto& p : pts)
        t.add_row({p.family == Family::Sphere ? "sphere" : "torus", format_number(p.H), format_number(p.volume),
                   format_number(p.area)});
    w.put(fmt::format("isoperimetric_tau_{}.csv", format_number(tau)), t,
          fmt::format("area against volume of CMC spheres and tori, tau = {}", format_number(tau)),
          "both families with the mirrored branch (volume -> total - volume)");
}

void profile_panel(Writer& w, const FigureOptions& o, const SpaceParams& sp, FlowParams fp, const std::string& stem,
                   const std::string& figure) {
    ProfileSetup st = default_setup(fp, sp);
    const ProfileCurve c = integrate_profile(st.start, fp, sp, o.profile_span, st.opts);
    w.put(stem + ".csv", profile_table(c, st.opts), figure, "generating curve (x(s), y(s)) with events");
}

} // namespace

ordered_json write_figures(const FigureOptions& o) {
    if (o.grid < 8) throw DomainError("figure grids need at least 8 points per axis");
    Writer w;
    w.dir = o.out_dir;
    fs::create_directories(w.dir);

    period_panel(w, o);
    region_panel(w, o, SpaceKind::BergerSphere, 4.0, 0.02, 0.98, 0.0, 3.0, "embedded_berger",
                 "non-embedded region of CMC spheres in Berger spheres, kappa = 4");
    region_panel(w, o, SpaceKind::Sl2R, -4.0, 0.05, 2.0, 0.0, 4.0, "embedded_sl2r",
                 "non-embedded region of CMC spheres in Sl(2,R), kappa = -4");
    for (double tau : kIsoperimetricTaus) isoperimetric_panel(w, o, tau);

    const SpaceParams b = berger(4.0, 0.4);
    profile_panel(w, o, b, {0.3, 0.3}, "profile_unduloid", "generating curve for E > 0");
    profile_panel(w, o, b, {0.5, -0.2}, "profile_nodoid", "generating curve for E < 0, E != -H");
    profile_panel(w, o, b, {0.5, -0.5}, "profile_pole_chain", "generating curve for E = -H");
    const SpaceParams s = sl2r(-4.0, 1.0);
    profile_panel(w, o, s, {0.9, 0.0}, "profile_open_sphere", "open curve for E = 0, 4H^2 + kappa <= 0");
    profile_panel(w, o, s, {0.9, 0.1}, "profile_open_unduloid", "open curve for E > 0, 4H^2 + kappa <= 0");
    profile_panel(w, o, s, {0.9, -0.3}, "profile_open_nodoid", "open curve for E < 0, 4H^2 + kappa <= 0");

    ordered_json manifest;
    manifest["schema_version"] = kSchemaVersion;
    manifest["artifact"] = "cmcsurf";
    manifest["version"] = artifact_version();
    manifest["grid"] = o.grid;
    manifest["files"] = w.files;
    write_json((w.dir / "manifest.json").string(), manifest);
    return manifest;
}

} // namespace cmcsurf
