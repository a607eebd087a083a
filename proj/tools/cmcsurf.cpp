// cmcsurf: rotational CMC surfaces in Berger spheres and Sl(2,R).

#include <CLI11.hpp>

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

#include "cmcsurf/classify.hpp"
#include "cmcsurf/closed_forms.hpp"
#include "cmcsurf/errors.hpp"
#include "cmcsurf/figures.hpp"
#include "cmcsurf/investigations.hpp"
#include "cmcsurf/io.hpp"
#include "cmcsurf/mesh.hpp"
#include "cmcsurf/numerics.hpp"
#include "cmcsurf/oracles.hpp"

namespace {

using namespace cmcsurf;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitGeometry = 4;

struct RunConfig {
    std::string space = "berger";
    std::optional<double> kappa, tau, H, E;
    std::size_t grid = 400;
    double tol = 1e-9;
    std::int64_t qmax = 10000;
    std::string out = "-";
    std::string format;  // empty: command default
    double span = 30.0;
    double tau_min = 0.0, tau_max = 0.0, H_min = 0.0, H_max = 0.0;
    int rings = 96, segments = 64;

    SpaceParams space_params() const {
        const SpaceKind kind = space == "sl2r" ? SpaceKind::Sl2R : SpaceKind::BergerSphere;
        const double k = kappa.value_or(kind == SpaceKind::Sl2R ? -4.0 : 4.0);
        if (!tau) throw DomainError("--tau is required");
        return make_space(kind, k, *tau);
    }
    double need_H() const {
        if (!H) throw DomainError("--H is required");
        return *H;
    }
    FlowParams flow() const {
        if (!E) throw DomainError("--E is required");
        return {need_H(), *E};
    }
    ClassifyOptions classify_options() const {
        ClassifyOptions o;
        o.tol = tol;
        o.qmax = qmax;
        return o;
    }
    void validate() const {
        if (!(tol > 0.0)) throw DomainError("--tol must be positive");
        if (qmax < 1) throw DomainError("--qmax must be >= 1");
        if (grid < 2) throw DomainError("--grid must be >= 2");
        if (!(span > 0.0)) throw DomainError("--span must be positive");
    }
};

// Output sink: a file, or stdout for "-".
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw DomainError("cannot open " + path + " for writing");
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::string fmt_or(const RunConfig& c, const char* def) { return c.format.empty() ? def : c.format; }

void require_format(const std::string& f, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (f == a) return;
    throw DomainError(fmt::format("format '{}' is not supported by this command", f));
}

void emit(const RunConfig& c, const ordered_json& j, const CsvTable* table = nullptr) {
    const std::string f = fmt_or(c, "json");
    Sink s(c.out);
    if (f == "csv" && table) {
        write_csv(s.os(), *table);
        return;
    }
    require_format(f, {"json"});
    write_json(s.os(), j);
}

ordered_json header(const char* command, const RunConfig& c) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["version"] = artifact_version();
    j["tolerances"] = {{"tol", c.tol}, {"qmax", c.qmax}};
    return j;
}

int cmd_classify(const RunConfig& c) {
    const SpaceParams sp = c.space_params();
    if (c.E) {
        emit(c, classify_report(c.flow(), sp, c.classify_options()));
        return kExitOk;
    }
    // No --E: sweep the admissible energies for this H.
    const double H = c.need_H();
    const EnergyRange r = admissible_energy_range(H, sp);
    const double lo = std::isfinite(r.lo) ? r.lo : r.hi - 4.0 * (1.0 + H);
    const double hi = std::isfinite(r.hi) ? r.hi : lo + 8.0 * (1.0 + H);
    CsvTable t;
    t.meta = base_metadata(sp);
    t.meta.add("H", H).add("tol", c.tol).add("qmax", static_cast<double>(c.qmax));
    t.columns = {"E", "class", "period", "compact", "embedded"};
    ordered_json rows = ordered_json::array();
    for (double E : linspace(lo, hi, c.grid)) {
        if (!r.contains(E)) continue;
        const ordered_json cj = class_json(classify({H, E}, sp, c.classify_options()));
        const std::string period = cj.contains("period") ? format_number(cj["period"].get<double>()) : "";
        std::string compact = "";
        if (cj.contains("compact")) compact = cj["compact"].get<bool>() ? "1" : "0";
        if (cj.contains("compact_witness")) compact = cj["compact_witness"].is_null() ? "0" : "1";
        std::string emb = cj.contains("embedded") ? (cj["embedded"].get<bool>() ? "1" : "0") : "";
        t.add_row({format_number(E), cj["class"].get<std::string>(), period, compact, emb});
        ordered_json row = cj;
        row["E"] = E;
        rows.push_back(row);
    }
    ordered_json j = header("classify", c);
    j["space"] = space_json(sp);
    j["H"] = H;
    j["sweep"] = rows;
    const std::string f = fmt_or(c, "csv");
    RunConfig cc = c;
    cc.format = f;
    emit(cc, j, &t);
    return kExitOk;
}

int cmd_profile(const RunConfig& c) {
    const SpaceParams sp = c.space_params();
    const FlowParams fp = c.flow();
    if (!admissible(fp, sp)) throw DomainError("inadmissible (H, E) for this space");
    const ProfileSetup st = default_setup(fp, sp);
    const ProfileCurve curve = integrate_profile(st.start, fp, sp, c.span, st.opts);
    const std::string f = fmt_or(c, "csv");
    require_format(f, {"csv", "json"});
    const CsvTable t = profile_table(curve, st.opts);
    if (f == "csv") {
        Sink s(c.out);
        write_csv(s.os(), t);
        return kExitOk;
    }
    ordered_json j = header("profile", c);
    j["space"] = space_json(sp);
    j["flow"] = {{"H", fp.H}, {"E", fp.E}};
    j["max_energy_drift"] = curve.max_energy_drift;
    ordered_json ev = ordered_json::array();
    for (const auto& e : curve.events) {
        const ProfileState& p = curve.samples[e.index];
        ev.push_back({{"kind", to_string(e.kind)}, {"s", p.s}, {"x", p.x}, {"y", p.y}, {"alpha", p.alpha}});
    }
    j["events"] = ev;
    j["samples"] = curve.samples.size();
    emit(c, j);
    return kExitOk;
}

int cmd_period(const RunConfig& c) {
    const SpaceParams sp = c.space_params();
    const FlowParams fp = c.flow();
    const TurningBand band = turning_points(fp, sp);
    ordered_json j = header("period", c);
    j["space"] = space_json(sp);
    j["flow"] = {{"H", fp.H}, {"E", fp.E}};
    j["band"] = band_json(band);
    if (sp.is_berger() && std::abs(fp.E + fp.H) <= kEnergyEqualityTol && fp.H > 0.0) {
        const double ys1 = pole_chain_y_s1(fp.H, sp);
        j["y_s1"] = ys1;
        const auto w = rational_witness(std::abs(ys1) / (2.0 * std::numbers::pi), c.tol, c.qmax);
        j["compact_witness"] = w ? ordered_json{{"p", w->p}, {"q", w->q}, {"residual", w->residual}} : ordered_json();
    }
    const double T = period_T(fp, sp);
    j["period"] = T;
    j["period_over_pi"] = T / std::numbers::pi;
    const auto w = compactness_test(std::abs(T), c.tol, c.qmax);
    j["compact_witness"] = w ? ordered_json{{"p", w->p}, {"q", w->q}, {"residual", w->residual}} : ordered_json();
    emit(c, j);
    return kExitOk;
}

int cmd_sphere(const RunConfig& c) {
    const SpaceParams sp = c.space_params();
    const double H = c.need_H();
    if (!sp.is_berger() && !(4.0 * H * H + sp.kappa > 0.0))
        throw DomainError("no CMC sphere for 4H^2 + kappa <= 0");
    const SphereProfile p = sphere_profile(H, sp);
    ordered_json j = header("sphere", c);
    j["space"] = space_json(sp);
    j["H"] = H;
    j["half_domain"] = p.a;
    j["y0"] = p.y0;
    j["embedded"] = p.embedded();
    j["area"] = sphere_area(H, sp);
    if (sp.is_berger()) {
        j["volume"] = sphere_volume(H, sp);
        j["volume_complement"] = berger_total_volume(sp) - sphere_volume(H, sp);
    }
    CsvTable t;
    t.meta = base_metadata(sp);
    t.meta.add("H", H);
    t.columns = {"x", "y"};
    const double lo = sp.is_berger() ? 0.0 : -p.a, hi = sp.is_berger() ? p.a : 0.0;
    for (double x : linspace(lo, hi, c.grid)) t.add_row({x, sphere_profile_y(x, H, sp)});
    emit(c, j, &t);
    return kExitOk;
}

int cmd_volume(const RunConfig& c) {
    const SpaceParams sp = c.space_params();
    if (!sp.is_berger()) throw DomainError("volumes are available for Berger spheres only");
    const double H = c.need_H();
    const double v = sphere_volume(H, sp), total = berger_total_volume(sp);
    ordered_json j = header("volume", c);
    j["space"] = space_json(sp);
    j["H"] = H;
    j["sphere"] = {{"volume", v}, {"volume_complement", total - v}, {"volume_coarea", numeric_volume_coarea(H, sp)},
                   {"area", sphere_area(H, sp)}};
    const TorusMeasures tm = torus_area_volume(H, sp);
    j["torus"] = {{"volume", tm.volume}, {"volume_complement", total - tm.volume}, {"area", tm.area}};
    j["total_volume"] = total;
    emit(c, j);
    return kExitOk;
}

int cmd_lawson(const RunConfig& c) {
    const SpaceParams sp = c.space_params();
    const LawsonScan scan = lawson_scan(sp, c.grid);
    ordered_json j = header("lawson-scan", c);
    j["space"] = space_json(sp);
    j["period_limit_torus"] = minimal_period_limit(sp);
    ordered_json roots = ordered_json::array();
    for (const auto& r : scan.roots) {
        const auto w = compactness_test(r.T, c.tol, c.qmax);
        roots.push_back({{"E", r.E}, {"T", r.T}, {"residual", r.residual}, {"bracket", {r.lo, r.hi}},
                         {"witness", w ? ordered_json{{"p", w->p}, {"q", w->q}} : ordered_json()}});
    }
    j["roots"] = roots;
    j["E_star"] = scan.E_star() ? ordered_json(*scan.E_star()) : ordered_json();
    CsvTable t;
    t.meta = base_metadata(sp);
    t.meta.add("H", 0.0).add("roots", static_cast<double>(scan.roots.size()));
    t.columns = {"E", "T"};
    for (const auto& s : scan.samples) t.add_row({s.E, s.T});
    emit(c, j, &t);
    return kExitOk;
}

int cmd_tau0(const RunConfig& c) {
    const double k = c.kappa.value_or(4.0);
    const double lo = c.tau_min > 0.0 ? c.tau_min : 0.4, hi = c.tau_max > 0.0 ? c.tau_max : 0.9;
    const Tau0Estimate e = tau0_estimate(k, lo, hi, 1e-3, c.grid);
    ordered_json j = header("tau0", c);
    j["kappa"] = k;
    j["tau0"] = e.tau0;
    j["bracket"] = {e.lo, e.hi};
    j["bisections"] = e.bisections;
    j["note"] = "computed transition of the Lawson predicate; reported, not asserted";
    emit(c, j);
    return kExitOk;
}

int cmd_embeddedness(const RunConfig& c) {
    const SpaceKind kind = c.space == "sl2r" ? SpaceKind::Sl2R : SpaceKind::BergerSphere;
    const double k = c.kappa.value_or(kind == SpaceKind::Sl2R ? -4.0 : 4.0);
    const double t0 = c.tau_min > 0.0 ? c.tau_min : (kind == SpaceKind::Sl2R ? 0.05 : 0.02);
    const double t1 = c.tau_max > 0.0 ? c.tau_max : (kind == SpaceKind::Sl2R ? 2.0 : 0.98);
    const double h0 = c.H_min, h1 = c.H_max > 0.0 ? c.H_max : (kind == SpaceKind::Sl2R ? 4.0 : 3.0);
    const EmbeddednessRegion r = embeddedness_region(kind, k, linspace(t0, t1, c.grid), linspace(h0, h1, c.grid));
    CsvTable t;
    t.meta = base_metadata();
    t.meta.add("space", std::string(to_string(kind))).add("kappa", k);
    t.columns = {"tau", "H", "margin", "embedded"};
    for (std::size_t i = 0; i < r.taus.size(); ++i)
        for (std::size_t jj = 0; jj < r.Hs.size(); ++jj) {
            const double m = r.at(i, jj);
            t.add_row({format_number(r.taus[i]), format_number(r.Hs[jj]), format_number(m),
                       std::isfinite(m) ? (m > 0.0 ? "1" : "0") : "none"});
        }
    ordered_json j = header("embeddedness", c);
    j["space"] = to_string(kind);
    j["kappa"] = k;
    ordered_json b = ordered_json::array();
    for (const auto& p : r.boundary) b.push_back({{"tau", p.tau}, {"H", p.H}, {"residual", p.residual}});
    j["boundary"] = b;
    RunConfig cc = c;
    cc.format = fmt_or(c, "csv");
    emit(cc, j, &t);
    return kExitOk;
}

int cmd_isoperimetric(const RunConfig& c) {
    const double k = c.kappa.value_or(4.0);
    ordered_json j = header("isoperimetric", c);
    j["kappa"] = k;
    const Crossing x = isoperimetric_crossing(k);
    j["crossing"] = {{"tau", x.tau}, {"area_sphere", x.area_sphere}, {"area_torus", x.area_torus}};
    CsvTable t;
    t.meta = base_metadata();
    t.meta.add("space", std::string("berger")).add("kappa", k);
    t.columns = {"family", "H", "volume", "area"};
    if (c.tau) {
        const SpaceParams sp = c.space_params();
        const auto grid = default_isoperimetric_grid(sp, c.grid);
        t.meta = base_metadata(sp);
        for (const auto& p : isoperimetric_profile(sp, grid))
            t.add_row({p.family == Family::Sphere ? "sphere" : "torus", format_number(p.H), format_number(p.volume),
                       format_number(p.area)});
        const auto iv = torus_advantage_interval(sp, grid);
        j["space"] = space_json(sp);
        j["total_volume"] = berger_total_volume(sp);
        j["torus_advantage"] = iv ? ordered_json{{"lo", iv->lo}, {"hi", iv->hi}} : ordered_json();
        int most = 0;
        for (const auto& m : matched_volumes(sp, grid)) most = std::max(most, m.sphere_count);
        j["max_spheres_per_volume"] = most;
    }
    emit(c, j, c.tau ? &t : nullptr);
    return kExitOk;
}

// Closed profile when the period is a short rational multiple of pi.
std::optional<Mesh> closed_profile_mesh(const FlowParams& fp, const SpaceParams& sp, double T, const RunConfig& c) {
    const auto w = compactness_test(std::abs(T), c.tol, c.qmax);
    if (!w || w->p == 0) return std::nullopt;
    // n oscillations advance y by n|T| = n p pi / q; need an even multiple of pi.
    const std::int64_t n = 2 * w->q / std::gcd(w->p, 2 * w->q);
    if (n > 64) return std::nullopt;
    ProfileSetup st = default_setup(fp, sp);
    st.opts.max_events = static_cast<int>(2 * n);
    const ProfileCurve curve = integrate_profile(st.start, fp, sp, 1e6, st.opts);
    ProfileCurve cut = curve;
    const auto tp = curve.event_indices(EventKind::TurningPoint);
    if (tp.size() < static_cast<std::size_t>(2 * n)) return std::nullopt;
    cut.samples.resize(tp[2 * n - 1] + 1);
    return profile_mesh(cut, true, std::max<int>(c.rings, static_cast<int>(32 * n)), c.segments);
}

int cmd_mesh(const RunConfig& c) {
    const SpaceParams sp = c.space_params();
    const FlowParams fp = c.flow();
    const SurfaceClass cls = classify(fp, sp, c.classify_options());
    Mesh m;
    bool closed = true;
    if (std::holds_alternative<surface::Sphere>(cls)) {
        m = sphere_mesh(fp.H, sp, c.rings, c.segments);
    } else if (std::holds_alternative<surface::GreatSphere>(cls)) {
        m = great_sphere_mesh(sp, c.rings, c.segments);
    } else if (const auto* t = std::get_if<surface::CliffordTorus>(&cls)) {
        m = torus_mesh(t->r, sp, c.rings, c.segments);
    } else {
        std::optional<Mesh> mm;
        if (const auto* u = std::get_if<surface::Unduloid>(&cls)) mm = closed_profile_mesh(fp, sp, u->T, c);
        if (const auto* n = std::get_if<surface::Nodoid>(&cls)) mm = closed_profile_mesh(fp, sp, n->T, c);
        if (!mm) {
            const ProfileSetup st = default_setup(fp, sp);
            mm = profile_mesh(integrate_profile(st.start, fp, sp, c.span, st.opts), false, c.rings, c.segments);
            closed = false;
        }
        m = std::move(*mm);
    }
    const int chi = euler_characteristic(m);
    const IntersectionReport rep = self_intersections(m);
    Metadata meta = base_metadata(sp);
    meta.add("H", fp.H).add("E", fp.E).add("class", std::string(class_name(cls)));
    meta.add("chart", std::string(sp.is_berger() ? "stereographic from (-1, 0)" : "solid torus (arg z, w/|z|)"));
    meta.add("closed", std::string(closed ? "1" : "0"));
    meta.add("euler_characteristic", static_cast<double>(chi));
    meta.add("self_intersection", std::string(rep.self_intersecting ? "1" : "0"));
    const std::string f = fmt_or(c, "obj");
    require_format(f, {"obj"});
    Sink s(c.out);
    write_obj(s.os(), m, meta);
    std::cerr << fmt::format("{}: {} vertices, {} faces, chi = {}, self-intersection = {}\n", class_name(cls),
                             m.v.size(), m.f.size(), chi, rep.self_intersecting ? "yes" : "no");
    return kExitOk;
}

int cmd_figures(const RunConfig& c) {
    FigureOptions o;
    o.out_dir = c.out == "-" ? "figures" : c.out;
    o.grid = c.grid;
    o.profile_span = c.span;
    const ordered_json manifest = write_figures(o);
    std::cout << fmt::format("wrote {} files and manifest.json to {}\n", manifest["files"].size(), o.out_dir);
    return kExitOk;
}

void add_common(CLI::App* app, RunConfig& c) {
    app->add_option("--space", c.space, "ambient space")->check(CLI::IsMember({"berger", "sl2r"}));
    app->add_option("--kappa", c.kappa, "base curvature (berger > 0, sl2r < 0)");
    app->add_option("--tau", c.tau, "bundle curvature");
    app->add_option("--H", c.H, "mean curvature (>= 0)");
    app->add_option("--E", c.E, "energy");
    app->add_option("--grid", c.grid, "points per scan axis");
    app->add_option("--tol", c.tol, "rational-witness tolerance");
    app->add_option("--qmax", c.qmax, "largest witness denominator");
    app->add_option("--out", c.out, "output file (directory for figures); - is stdout");
    app->add_option("--format", c.format, "json, csv or obj")->check(CLI::IsMember({"json", "csv", "obj"}));
    app->add_option("--span", c.span, "profile arc length");
    app->add_option("--tau-min", c.tau_min, "scan range");
    app->add_option("--tau-max", c.tau_max, "scan range");
    app->add_option("--H-min", c.H_min, "scan range");
    app->add_option("--H-max", c.H_max, "scan range");
    app->add_option("--rings", c.rings, "mesh rings");
    app->add_option("--segments", c.segments, "mesh segments");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotational constant mean curvature surfaces in Berger spheres and Sl(2,R)"};
    app.set_version_flag("--version", std::string(artifact_version()));
    app.require_subcommand(1);
    RunConfig cfg;
    using Handler = int (*)(const RunConfig&);
    const std::vector<std::tuple<const char*, const char*, Handler>> cmds{
        {"classify", "classify (H, E) or sweep E for fixed H", cmd_classify},
        {"profile", "integrate the generating curve", cmd_profile},
        {"period", "period integral and compactness witness", cmd_period},
        {"sphere", "closed-form CMC sphere data", cmd_sphere},
        {"volume", "sphere and torus volumes (Berger)", cmd_volume},
        {"lawson-scan", "roots of T(0,E) = 2 pi", cmd_lawson},
        {"tau0", "transition tau of the Lawson scan", cmd_tau0},
        {"embeddedness", "embeddedness margin of CMC spheres on a (tau, H) grid", cmd_embeddedness},
        {"isoperimetric", "sphere and torus area/volume curves", cmd_isoperimetric},
        {"mesh", "OBJ mesh of the surface", cmd_mesh},
        {"figures", "data files for all figures plus a manifest", cmd_figures},
    };
    Handler chosen = nullptr;
    for (const auto& [name, help, fn] : cmds) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, cfg);
        sub->callback([&chosen, fn = fn] { chosen = fn; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }
    try {
        cfg.validate();
        return chosen(cfg);
    } catch (const DomainError& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const GeometryError& e) {
        std::cerr << "geometric precondition failed: " << e.what() << '\n';
        return kExitGeometry;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
