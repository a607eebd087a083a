#include "cmcsurf/io.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cmcsurf/closed_forms.hpp"
#include "cmcsurf/errors.hpp"

#ifndef CMCSURF_VERSION
#define CMCSURF_VERSION "dev"
#endif

namespace cmcsurf {

using nlohmann::ordered_json;

std::string_view artifact_version() { return CMCSURF_VERSION; }

Metadata& Metadata::add(std::string key, std::string value) {
    entries.emplace_back(std::move(key), std::move(value));
    return *this;
}

Metadata& Metadata::add(std::string key, double value) { return add(std::move(key), format_number(value)); }

Metadata base_metadata() {
    Metadata m;
    m.add("artifact", std::string("cmcsurf"));
    m.add("version", std::string(artifact_version()));
    return m;
}

Metadata base_metadata(const SpaceParams& sp) {
    Metadata m = base_metadata();
    m.add("space", std::string(to_string(sp.kind)));
    m.add("kappa", sp.kappa);
    m.add("tau", sp.tau);
    return m;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

void CsvTable::add_row(const std::vector<double>& values) {
    std::vector<std::string> r;
    r.reserve(values.size());
    for (double v : values) r.push_back(format_number(v));
    add_row(std::move(r));
}

void CsvTable::add_row(std::vector<std::string> values) {
    if (values.size() != columns.size())
        throw DomainError(fmt::format("row has {} fields, table has {} columns", values.size(), columns.size()));
    rows.push_back(std::move(values));
}

void write_csv(std::ostream& os, const CsvTable& t) {
    for (const auto& [k, v] : t.meta.entries) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
    }
}

void write_csv(const std::string& path, const CsvTable& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot open " + path + " for writing");
    write_csv(f, t);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open " + path);
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    bool have_header = false;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                std::string v = line.substr(colon + 1);
                if (!v.empty() && v[0] == ' ') v.erase(0, 1);
                t.meta.add(line.substr(2, colon - 2), v);
            }
            continue;
        }
        if (!have_header) {
            t.columns = split(line);
            have_header = true;
        } else {
            t.rows.push_back(split(line));
        }
    }
    return t;
}

ordered_json space_json(const SpaceParams& sp) {
    return {{"kind", to_string(sp.kind)}, {"kappa", sp.kappa}, {"tau", sp.tau}};
}

ordered_json band_json(const TurningBand& band) {
    auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(format_number(v)); };
    return {{"shape", to_string(band.shape)}, {"t1", num(band.t1)}, {"t2", num(band.t2)},
            {"x1", num(band.x1)}, {"x2", num(band.x2)}};
}

namespace {

ordered_json witness_json(const std::optional<RationalWitness>& w) {
    if (!w) return nullptr;
    return {{"p", w->p}, {"q", w->q}, {"residual", w->residual}};
}

} // namespace

ordered_json class_json(const SurfaceClass& c) {
    ordered_json j;
    j["class"] = class_name(c);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, surface::Sphere>) {
                j["y0"] = s.y0;
                j["embedded"] = s.embedded;
                j["compact"] = true;
            } else if constexpr (std::is_same_v<T, surface::CliffordTorus>) {
                j["r"] = s.r;
                j["embedded"] = true;
                j["compact"] = true;
            } else if constexpr (std::is_same_v<T, surface::Unduloid>) {
                j["period"] = s.T;
                j["compact_witness"] = witness_json(s.compact);
                j["embedded"] = s.embedded;
            } else if constexpr (std::is_same_v<T, surface::Nodoid>) {
                j["period"] = s.T;
                j["compact_witness"] = witness_json(s.compact);
                j["embedded"] = false;
            } else if constexpr (std::is_same_v<T, surface::PoleChain>) {
                j["y_s1"] = s.y_s1;
                j["compact_witness"] = witness_json(s.compact);
                j["embedded_torus"] = s.embedded_torus;
            } else if constexpr (std::is_same_v<T, surface::GreatSphere>) {
                j["embedded"] = true;
                j["compact"] = true;
            } else if constexpr (std::is_same_v<T, surface::OpenSphereGraph>) {
                j["compact"] = false;
                j["note"] = "no CMC sphere for 4H^2 + kappa <= 0";
            } else {
                j["compact"] = false;
                j["note"] = "immersed and non-compact for 4H^2 + kappa <= 0";
            }
        },
        c);
    return j;
}

ordered_json classify_report(const FlowParams& fp, const SpaceParams& sp, const ClassifyOptions& opts) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "classify";
    j["version"] = artifact_version();
    j["space"] = space_json(sp);
    j["flow"] = {{"H", fp.H}, {"E", fp.E}};
    j["tolerances"] = {{"tol", opts.tol}, {"qmax", opts.qmax}, {"eq_tol", opts.eq_tol}};
    const EnergyRange r = admissible_energy_range(fp.H, sp);
    auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(format_number(v)); };
    j["energy_range"] = {{"lo", num(r.lo)}, {"hi", num(r.hi)}, {"lo_closed", r.lo_closed}, {"hi_closed", r.hi_closed}};
    const SurfaceClass c = classify(fp, sp, opts);
    j["surface"] = class_json(c);
    const TurningBand band = turning_points(fp, sp);
    j["band"] = band_json(band);
    return j;
}

CsvTable profile_table(const ProfileCurve& curve, const IntegrationOptions& opts) {
    CsvTable t;
    t.meta = base_metadata(curve.sp);
    t.meta.add("H", curve.fp.H).add("E", curve.fp.E);
    t.meta.add("rtol", opts.rtol).add("atol", opts.atol).add("energy_tol", opts.energy_tol);
    t.meta.add("max_energy_drift", curve.max_energy_drift);
    t.meta.add("rows", std::string("kind=sample rows first, then one row per event (index = sample row)"));
    t.columns = {"kind", "index", "s", "x", "y", "alpha", "C", "E_drift"};
    const double scale = 1.0 + std::abs(curve.fp.E);
    auto row = [&](std::string kind, std::size_t i) {
        const ProfileState& p = curve.samples[i];
        const double drift = std::abs(energy(p.x, p.alpha, curve.fp.H, curve.sp) - curve.fp.E) / scale;
        t.add_row({std::move(kind), std::to_string(i), format_number(p.s), format_number(p.x), format_number(p.y),
                   format_number(p.alpha), format_number(tilt_C(p.x, p.alpha, curve.sp)), format_number(drift)});
    };
    for (std::size_t i = 0; i < curve.samples.size(); ++i) row("sample", i);
    for (const ProfileEvent& e : curve.events) row(std::string(to_string(e.kind)), e.index);
    return t;
}

void write_json(std::ostream& os, const ordered_json& j) { os << j.dump(2) << '\n'; }

void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot open " + path + " for writing");
    write_json(f, j);
}

} // namespace cmcsurf
