#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cmcsurf/classify.hpp"
#include "cmcsurf/profile.hpp"
#include "cmcsurf/space.hpp"

namespace cmcsurf {

inline constexpr int kSchemaVersion = 1;

std::string_view artifact_version();

// Ordered key/value block written as `# key: value` lines.
struct Metadata {
    std::vector<std::pair<std::string, std::string>> entries;

    Metadata& add(std::string key, std::string value);
    Metadata& add(std::string key, double value);
};

// artifact, version and the space parameters.
Metadata base_metadata(const SpaceParams& sp);
Metadata base_metadata();

// Shortest round-trip text, so files are byte-identical across runs.
std::string format_number(double v);

struct CsvTable {
    Metadata meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& values);
    void add_row(std::vector<std::string> values);
};

void write_csv(std::ostream& os, const CsvTable& t);
void write_csv(const std::string& path, const CsvTable& t);

// Parsed back for tests and figure checks; `#` lines land in meta.
CsvTable read_csv(const std::string& path);

nlohmann::ordered_json space_json(const SpaceParams& sp);
nlohmann::ordered_json band_json(const TurningBand& band);
nlohmann::ordered_json class_json(const SurfaceClass& c);

// Full classify report: class, band, period, witness, embeddedness.
nlohmann::ordered_json classify_report(const FlowParams& fp, const SpaceParams& sp, const ClassifyOptions& opts);

// Profile samples as rows (s, x, y, alpha, C, E_drift) followed by event rows.
CsvTable profile_table(const ProfileCurve& curve, const IntegrationOptions& opts);

void write_json(std::ostream& os, const nlohmann::ordered_json& j);
void write_json(const std::string& path, const nlohmann::ordered_json& j);

} // namespace cmcsurf
