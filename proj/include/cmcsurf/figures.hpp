#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace cmcsurf {

struct FigureOptions {
    std::string out_dir = "figures";
    std::size_t grid = 400;         // points per axis for scans
    double profile_span = 30.0;     // arc length of the profile panels
};

// Writes one CSV per panel plus manifest.json (file -> figure). Returns the manifest.
nlohmann::ordered_json write_figures(const FigureOptions& opts);

// Panel parameters, shared with the checks.
inline const std::vector<double> kPeriodFigureTaus{0.4, 0.5, 0.8};
inline const std::vector<double> kIsoperimetricTaus{0.5, 0.407, 0.374, 0.244};

} // namespace cmcsurf
