#pragma once

#include "tilescope/empirical.hpp"

#include <json.hpp>

#include <string>

namespace tilescope::io {

using euclid::Isometry;
using euclid::Polygon;
using generation::ColoredPointSet;
using generation::Patch;
using inflation::InflationSystem;

nlohmann::json to_json(const Isometry& g);
Isometry isometry_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Polygon& p);
Polygon polygon_from_json(const nlohmann::json& j);

nlohmann::json to_json(const InflationSystem& sys);
InflationSystem system_from_json(const nlohmann::json& j);

nlohmann::json to_json(const spectral::UniformityReport& rep);

nlohmann::json to_json(const Patch& p);

/// Columns: color_index, x_1..x_d, ortho entries (row-major), weight.
std::string point_set_csv(const ColoredPointSet& points);

/// Columns: r, then the Hermitian matrix entries (real/imag interleaved);
/// header records the window radius and angular sample count.
std::string spectrum_csv(const empirical::SpectrumEstimate& est,
                         const std::vector<double>* residuals = nullptr);

/// Columns: R, variance, samples; header records the seed.
std::string variance_csv(const empirical::VarianceCurve& curve);

/// One polygon per tile (d=2) or unit-height bar per tile (d=1), colored by
/// prototile id, deterministic order. Throws for d >= 3.
std::string render_svg(const InflationSystem& sys, const Patch& p, double stroke_width = 0.02);

/// Formats a double with 17 significant digits.
std::string fmt17(double v);

} // namespace tilescope::io
