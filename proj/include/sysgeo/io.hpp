#pragma once

#include "sysgeo/geometry.hpp"

#include <filesystem>
#include <string>

// File formats: profile CSV (header `y,phi`, strictly increasing y from 0 to
// beta, positive phi) and polyline CSV exports with a comment header
// carrying the deck word.

namespace sysgeo {

/// Reads a sampled profile. Throws std::runtime_error with the offending row
/// number for malformed, unsorted or nonpositive data.
Profile read_profile_csv(const std::filesystem::path& path);

/// Samples a profile to n uniform points on [0, beta] and writes it.
void write_profile_csv(const std::filesystem::path& path, const Profile& profile, int n = 2048);

/// `# deck_word k=<k> m=<m>` comment line, then `x,y` rows.
void write_curve_csv(const std::filesystem::path& path, const CurvePolyline& curve);

/// Same polyline mapped through a chart to 3-space; `x,y,z` rows.
void write_curve_csv_3d(const std::filesystem::path& path, const CurvePolyline& curve,
                        const std::function<Point3(const Point2&)>& chart,
                        const std::string& header_comment);

}  // namespace sysgeo
