#pragma once

// CSV and JSON emission. CSV: ',' separators, '\n' line endings, header row
// always present, numbers as %.17g. JSON numbers use shortest round-trip
// formatting; non-finite values become null.

#include <span>
#include <string>

#include "json.hpp"

#include "cvqkd/protocol.hpp"
#include "cvqkd/security.hpp"

namespace cvqkd {

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

nlohmann::ordered_json to_json(const KeyRateReport& r);
std::string to_csv(const KeyRateReport& r);

nlohmann::ordered_json to_json(const ThresholdCurve& c);

/// One curve: columns T,omega_star,N_star,secure. Several curves: an
/// `attack` column is prepended so rows stay self-describing.
std::string to_csv(std::span<const ThresholdCurve> curves);

nlohmann::ordered_json to_json(const ScanResult& s, const ScanGrid* grid = nullptr);

/// Summary row (T,omega,best_g,best_g_prime,R_min,grid_resolution,grid_points);
/// with a grid, one row per grid point (g,g_prime,R,best) instead.
std::string to_csv(const ScanResult& s, const ScanGrid* grid = nullptr);

}  // namespace cvqkd
