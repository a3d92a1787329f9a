#pragma once

// Security thresholds (R = 0 loci), the one-way baseline, optimal-attack
// scans over Eve's correlations, and relative variations against the
// collective attack.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cvqkd/attacks.hpp"
#include "cvqkd/kernels.hpp"
#include "cvqkd/protocol.hpp"

namespace cvqkd {

inline constexpr double kThresholdBracketWidth = 1e-10;
inline constexpr double kThresholdResidual = 1e-8;
inline constexpr double kThresholdOmegaCap = 65536.0;  // 2^16

/// Modulation used by the one-way baseline. The machinery rate is within
/// ~1e-7 of its mu -> infinity limit here (at 1e6 it is still ~1e-5 off).
inline constexpr double kOneWayModulation = 1e8;

/// N = [T - 1 + (1 - T) omega] / T.
double excess_noise(double T, double omega);
double omega_from_excess(double T, double N);

struct ThresholdResult {
  enum class Status { found, no_secure_region };
  Status status = Status::no_secure_region;
  double omega_star = 1.0;
};

/// Root of a rate that is positive at omega = 1 and decreasing in omega.
///
/// The upper bracket starts at 2 and doubles until the rate turns negative;
/// every new bracket end must lower the rate (MonotonicityError otherwise),
/// and passing 2^16 raises DivergentThreshold. Bisection then runs to a width
/// of 1e-10 and the midpoint must satisfy |R| <= 1e-8. A rate that is already
/// <= 0 at omega = 1 yields Status::no_secure_region, which is not an error.
ThresholdResult threshold_omega(const std::function<double(double)>& rate);

/// Two-way threshold for a named attack class (its correlations follow omega).
ThresholdResult threshold_omega(double T, const AttackClass& cls);

inline ThresholdResult threshold_omega(double T, AttackLabel label) {
  return threshold_omega(T, AttackClass::named(label));
}

enum class PointStatus { secure, insecure, divergent, error };

std::string_view to_string(PointStatus status);

struct ThresholdPoint {
  double T = 0.0;
  double omega_star = 1.0;
  double N_star = 0.0;
  PointStatus status = PointStatus::insecure;
  std::string message;  ///< set for divergent/error points

  bool secure() const { return status == PointStatus::secure; }
};

struct ThresholdCurve {
  std::string attack_class;
  std::vector<ThresholdPoint> points;
};

/// Per-T thresholds; failures are recorded on the point, never thrown.
/// `threads` > 1 evaluates points concurrently; order follows t_grid.
ThresholdCurve threshold_curve(const AttackClass& cls, std::span<const double> t_grid, unsigned threads = 1);

/// Threshold curve of the one-way baseline (label "oneway").
ThresholdCurve oneway_threshold_curve(std::span<const double> t_grid, unsigned threads = 1);

/// One-way coherent-state protocol, heterodyne detection, direct
/// reconciliation, single-mode collective (entangling-cloner) attack,
/// evaluated with the Gaussian machinery in extended precision.
double oneway_keyrate(double T, double omega);

/// Same at an explicit modulation mu (Alice's EPR variance mu + 1).
double oneway_keyrate_at(double T, double omega, double mu);

struct ScanResult {
  double T = 0.0;
  double omega = 1.0;
  double best_g = 0.0;
  double best_g_prime = 0.0;
  double R_min = 0.0;
  double grid_resolution = 0.0;
  std::size_t grid_points = 0;
};

struct ScanGrid {
  std::vector<AttackParams> points;
  std::vector<double> rates;
};

/// Minimizes keyrate_asymptotic over physical_region_grid(omega, step).
/// Ties go to the smallest g, then the smallest g'. When `full_grid` is not
/// null it receives every evaluated point.
ScanResult optimal_attack_scan(double T, double omega, double step, kernels::Isa isa, ScanGrid* full_grid = nullptr);

inline ScanResult optimal_attack_scan(double T, double omega, double step) {
  return optimal_attack_scan(T, omega, step, kernels::best_isa());
}

struct RelativeVariation {
  double omega = 1.0;
  double I_AB = 0.0;  ///< attack (d)
  double I_c = 0.0;   ///< collective
  double chi_EA = 0.0;
  double chi_c = 0.0;
  double dI_AB = 0.0;  ///< (I_AB - I_c) / I_c
  double dchi_EA = 0.0;  ///< (chi_EA - chi_c) / chi_c
  bool valid = true;  ///< false when I_c or chi_c <= 0
};

/// Attack (d) (g = g' = 1 - omega) against the collective attack at the same
/// (T, omega, mu). Requires mu >= 1e3.
std::vector<RelativeVariation> relative_variations(double T, double mu, std::span<const double> omega_grid);

/// lo, lo + step, ... up to hi (inclusive within 1e-9 step).
std::vector<double> uniform_grid(double lo, double hi, double step);

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace cvqkd
