#pragma once

// Eve's two-mode coherent attack: ancillas E1 (forward pass) and E2 (backward
// pass) share the covariance matrix
//
//     [[omega I, G], [G, omega I]],   G = diag(g, g').

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvqkd/gaussian.hpp"

namespace cvqkd {

struct AttackParams {
  double omega = 1.0;  ///< thermal variance of each ancilla (SNU), >= 1
  double g = 0.0;      ///< q-quadrature correlation
  double g_prime = 0.0;  ///< p-quadrature correlation

  friend bool operator==(const AttackParams&, const AttackParams&) = default;
};

enum class AttackLabel {
  collective,
  epr_pos,
  epr_neg,
  sep_sym_pos,
  sep_sym_neg,
  sep_anti_pos,
  sep_anti_neg,
  custom,
};

/// A named extremal attack, or `custom` with explicit correlations.
struct AttackClass {
  AttackLabel label = AttackLabel::collective;
  double g = 0.0;  ///< only used by `custom`
  double g_prime = 0.0;

  static AttackClass named(AttackLabel l) { return AttackClass{l, 0.0, 0.0}; }
  static AttackClass custom(double g, double g_prime) { return AttackClass{AttackLabel::custom, g, g_prime}; }
};

enum class CorrelationKind { collective, separable_correlated, entangled };

/// Canonical CLI name: collective, epr+, epr-, sep-sym+, sep-sym-, sep-anti+,
/// sep-anti-, custom.
std::string_view to_string(AttackLabel label);
std::string_view to_string(CorrelationKind kind);

/// Accepts the canonical names and the short aliases a (epr+), b (sep-sym+),
/// c (sep-anti+), d (sep-sym-). Returns nullopt for anything else.
std::optional<AttackLabel> parse_attack_label(std::string_view name);

const std::vector<AttackLabel>& named_attack_labels();

/// 4x4 covariance of (E1, E2). Throws InvalidArgument for omega < 1; the
/// matrix is returned even when it is not physical.
CovarianceMatrix<double> eve_cm(const AttackParams& a);

/// Empty when physical, otherwise a message naming the failed check.
std::optional<std::string> physicality_violation(const AttackParams& a);

bool is_physical(const AttackParams& a);

/// Throws UnphysicalState (InvalidArgument for omega < 1) with the message
/// from `physicality_violation`.
void require_physical(const AttackParams& a);

AttackParams attack_from_class(const AttackClass& cls, double omega);

inline AttackParams attack_from_class(AttackLabel label, double omega) {
  return attack_from_class(AttackClass::named(label), omega);
}

CorrelationKind classify(const AttackParams& a);

/// Physical (g, g') on the lattice step*Z^2 inside [-omega, omega]^2, in
/// row-major order (g outer, g' inner, both ascending). The lattice contains
/// the origin so the point set is symmetric under g <-> g' and (g, g') -> -(g, g').
std::vector<AttackParams> physical_region_grid(double omega, double step);

}  // namespace cvqkd
