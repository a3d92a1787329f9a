#include "cvqkd/attacks.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace cvqkd {

namespace {

constexpr double kCollectiveTolerance = 1e-12;

struct LabelName {
  AttackLabel label;
  std::string_view name;
};

constexpr std::array<LabelName, 8> kLabelNames{{
    {AttackLabel::collective, "collective"},
    {AttackLabel::epr_pos, "epr+"},
    {AttackLabel::epr_neg, "epr-"},
    {AttackLabel::sep_sym_pos, "sep-sym+"},
    {AttackLabel::sep_sym_neg, "sep-sym-"},
    {AttackLabel::sep_anti_pos, "sep-anti+"},
    {AttackLabel::sep_anti_neg, "sep-anti-"},
    {AttackLabel::custom, "custom"},
}};

void require_omega(double omega, const char* where) {
  if (!(omega >= 1.0) || !std::isfinite(omega)) {
    throw InvalidArgument(std::string(where) + ": omega must be a finite value >= 1");
  }
}

}  // namespace

std::string_view to_string(AttackLabel label) {
  for (const auto& entry : kLabelNames) {
    if (entry.label == label) return entry.name;
  }
  return "unknown";
}

std::string_view to_string(CorrelationKind kind) {
  switch (kind) {
    case CorrelationKind::collective:
      return "collective";
    case CorrelationKind::separable_correlated:
      return "separable_correlated";
    case CorrelationKind::entangled:
      return "entangled";
  }
  return "unknown";
}

std::optional<AttackLabel> parse_attack_label(std::string_view name) {
  for (const auto& entry : kLabelNames) {
    if (entry.name == name) return entry.label;
  }
  if (name == "a") return AttackLabel::epr_pos;
  if (name == "b") return AttackLabel::sep_sym_pos;
  if (name == "c") return AttackLabel::sep_anti_pos;
  if (name == "d") return AttackLabel::sep_sym_neg;
  return std::nullopt;
}

const std::vector<AttackLabel>& named_attack_labels() {
  static const std::vector<AttackLabel> labels{
      AttackLabel::collective,  AttackLabel::epr_pos,      AttackLabel::epr_neg,      AttackLabel::sep_sym_pos,
      AttackLabel::sep_sym_neg, AttackLabel::sep_anti_pos, AttackLabel::sep_anti_neg,
  };
  return labels;
}

CovarianceMatrix<double> eve_cm(const AttackParams& a) {
  require_omega(a.omega, "eve_cm");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = a.omega;
  m(0, 2) = m(2, 0) = a.g;
  m(1, 3) = m(3, 1) = a.g_prime;
  return CovarianceMatrix<double>(std::move(m));
}

std::optional<std::string> physicality_violation(const AttackParams& a) {
  if (!(a.omega >= 1.0) || !std::isfinite(a.omega)) {
    return "omega >= 1 violated (omega = " + std::to_string(a.omega) + ")";
  }
  if (!std::isfinite(a.g) || !std::isfinite(a.g_prime)) {
    return std::string("correlations must be finite");
  }
  if (!(std::abs(a.g) < a.omega) && !(a.g == 0.0 && a.omega == 1.0)) {
    return "|g| < omega violated (g = " + std::to_string(a.g) + ", omega = " + std::to_string(a.omega) + ")";
  }
  if (!(std::abs(a.g_prime) < a.omega) && !(a.g_prime == 0.0 && a.omega == 1.0)) {
    return "|g'| < omega violated (g' = " + std::to_string(a.g_prime) + ", omega = " + std::to_string(a.omega) +
           ")";
  }
  double nu_min = 0.0;
  try {
    nu_min = symplectic_spectrum(eve_cm(a)).min();
  } catch (const UnphysicalState&) {
    return std::string("ancilla covariance matrix is not positive definite");
  }
  if (nu_min < 1.0 - kBonaFideTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "ancilla symplectic eigenvalue " << nu_min << " < 1 (uncertainty principle)";
    return os.str();
  }
  return std::nullopt;
}

bool is_physical(const AttackParams& a) { return !physicality_violation(a).has_value(); }

void require_physical(const AttackParams& a) {
  require_omega(a.omega, "attack");
  if (auto why = physicality_violation(a)) {
    throw UnphysicalState("unphysical attack: " + *why);
  }
}

AttackParams attack_from_class(const AttackClass& cls, double omega) {
  require_omega(omega, "attack_from_class");
  const double r = std::sqrt(omega * omega - 1.0);
  const double s = omega - 1.0;
  switch (cls.label) {
    case AttackLabel::collective:
      return {omega, 0.0, 0.0};
    case AttackLabel::epr_pos:
      return {omega, r, -r};
    case AttackLabel::epr_neg:
      return {omega, -r, r};
    case AttackLabel::sep_sym_pos:
      return {omega, s, s};
    case AttackLabel::sep_sym_neg:
      return {omega, -s, -s};
    case AttackLabel::sep_anti_pos:
      return {omega, s, -s};
    case AttackLabel::sep_anti_neg:
      return {omega, -s, s};
    case AttackLabel::custom:
      return {omega, cls.g, cls.g_prime};
  }
  throw InvalidArgument("attack_from_class: unknown label");
}

CorrelationKind classify(const AttackParams& a) {
  require_physical(a);
  if (std::abs(a.g) <= kCollectiveTolerance && std::abs(a.g_prime) <= kCollectiveTolerance) {
    return CorrelationKind::collective;
  }
  return ppt_separable(eve_cm(a)) ? CorrelationKind::separable_correlated : CorrelationKind::entangled;
}

std::vector<AttackParams> physical_region_grid(double omega, double step) {
  require_omega(omega, "physical_region_grid");
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidArgument("physical_region_grid: step must be positive");
  }
  const auto n = static_cast<long>(std::floor(omega / step + 1e-9));
  std::vector<AttackParams> out;
  for (long i = -n; i <= n; ++i) {
    for (long j = -n; j <= n; ++j) {
      const AttackParams p{omega, static_cast<double>(i) * step, static_cast<double>(j) * step};
      if (is_physical(p)) out.push_back(p);
    }
  }
  return out;
}

}  // namespace cvqkd
