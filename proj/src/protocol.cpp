#include "cvqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cvqkd {

namespace {

void require_transmissivity(double T, const char* where) {
  if (!(T > 0.0 && T < 1.0)) {
    throw InvalidArgument(std::string(where) + ": transmissivity must lie in (0, 1)");
  }
}

void require_modulation(double mu, const char* where) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw InvalidArgument(std::string(where) + ": modulation must be positive");
  }
}

void require_asymptotic_inputs(double T, const AttackParams& a, double mu, const char* where) {
  require_transmissivity(T, where);
  require_modulation(mu, where);
  require_physical(a);
}

double checked_sqrt(double radicand, const char* what) {
  if (radicand < 0.0) {
    throw UnphysicalState(std::string(what) + ": negative radicand (unphysical regime)");
  }
  return std::sqrt(radicand);
}

}  // namespace

ProtocolParams ProtocolParams::displacement_limit(double T, double eta, double mu) {
  require_modulation(mu, "displacement_limit");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("displacement_limit: eta must lie in (0, 1)");
  return ProtocolParams{T, eta, mu + 1.0, mu / (1.0 - eta) + 1.0};
}

void ProtocolParams::validate() const {
  require_transmissivity(T, "ProtocolParams");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("ProtocolParams: eta must lie in (0, 1)");
  if (!(mu_B >= 1.0) || !std::isfinite(mu_B)) throw InvalidArgument("ProtocolParams: mu_B must be >= 1");
  if (!(mu_A >= 1.0) || !std::isfinite(mu_A)) throw InvalidArgument("ProtocolParams: mu_A must be >= 1");
}

double conditioning_deviation(const ProtocolParams& p, const AttackParams& a) {
  const auto substituted = symplectic_spectrum(conditional_cm<Extended>(p, a));
  const auto exact = symplectic_spectrum(conditional_cm_exact<Extended>(p, a));
  double worst = 0.0;
  for (std::size_t k = 0; k < substituted.size(); ++k) {
    worst = std::max(worst, std::abs(substituted[k] - exact[k]) / std::max(1.0, std::abs(exact[k])));
  }
  return worst;
}

TotalSpectrum asymptotic_total_spectrum(double T, const AttackParams& a, double mu) {
  require_asymptotic_inputs(T, a, mu, "asymptotic_total_spectrum");
  const double w = a.omega;
  TotalSpectrum s;
  s.nu1 = checked_sqrt((w - a.g) * (w - a.g_prime), "nu1");
  s.nu2 = checked_sqrt((w + a.g) * (w + a.g_prime), "nu2");
  s.nu3nu4_product = (1.0 - T) * (1.0 - T) * mu * mu;
  return s;
}

double total_entropy_asymptotic(double T, const AttackParams& a, double mu) {
  const auto s = asymptotic_total_spectrum(T, a, mu);
  constexpr double e = std::numbers::e;
  return entropic_h(s.nu1) + entropic_h(s.nu2) + std::log2(0.25 * e * e * s.nu3nu4_product);
}

ConditionalSpectrum conditional_spectrum_asymptotic(double T, const AttackParams& a, double mu) {
  require_asymptotic_inputs(T, a, mu, "conditional_spectrum_asymptotic");
  const double c = 2.0 * std::sqrt(T) / (1.0 + T);
  ConditionalSpectrum s;
  const double x = a.omega + a.g * c;
  const double y = a.omega + a.g_prime * c;
  if (x < 0.0 || y < 0.0) throw UnphysicalState("nubar1: negative radicand (unphysical regime)");
  s.nubar1 = std::sqrt(x * y);
  s.nubar2 = (1.0 - T * T) * mu;
  return s;
}

double conditional_entropy_asymptotic(double T, const AttackParams& a, double mu) {
  const auto s = conditional_spectrum_asymptotic(T, a, mu);
  return entropic_h(s.nubar1) + entropic_h_asymptotic(s.nubar2);
}

double holevo_asymptotic(double T, const AttackParams& a, double mu) {
  const auto total = asymptotic_total_spectrum(T, a, mu);
  const auto cond = conditional_spectrum_asymptotic(T, a, mu);
  return entropic_h(total.nu1) + entropic_h(total.nu2) - entropic_h(cond.nubar1) +
         std::log2(0.5 * std::numbers::e * (1.0 - T) / (1.0 + T) * mu);
}

MutualInformation mutual_information_asymptotic(double T, const AttackParams& a, double mu) {
  require_asymptotic_inputs(T, a, mu, "mutual_information_asymptotic");
  MutualInformation m;
  m.Delta = 1.0 + T * T + (1.0 - T * T) * a.omega;
  const double corr = 2.0 * (1.0 - T) * std::sqrt(T);
  m.sigma = m.Delta + a.g * corr;
  m.sigma_prime = m.Delta + a.g_prime * corr;
  if (!(m.sigma > 0.0) || !(m.sigma_prime > 0.0)) {
    throw UnphysicalState("mutual_information_asymptotic: non-positive conditional variance");
  }
  m.I_AB = 0.5 * std::log2(T * T * mu * mu / (m.sigma * m.sigma_prime));
  return m;
}

double keyrate_asymptotic(double T, const AttackParams& a) {
  require_transmissivity(T, "keyrate_asymptotic");
  require_physical(a);
  return detail::keyrate_core(T, a.omega, a.g, a.g_prime);
}

KeyRateReport key_rate_report(double T, const AttackParams& a, double mu) {
  const auto total = asymptotic_total_spectrum(T, a, mu);
  const auto cond = conditional_spectrum_asymptotic(T, a, mu);
  const auto mi = mutual_information_asymptotic(T, a, mu);
  KeyRateReport r;
  r.nu1 = total.nu1;
  r.nu2 = total.nu2;
  r.nu3nu4_product = total.nu3nu4_product;
  r.nubar1 = cond.nubar1;
  r.nubar2 = cond.nubar2;
  r.S_E = total_entropy_asymptotic(T, a, mu);
  r.S_E_cond = conditional_entropy_asymptotic(T, a, mu);
  r.I_AB = mi.I_AB;
  r.chi_EA = holevo_asymptotic(T, a, mu);
  r.R = keyrate_asymptotic(T, a);
  r.sigma = mi.sigma;
  r.sigma_prime = mi.sigma_prime;
  r.Delta = mi.Delta;
  return r;
}

}  // namespace cvqkd
