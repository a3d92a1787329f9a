#pragma once

// Two-way coherent-state protocol in the entanglement-based picture.
//
// Bob's EPR pair (B1, B1') with variance mu_B; B1' crosses the forward
// channel (beam splitter T with ancilla E1), meets Alice's beam splitter
// (transmissivity eta) together with A' from her EPR pair (A, A') of variance
// mu_A, and returns over the backward channel (beam splitter T with E2) as B2.
// The output modes are ordered (B1, A, A'', B2).
//
// Two routes to the 8x8 output covariance matrix are kept side by side:
// `total_cm` writes the closed form entry by entry, `total_cm_circuit`
// pushes the initial state through the beam splitters. They must agree.

#include <cmath>

#include "cvqkd/attacks.hpp"
#include "cvqkd/gaussian.hpp"

namespace cvqkd {

struct ProtocolParams {
  double T = 0.5;    ///< channel transmissivity per pass, (0, 1)
  double eta = 0.5;  ///< Alice's beam splitter, (0, 1)
  double mu_B = 1.0;  ///< Bob's EPR variance; modulation mu = mu_B - 1
  double mu_A = 1.0;  ///< Alice's EPR variance

  /// mu_B = mu + 1 and Alice's variance mu/(1 - eta) + 1, so that
  /// sqrt(eta) beta + sqrt(1 - eta) gamma -> beta + alpha as eta -> 1.
  static ProtocolParams displacement_limit(double T, double eta, double mu);

  void validate() const;
};

/// Output mode positions in total_cm.
namespace output_mode {
inline constexpr std::size_t B1 = 0;
inline constexpr std::size_t A = 1;
inline constexpr std::size_t A2 = 2;  ///< A'' (Alice's beam-splitter idler)
inline constexpr std::size_t B2 = 3;
}  // namespace output_mode

namespace detail {

template <typename Scalar>
struct TotalCoefficients {
  Scalar mu_B, mu_A, phi, theta, k, xi, tau, epsilon, g_epsilon, delta, g_delta;
};

template <typename Scalar>
TotalCoefficients<Scalar> total_coefficients(const ProtocolParams& p, double omega) {
  using std::sqrt;
  const Scalar t(p.T);
  const Scalar eta(p.eta);
  const Scalar mb(p.mu_B);
  const Scalar ma(p.mu_A);
  const Scalar w(omega);
  const Scalar one(1);
  TotalCoefficients<Scalar> c;
  c.mu_B = mb;
  c.mu_A = ma;
  c.phi = -sqrt(t * (one - eta) * (mb * mb - one));
  c.theta = t * sqrt(eta * (mb * mb - one));
  c.k = eta * ma + (one - eta) * (t * mb + (one - t) * w);
  c.xi = sqrt(eta * (ma * ma - one));
  c.tau = sqrt(t * (one - eta) * (ma * ma - one));
  c.epsilon = t * t * eta * mb + t * (one - eta) * ma + (t * eta + one) * (one - t) * w;
  c.g_epsilon = Scalar(2) * (one - t) * sqrt(eta * t);
  c.delta = sqrt(t * eta * (one - eta)) * (ma - t * mb - (one - t) * w);
  c.g_delta = -(one - t) * sqrt(one - eta);
  return c;
}

/// Writes diag(q, p) into block (i, j) and mirrors it into (j, i).
template <typename Scalar>
void put_block(DynMatrix<Scalar>& m, std::size_t i, std::size_t j, const Scalar& q, const Scalar& p) {
  const auto r = static_cast<Eigen::Index>(2 * i);
  const auto c = static_cast<Eigen::Index>(2 * j);
  m(r, c) = q;
  m(r + 1, c + 1) = p;
  m(c, r) = q;
  m(c + 1, r + 1) = p;
}

}  // namespace detail

/// Closed-form covariance of (B1, A, A'', B2).
template <typename Scalar = double>
CovarianceMatrix<Scalar> total_cm(const ProtocolParams& p, const AttackParams& a) {
  p.validate();
  if (!(a.omega >= 1.0)) throw InvalidArgument("total_cm: omega must be >= 1");
  const auto c = detail::total_coefficients<Scalar>(p, a.omega);
  const Scalar g(a.g);
  const Scalar gp(a.g_prime);
  using namespace output_mode;
  DynMatrix<Scalar> m = DynMatrix<Scalar>::Zero(8, 8);
  detail::put_block<Scalar>(m, B1, B1, c.mu_B, c.mu_B);
  detail::put_block<Scalar>(m, A, A, c.mu_A, c.mu_A);
  detail::put_block<Scalar>(m, B1, A2, c.phi, -c.phi);
  detail::put_block<Scalar>(m, B1, B2, c.theta, -c.theta);
  detail::put_block<Scalar>(m, A, A2, c.xi, -c.xi);
  detail::put_block<Scalar>(m, A, B2, c.tau, -c.tau);
  detail::put_block<Scalar>(m, A2, A2, c.k, c.k);
  detail::put_block<Scalar>(m, A2, B2, c.delta + c.g_delta * g, c.delta + c.g_delta * gp);
  detail::put_block<Scalar>(m, B2, B2, c.epsilon + c.g_epsilon * g, c.epsilon + c.g_epsilon * gp);
  return CovarianceMatrix<Scalar>(std::move(m));
}

/// Same matrix, built by simulating the optical circuit on six modes
/// (B1, B1', A, A', E1, E2) and tracing out Eve.
template <typename Scalar = double>
CovarianceMatrix<Scalar> total_cm_circuit(const ProtocolParams& p, const AttackParams& a) {
  p.validate();
  constexpr std::size_t kB1 = 0, kB1p = 1, kA = 2, kAp = 3, kE1 = 4, kE2 = 5, kModes = 6;
  const auto bob = CovarianceMatrix<Scalar>::two_mode_squeezed(Scalar(p.mu_B));
  const auto alice = CovarianceMatrix<Scalar>::two_mode_squeezed(Scalar(p.mu_A));
  const auto eve = eve_cm(a).template cast<Scalar>();
  auto state = tensor(tensor(bob, alice), eve);
  // Forward pass: B1' meets E1; the travelling mode stays in slot kB1p.
  state = apply_symplectic(beam_splitter<Scalar>(p.T, kB1p, kE1, kModes), state);
  // Alice: transmitted mode continues, the other port becomes A''.
  state = apply_symplectic(beam_splitter<Scalar>(p.eta, kB1p, kAp, kModes), state);
  // Backward pass.
  state = apply_symplectic(beam_splitter<Scalar>(p.T, kB1p, kE2, kModes), state);
  return partial_trace(state, {kB1, kA, kAp, kB1p});
}

/// Bob's reduced state (B1, B2): [[mu_B I, theta Z], [theta Z, eps I + g_eps G]].
template <typename Scalar = double>
CovarianceMatrix<Scalar> bob_cm(const ProtocolParams& p, const AttackParams& a) {
  p.validate();
  if (!(a.omega >= 1.0)) throw InvalidArgument("bob_cm: omega must be >= 1");
  const auto c = detail::total_coefficients<Scalar>(p, a.omega);
  DynMatrix<Scalar> m = DynMatrix<Scalar>::Zero(4, 4);
  detail::put_block<Scalar>(m, 0, 0, c.mu_B, c.mu_B);
  detail::put_block<Scalar>(m, 0, 1, c.theta, -c.theta);
  detail::put_block<Scalar>(m, 1, 1, c.epsilon + c.g_epsilon * Scalar(a.g), c.epsilon + c.g_epsilon * Scalar(a.g_prime));
  return CovarianceMatrix<Scalar>(std::move(m));
}

/// Bob's state conditioned on Alice's encoding, modelled by setting mu_A = 1.
template <typename Scalar = double>
CovarianceMatrix<Scalar> conditional_cm(const ProtocolParams& p, const AttackParams& a) {
  ProtocolParams q = p;
  q.mu_A = 1.0;
  return bob_cm<Scalar>(q, a);
}

/// Exact route: heterodyne A on the total state, keep (B1, B2).
template <typename Scalar = double>
CovarianceMatrix<Scalar> conditional_cm_exact(const ProtocolParams& p, const AttackParams& a) {
  const auto rest = heterodyne_condition(total_cm<Scalar>(p, a), {output_mode::A});
  // Remaining modes are (B1, A'', B2).
  return partial_trace(rest, {0, 2});
}

/// Largest relative gap between the symplectic spectra of `conditional_cm`
/// and `conditional_cm_exact`, computed in extended precision. Reported,
/// not asserted: the mu_A = 1 substitution is only exact in the limit.
double conditioning_deviation(const ProtocolParams& p, const AttackParams& a);

// ---------------------------------------------------------------------------
// Large-modulation closed forms. These take (T, attack, mu) and never need eta.

struct TotalSpectrum {
  double nu1 = 0.0;
  double nu2 = 0.0;
  double nu3nu4_product = 0.0;
};

struct ConditionalSpectrum {
  double nubar1 = 0.0;
  double nubar2 = 0.0;
};

struct MutualInformation {
  double I_AB = 0.0;
  double sigma = 0.0;
  double sigma_prime = 0.0;
  double Delta = 0.0;
};

struct KeyRateReport {
  double nu1 = 0.0;
  double nu2 = 0.0;
  double nu3nu4_product = 0.0;
  double nubar1 = 0.0;
  double nubar2 = 0.0;
  double S_E = 0.0;
  double S_E_cond = 0.0;
  double I_AB = 0.0;
  double chi_EA = 0.0;
  double R = 0.0;
  double sigma = 0.0;
  double sigma_prime = 0.0;
  double Delta = 0.0;
};

inline constexpr double kDefaultModulation = 1e6;

/// nu1 = sqrt((w-g)(w-g')), nu2 = sqrt((w+g)(w+g')), nu3 nu4 = (1-T)^2 mu^2.
TotalSpectrum asymptotic_total_spectrum(double T, const AttackParams& a, double mu);

/// h(nu1) + h(nu2) + log2((e^2/4)(1-T)^2 mu^2).
double total_entropy_asymptotic(double T, const AttackParams& a, double mu);

/// nubar1 = sqrt(w + 2g sqrt(T)/(1+T)) sqrt(w + 2g' sqrt(T)/(1+T)),
/// nubar2 = (1 - T^2) mu.
ConditionalSpectrum conditional_spectrum_asymptotic(double T, const AttackParams& a, double mu);

/// h(nubar1) + log2((e/2)(1-T^2) mu).
double conditional_entropy_asymptotic(double T, const AttackParams& a, double mu);

double holevo_asymptotic(double T, const AttackParams& a, double mu);

MutualInformation mutual_information_asymptotic(double T, const AttackParams& a, double mu);

/// log2(2T(1+T) / (e(1-T) sqrt(sigma sigma'))) - h(nu1) - h(nu2) + h(nubar1).
/// Independent of the modulation.
double keyrate_asymptotic(double T, const AttackParams& a);

KeyRateReport key_rate_report(double T, const AttackParams& a, double mu = kDefaultModulation);

namespace detail {

/// Key-rate body shared by `keyrate_asymptotic` and the scalar batch kernel.
/// No validation: the attack must already be known to be physical.
inline double keyrate_core(double T, double omega, double g, double g_prime) {
  const double rt = std::sqrt(T);
  const double nu1 = std::sqrt((omega - g) * (omega - g_prime));
  const double nu2 = std::sqrt((omega + g) * (omega + g_prime));
  const double c = 2.0 * rt / (1.0 + T);
  const double nubar1 = std::sqrt((omega + g * c) * (omega + g_prime * c));
  const double delta = 1.0 + T * T + (1.0 - T * T) * omega;
  const double corr = 2.0 * (1.0 - T) * rt;
  const double sigma = delta + g * corr;
  const double sigma_prime = delta + g_prime * corr;
  constexpr double kE = 2.718281828459045235360287471352662;
  return std::log2(2.0 * T * (1.0 + T) / (kE * (1.0 - T))) - 0.5 * std::log2(sigma * sigma_prime) -
         entropic_h(nu1) - entropic_h(nu2) + entropic_h(nubar1);
}

}  // namespace detail

}  // namespace cvqkd
