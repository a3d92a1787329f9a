#pragma once

// Reference computations and random generators shared by the test suites.
// The oracles deliberately avoid the library's code paths: the symplectic
// spectrum goes through a Cholesky factor and a symmetric eigenproblem
// instead of the general eigensolver on Omega V.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cvqkd/attacks.hpp"

namespace support {

using Eigen::MatrixXd;

inline MatrixXd omega_form(int modes) {
  MatrixXd om = MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    om(2 * k, 2 * k + 1) = 1.0;
    om(2 * k + 1, 2 * k) = -1.0;
  }
  return om;
}

/// V = L L^T, A = L^T Omega L is antisymmetric and similar to Omega V, so the
/// symplectic eigenvalues are the square roots of the (doubled) eigenvalues
/// of -A^2. Descending order.
inline std::vector<double> spectrum(const MatrixXd& v) {
  const int modes = static_cast<int>(v.rows() / 2);
  const MatrixXd l = v.llt().matrixL();
  const MatrixXd a = l.transpose() * omega_form(modes) * l;
  const MatrixXd sq = -(a * a);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (sq + sq.transpose()));
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), std::greater<>());
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < ev.size(); k += 2) out.push_back(std::sqrt(0.5 * (ev[k] + ev[k + 1])));
  return out;
}

inline double h(double nu) {
  if (nu <= 1.0) return 0.0;
  const double a = (nu + 1.0) / 2.0;
  const double b = (nu - 1.0) / 2.0;
  return a * std::log2(a) - b * std::log2(b);
}

/// Symplectic eigenvalues of [[w I, G], [G, w I]], G = diag(g, g').
inline std::pair<double, double> eve_spectrum(double w, double g, double gp) {
  const double s = std::abs(g + gp);
  const double plus = w * w + g * gp + w * s;
  const double minus = w * w + g * gp - w * s;
  return {std::sqrt(std::max(plus, 0.0)), std::sqrt(std::max(minus, 0.0))};
}

inline bool eve_physical(double w, double g, double gp) {
  if (!(std::abs(g) < w && std::abs(gp) < w)) return w == 1.0 && g == 0.0 && gp == 0.0;
  const double minus = w * w + g * gp - w * std::abs(g + gp);
  return minus >= 1.0 - 1e-9 && (w - g) * (w - gp) > 0.0 && (w + g) * (w + gp) > 0.0;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

 private:
  std::mt19937_64 engine_;
};

inline MatrixXd squeezer(int modes, int k, double r) {
  MatrixXd s = MatrixXd::Identity(2 * modes, 2 * modes);
  s(2 * k, 2 * k) = std::exp(-r);
  s(2 * k + 1, 2 * k + 1) = std::exp(r);
  return s;
}

inline MatrixXd rotation(int modes, int k, double phi) {
  MatrixXd s = MatrixXd::Identity(2 * modes, 2 * modes);
  s(2 * k, 2 * k) = std::cos(phi);
  s(2 * k, 2 * k + 1) = std::sin(phi);
  s(2 * k + 1, 2 * k) = -std::sin(phi);
  s(2 * k + 1, 2 * k + 1) = std::cos(phi);
  return s;
}

/// Explicit beam splitter between modes a and b (same convention as the
/// library: a' = c a + s b, b' = -s a + c b).
inline MatrixXd mixer(int modes, int a, int b, double t) {
  MatrixXd s = MatrixXd::Identity(2 * modes, 2 * modes);
  const double c = std::sqrt(t);
  const double d = std::sqrt(1.0 - t);
  for (int q = 0; q < 2; ++q) {
    s(2 * a + q, 2 * a + q) = c;
    s(2 * b + q, 2 * b + q) = c;
    s(2 * a + q, 2 * b + q) = d;
    s(2 * b + q, 2 * a + q) = -d;
  }
  return s;
}

/// Random Gaussian symplectic: layers of rotations, squeezers and beam
/// splitters.
inline MatrixXd random_symplectic(int modes, Rng& rng, double max_squeeze = 0.8) {
  MatrixXd s = MatrixXd::Identity(2 * modes, 2 * modes);
  for (int layer = 0; layer < 3; ++layer) {
    for (int k = 0; k < modes; ++k) {
      s = rotation(modes, k, rng.uniform(0.0, 6.283185307179586)) * s;
      s = squeezer(modes, k, rng.uniform(-max_squeeze, max_squeeze)) * s;
    }
    for (int k = 0; k + 1 < modes; ++k) s = mixer(modes, k, k + 1, rng.uniform(0.0, 1.0)) * s;
  }
  return s;
}

/// Random bona fide CM with symplectic eigenvalues drawn from [1, nu_max].
inline MatrixXd random_bona_fide(int modes, Rng& rng, double nu_max = 5.0) {
  MatrixXd d = MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) d(2 * k, 2 * k) = d(2 * k + 1, 2 * k + 1) = rng.uniform(1.0, nu_max);
  const MatrixXd s = random_symplectic(modes, rng);
  MatrixXd v = s * d * s.transpose();
  return 0.5 * (v + v.transpose());
}

/// Uniform draw of a physical (g, g') for thermal variance w by rejection.
inline cvqkd::AttackParams random_attack(double w, Rng& rng) {
  for (;;) {
    const double g = rng.uniform(-w, w);
    const double gp = rng.uniform(-w, w);
    if (eve_physical(w, g, gp)) return {w, g, gp};
  }
}

inline double max_abs_diff(const MatrixXd& a, const MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace support
