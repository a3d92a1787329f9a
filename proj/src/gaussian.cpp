#include "cvqkd/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace cvqkd {

double entropic_h(double nu) {
  if (std::isnan(nu) || nu < 1.0 - kBonaFideTolerance) {
    throw DomainError("entropic_h: nu = " + std::to_string(nu) + " is below 1");
  }
  if (nu <= 1.0) return 0.0;
  const double a = 0.5 * (nu + 1.0);
  const double b = 0.5 * (nu - 1.0);
  if (b <= 1.0) return a * std::log2(a) - b * std::log2(b);
  // a log a - b log b = log b + a log(1 + 1/b) since a - b = 1; the direct
  // form loses ~nu * 1e-16 bits to cancellation for large nu.
  return std::log2(b) + a * std::log1p(1.0 / b) * std::numbers::log2e;
}

double entropic_h_asymptotic(double nu) {
  if (!(nu > 0.0)) {
    throw DomainError("entropic_h_asymptotic: nu must be positive");
  }
  return std::log2(0.5 * std::numbers::e * nu);
}

double von_neumann_entropy(const SymplecticSpectrum& spectrum) {
  double s = 0.0;
  for (double nu : spectrum.values) s += entropic_h(nu);
  return s;
}

}  // namespace cvqkd
