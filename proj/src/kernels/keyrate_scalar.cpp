#include <algorithm>

#include "cvqkd/kernels.hpp"
#include "cvqkd/protocol.hpp"

namespace cvqkd::kernels::scalar {

void keyrate_batch(double T, double omega, std::span<const double> g, std::span<const double> g_prime,
                   std::span<double> rate) {
  for (std::size_t i = 0; i < rate.size(); ++i) {
    rate[i] = cvqkd::detail::keyrate_core(T, omega, g[i], g_prime[i]);
  }
}

void entropic_h_batch(std::span<const double> nu, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = entropic_h(std::max(nu[i], 1.0));
  }
}

}  // namespace cvqkd::kernels::scalar
