#pragma once

// Batched closed-form key rate over many (g, g') points at fixed (T, omega),
// the inner loop of the optimal-attack scan.
//
// `scalar` is the reference: it runs the exact code path of
// keyrate_asymptotic. `avx2` processes four points per iteration with its own
// log2; it agrees with the reference to ~1e-13 absolute on the rate. The
// dispatched entry point picks the best variant the CPU supports.

#include <span>
#include <string_view>

namespace cvqkd::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool supported(Isa isa);

/// Best supported variant.
Isa best_isa();

/// Inputs must be physical attacks with 0 < T < 1; nothing is validated here.
/// All spans must have the same length.
void keyrate_batch(double T, double omega, std::span<const double> g, std::span<const double> g_prime,
                   std::span<double> rate, Isa isa);

inline void keyrate_batch(double T, double omega, std::span<const double> g, std::span<const double> g_prime,
                          std::span<double> rate) {
  keyrate_batch(T, omega, g, g_prime, rate, best_isa());
}

/// h(nu) elementwise; nu below 1 is treated as 1.
void entropic_h_batch(std::span<const double> nu, std::span<double> out, Isa isa);

namespace scalar {
void keyrate_batch(double T, double omega, std::span<const double> g, std::span<const double> g_prime,
                   std::span<double> rate);
void entropic_h_batch(std::span<const double> nu, std::span<double> out);
}  // namespace scalar

#if defined(CVQKD_HAVE_AVX2)
namespace avx2 {
void keyrate_batch(double T, double omega, std::span<const double> g, std::span<const double> g_prime,
                   std::span<double> rate);
void entropic_h_batch(std::span<const double> nu, std::span<double> out);
void log2_batch(std::span<const double> x, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace cvqkd::kernels
