#include "cvqkd/errors.hpp"
#include "cvqkd/kernels.hpp"

namespace cvqkd::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(CVQKD_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() {
  static const Isa best = supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  return best;
}

void keyrate_batch(double T, double omega, std::span<const double> g, std::span<const double> g_prime,
                   std::span<double> rate, Isa isa) {
  if (g.size() != rate.size() || g_prime.size() != rate.size()) {
    throw InvalidArgument("keyrate_batch: input and output lengths differ");
  }
  if (!supported(isa)) {
    throw InvalidArgument("keyrate_batch: kernel variant not available on this CPU");
  }
#if defined(CVQKD_HAVE_AVX2)
  if (isa == Isa::avx2) {
    avx2::keyrate_batch(T, omega, g, g_prime, rate);
    return;
  }
#endif
  scalar::keyrate_batch(T, omega, g, g_prime, rate);
}

void entropic_h_batch(std::span<const double> nu, std::span<double> out, Isa isa) {
  if (nu.size() != out.size()) {
    throw InvalidArgument("entropic_h_batch: input and output lengths differ");
  }
  if (!supported(isa)) {
    throw InvalidArgument("entropic_h_batch: kernel variant not available on this CPU");
  }
#if defined(CVQKD_HAVE_AVX2)
  if (isa == Isa::avx2) {
    avx2::entropic_h_batch(nu, out);
    return;
  }
#endif
  scalar::entropic_h_batch(nu, out);
}

}  // namespace cvqkd::kernels
