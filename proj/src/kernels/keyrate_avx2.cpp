// Built with -mavx2 -mfma; only reached through dispatch after a CPU check.

#include <immintrin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "cvqkd/kernels.hpp"

namespace cvqkd::kernels::avx2 {

namespace {

constexpr double kE = 2.718281828459045235360287471352662;
constexpr double kLog2E = 1.442695040888963407359924681001892;
constexpr double kSqrt2 = 1.414213562373095048801688724209698;

// ln(m) = 2 atanh(s), s = (m - 1)/(m + 1), |s| <= 3 - 2 sqrt(2) for
// m in [1/sqrt2, sqrt2]. Twelve odd terms reach below 1e-18.
constexpr std::array<double, 12> kAtanhCoeffs{
    1.0 / 23, 1.0 / 21, 1.0 / 19, 1.0 / 17, 1.0 / 15, 1.0 / 13,
    1.0 / 11, 1.0 / 9,  1.0 / 7,  1.0 / 5,  1.0 / 3,  1.0,
};

/// log2 for positive, normal, finite lanes.
inline __m256d log2_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i mantissa_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  const __m256i two52_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);

  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mantissa_mask), one_bits));
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, two52_bits)), two52);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256d high = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), high);
  e = _mm256_add_pd(e, _mm256_and_pd(high, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(kAtanhCoeffs[0]);
  for (std::size_t k = 1; k < kAtanhCoeffs.size(); ++k) {
    poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(kAtanhCoeffs[k]));
  }
  const __m256d ln_m = _mm256_mul_pd(_mm256_add_pd(s, s), poly);
  return _mm256_fmadd_pd(ln_m, _mm256_set1_pd(kLog2E), e);
}

inline __m256d entropic_h_pd(__m256d nu) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  nu = _mm256_max_pd(nu, one);
  const __m256d a = _mm256_mul_pd(half, _mm256_add_pd(nu, one));
  const __m256d b = _mm256_mul_pd(half, _mm256_sub_pd(nu, one));
  // b == 0 contributes 0 log 0 := 0; feed log2 a harmless argument there.
  const __m256d pure = _mm256_cmp_pd(b, _mm256_setzero_pd(), _CMP_LE_OQ);
  const __m256d b_safe = _mm256_blendv_pd(b, one, pure);
  const __m256d tb = _mm256_andnot_pd(pure, _mm256_mul_pd(b, log2_pd(b_safe)));
  const __m256d direct = _mm256_sub_pd(_mm256_mul_pd(a, log2_pd(a)), tb);

  // Same split as the scalar entropic_h: for b > 1 use log2 b + a log2(1 + 1/b),
  // with log2(1 + x) = log2(u) x / (u - 1), u = fl(1 + x), which stays accurate
  // where the direct form cancels.
  const __m256d large = _mm256_cmp_pd(b, one, _CMP_GT_OQ);
  const __m256d x = _mm256_div_pd(one, _mm256_blendv_pd(one, b, large));
  const __m256d u = _mm256_add_pd(one, x);
  const __m256d um1 = _mm256_sub_pd(u, one);
  const __m256d exact = _mm256_cmp_pd(um1, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d ratio = _mm256_div_pd(x, _mm256_blendv_pd(um1, one, exact));
  const __m256d log1p2 = _mm256_blendv_pd(_mm256_mul_pd(log2_pd(u), ratio), _mm256_mul_pd(x, _mm256_set1_pd(kLog2E)), exact);
  const __m256d stable = _mm256_fmadd_pd(a, log1p2, log2_pd(_mm256_blendv_pd(one, b, large)));
  return _mm256_blendv_pd(direct, stable, large);
}

inline __m256d keyrate_pd(__m256d g, __m256d gp, __m256d omega, __m256d c, __m256d delta, __m256d corr,
                          __m256d lead) {
  const __m256d nu1 = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_sub_pd(omega, g), _mm256_sub_pd(omega, gp)));
  const __m256d nu2 = _mm256_sqrt_pd(_mm256_mul_pd(_mm256_add_pd(omega, g), _mm256_add_pd(omega, gp)));
  const __m256d nubar1 =
      _mm256_sqrt_pd(_mm256_mul_pd(_mm256_fmadd_pd(g, c, omega), _mm256_fmadd_pd(gp, c, omega)));
  const __m256d sigma = _mm256_fmadd_pd(g, corr, delta);
  const __m256d sigma_p = _mm256_fmadd_pd(gp, corr, delta);
  __m256d r = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), log2_pd(_mm256_mul_pd(sigma, sigma_p)), lead);
  r = _mm256_sub_pd(r, entropic_h_pd(nu1));
  r = _mm256_sub_pd(r, entropic_h_pd(nu2));
  return _mm256_add_pd(r, entropic_h_pd(nubar1));
}

}  // namespace

void log2_batch(std::span<const double> x, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= out.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i, log2_pd(_mm256_loadu_pd(x.data() + i)));
  }
  if (i < out.size()) {
    alignas(32) std::array<double, 4> buf{1.0, 1.0, 1.0, 1.0};
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(i), x.end(), buf.begin());
    _mm256_store_pd(buf.data(), log2_pd(_mm256_load_pd(buf.data())));
    std::copy_n(buf.begin(), out.size() - i, out.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

void entropic_h_batch(std::span<const double> nu, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= out.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i, entropic_h_pd(_mm256_loadu_pd(nu.data() + i)));
  }
  if (i < out.size()) {
    alignas(32) std::array<double, 4> buf{1.0, 1.0, 1.0, 1.0};
    std::copy(nu.begin() + static_cast<std::ptrdiff_t>(i), nu.end(), buf.begin());
    _mm256_store_pd(buf.data(), entropic_h_pd(_mm256_load_pd(buf.data())));
    std::copy_n(buf.begin(), out.size() - i, out.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

void keyrate_batch(double T, double omega, std::span<const double> g, std::span<const double> g_prime,
                   std::span<double> rate) {
  const double rt = std::sqrt(T);
  const __m256d w = _mm256_set1_pd(omega);
  const __m256d c = _mm256_set1_pd(2.0 * rt / (1.0 + T));
  const __m256d delta = _mm256_set1_pd(1.0 + T * T + (1.0 - T * T) * omega);
  const __m256d corr = _mm256_set1_pd(2.0 * (1.0 - T) * rt);
  const __m256d lead = _mm256_set1_pd(std::log2(2.0 * T * (1.0 + T) / (kE * (1.0 - T))));

  const std::size_t n = rate.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vg = _mm256_loadu_pd(g.data() + i);
    const __m256d vgp = _mm256_loadu_pd(g_prime.data() + i);
    _mm256_storeu_pd(rate.data() + i, keyrate_pd(vg, vgp, w, c, delta, corr, lead));
  }
  if (i < n) {
    alignas(32) std::array<double, 4> bg{};
    alignas(32) std::array<double, 4> bgp{};
    alignas(32) std::array<double, 4> br{};
    std::copy(g.begin() + static_cast<std::ptrdiff_t>(i), g.end(), bg.begin());
    std::copy(g_prime.begin() + static_cast<std::ptrdiff_t>(i), g_prime.end(), bgp.begin());
    _mm256_store_pd(br.data(),
                    keyrate_pd(_mm256_load_pd(bg.data()), _mm256_load_pd(bgp.data()), w, c, delta, corr, lead));
    std::copy_n(br.begin(), n - i, rate.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

}  // namespace cvqkd::kernels::avx2
