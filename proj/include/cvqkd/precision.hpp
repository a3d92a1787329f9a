#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace cvqkd {

/// 50 decimal digits. Needed wherever covariance entries span ~24 orders of
/// magnitude (displacement limit: mu_A ~ 1e12 next to unit-variance modes);
/// binary64 rounding of such a matrix already moves its small symplectic
/// eigenvalues by O(1).
using Extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
inline double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

}  // namespace cvqkd
