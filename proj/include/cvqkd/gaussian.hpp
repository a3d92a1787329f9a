#pragma once

// Gaussian-state algebra on covariance matrices in shot-noise units.
//
// Conventions:
//   * vacuum variance is 1;
//   * quadratures are interleaved per mode, (q1, p1, q2, p2, ...), so the
//     symplectic form is block diagonal;
//   * mode indices are zero based.
//
// Everything is templated on the scalar so the same code runs in binary64 and
// in `Extended` precision. Spectra and entropies are always reported as
// double.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvqkd/errors.hpp"
#include "cvqkd/precision.hpp"

namespace cvqkd {

inline constexpr double kBonaFideTolerance = 1e-9;
inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kSymplecticTolerance = 1e-10;
inline constexpr double kDegeneracyTolerance = 1e-8;

template <typename Scalar>
using DynMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using ModeList = std::vector<std::size_t>;

namespace detail {

template <typename Scalar>
double max_abs(const DynMatrix<Scalar>& m) {
  double out = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      using std::abs;
      out = std::max(out, to_double(abs(m(r, c))));
    }
  }
  return out;
}

template <typename Scalar>
DynMatrix<Scalar> symmetrized(const DynMatrix<Scalar>& m) {
  DynMatrix<Scalar> t = m.transpose();
  return (m + t) * Scalar(0.5);
}

inline std::vector<Eigen::Index> quadrature_indices(const ModeList& modes) {
  std::vector<Eigen::Index> out;
  out.reserve(2 * modes.size());
  for (std::size_t m : modes) {
    out.push_back(static_cast<Eigen::Index>(2 * m));
    out.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  return out;
}

inline void check_mode_list(const ModeList& modes, std::size_t n, const char* what) {
  if (modes.empty()) {
    throw InvalidArgument(std::string(what) + ": empty mode list");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t m : modes) {
    if (m >= n) {
      throw InvalidArgument(std::string(what) + ": mode index " + std::to_string(m) +
                            " out of range for " + std::to_string(n) + " modes");
    }
    if (seen[m]) {
      throw InvalidArgument(std::string(what) + ": repeated mode index " + std::to_string(m));
    }
    seen[m] = true;
  }
}

}  // namespace detail

/// Omega for n modes: direct sum of n copies of [[0, 1], [-1, 0]].
template <typename Scalar = double>
DynMatrix<Scalar> symplectic_form(std::size_t n) {
  if (n == 0) {
    throw InvalidArgument("symplectic_form: mode count must be at least 1");
  }
  const auto dim = static_cast<Eigen::Index>(2 * n);
  DynMatrix<Scalar> omega = DynMatrix<Scalar>::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = Scalar(1);
    omega(k + 1, k) = Scalar(-1);
  }
  return omega;
}

/// Real symmetric 2n x 2n second-moment matrix. Construction checks shape
/// and symmetry only; physicality is a separate question (see
/// `is_bona_fide`), because unphysical matrices are legitimate values to
/// reason about.
template <typename Scalar = double>
class CovarianceMatrix {
 public:
  using Matrix = DynMatrix<Scalar>;

  explicit CovarianceMatrix(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols() || m_.rows() % 2 != 0) {
      throw InvalidArgument("CovarianceMatrix: expected a non-empty square matrix of even dimension, got " +
                            std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
    }
    for (Eigen::Index c = 0; c < m_.cols(); ++c) {
      for (Eigen::Index r = 0; r < m_.rows(); ++r) {
        if (!std::isfinite(to_double(m_(r, c)))) {
          throw InvalidArgument("CovarianceMatrix: non-finite entry");
        }
      }
    }
    const double scale = std::max(1.0, detail::max_abs<Scalar>(m_));
    const Matrix asym = m_ - m_.transpose();
    if (detail::max_abs<Scalar>(asym) > kSymmetryTolerance * scale) {
      throw InvalidArgument("CovarianceMatrix: matrix is not symmetric");
    }
  }

  static CovarianceMatrix vacuum(std::size_t modes) {
    if (modes == 0) throw InvalidArgument("CovarianceMatrix::vacuum: zero modes");
    const auto dim = static_cast<Eigen::Index>(2 * modes);
    return CovarianceMatrix(Matrix::Identity(dim, dim));
  }

  /// Single-mode thermal state with variance `nu` (nu >= 1).
  static CovarianceMatrix thermal(const Scalar& nu) {
    Matrix m = Matrix::Identity(2, 2) * nu;
    return CovarianceMatrix(std::move(m));
  }

  /// Two-mode squeezed vacuum with local variance mu:
  /// [[mu I, sqrt(mu^2-1) Z], [sqrt(mu^2-1) Z, mu I]].
  static CovarianceMatrix two_mode_squeezed(const Scalar& mu) {
    if (mu < Scalar(1)) throw InvalidArgument("two_mode_squeezed: variance must be >= 1");
    using std::sqrt;
    const Scalar c = sqrt(mu * mu - Scalar(1));
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = mu;
    m(0, 2) = m(2, 0) = c;
    m(1, 3) = m(3, 1) = -c;
    return CovarianceMatrix(std::move(m));
  }

  std::size_t modes() const noexcept { return static_cast<std::size_t>(m_.rows() / 2); }
  const Matrix& matrix() const noexcept { return m_; }
  Scalar operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  /// 2x2 block coupling modes i and j.
  Matrix block(std::size_t i, std::size_t j) const {
    return m_.block(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(2 * j), 2, 2);
  }

  template <typename To>
  CovarianceMatrix<To> cast() const {
    return CovarianceMatrix<To>(m_.template cast<To>());
  }

 private:
  Matrix m_;
};

/// Real 2n x 2n matrix with S Omega S^T = Omega (checked to 1e-10).
template <typename Scalar = double>
class SymplecticMatrix {
 public:
  using Matrix = DynMatrix<Scalar>;

  explicit SymplecticMatrix(Matrix entries) : s_(std::move(entries)) {
    if (s_.rows() == 0 || s_.rows() != s_.cols() || s_.rows() % 2 != 0) {
      throw InvalidArgument("SymplecticMatrix: expected a non-empty square matrix of even dimension");
    }
    const Matrix omega = symplectic_form<Scalar>(modes());
    const Matrix residual = s_ * omega * s_.transpose() - omega;
    if (detail::max_abs<Scalar>(residual) > kSymplecticTolerance) {
      throw InvalidArgument("SymplecticMatrix: S Omega S^T != Omega");
    }
  }

  static SymplecticMatrix identity(std::size_t modes) {
    const auto dim = static_cast<Eigen::Index>(2 * modes);
    return SymplecticMatrix(Matrix::Identity(dim, dim));
  }

  std::size_t modes() const noexcept { return static_cast<std::size_t>(s_.rows() / 2); }
  const Matrix& matrix() const noexcept { return s_; }

  /// Composition: (this * other) acts as `other` first.
  SymplecticMatrix operator*(const SymplecticMatrix& other) const {
    if (other.modes() != modes()) throw InvalidArgument("SymplecticMatrix: mode count mismatch");
    return SymplecticMatrix(s_ * other.s_);
  }

 private:
  Matrix s_;
};

/// Symplectic eigenvalues, sorted descending.
struct SymplecticSpectrum {
  std::vector<double> values;

  double min() const { return values.empty() ? 0.0 : values.back(); }
  double max() const { return values.empty() ? 0.0 : values.front(); }
  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
};

/// Moduli of the +-i nu eigenvalue pairs of Omega V, via a general real
/// eigensolver (no standard form is assumed).
///
/// Throws UnphysicalState when V is not positive definite and NumericalError
/// when the eigenvalues fail to pair as purely imaginary +-i nu (relative
/// residue above 1e-8).
template <typename Scalar>
SymplecticSpectrum symplectic_spectrum(const CovarianceMatrix<Scalar>& v) {
  using Matrix = DynMatrix<Scalar>;
  const Matrix& m = v.matrix();
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw UnphysicalState("symplectic_spectrum: covariance matrix is not positive definite");
  }
  // Complex Schur rather than the real one: the real QR iteration can stall
  // on nearly decoupled degenerate +-i nu pairs (e.g. thermal ancillas with
  // a 1e-13 correlation).
  using Complex = std::complex<Scalar>;
  using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const ComplexMatrix om = (symplectic_form<Scalar>(v.modes()) * m).template cast<Complex>();
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(om, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symplectic_spectrum: eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  std::vector<double> moduli;
  moduli.reserve(static_cast<std::size_t>(ev.size()));
  double scale = 1.0;
  double worst_real = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    using std::abs;
    const double im = to_double(abs(ev[k].imag()));
    moduli.push_back(im);
    scale = std::max(scale, im);
    worst_real = std::max(worst_real, to_double(abs(ev[k].real())));
  }
  if (worst_real > kDegeneracyTolerance * scale) {
    throw NumericalError("symplectic_spectrum: eigenvalues of Omega V have a real part (residue " +
                         std::to_string(worst_real) + ")");
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  SymplecticSpectrum out;
  out.values.reserve(moduli.size() / 2);
  for (std::size_t k = 0; k + 1 < moduli.size(); k += 2) {
    if (std::abs(moduli[k] - moduli[k + 1]) > kDegeneracyTolerance * scale) {
      throw NumericalError("symplectic_spectrum: eigenvalues do not pair as +-i nu");
    }
    out.values.push_back(0.5 * (moduli[k] + moduli[k + 1]));
  }
  return out;
}

/// Bona fide iff positive definite with every symplectic eigenvalue >= 1 - 1e-9.
template <typename Scalar>
bool is_bona_fide(const CovarianceMatrix<Scalar>& v) {
  try {
    return symplectic_spectrum(v).min() >= 1.0 - kBonaFideTolerance;
  } catch (const UnphysicalState&) {
    return false;
  }
}

/// h(nu) = ((nu+1)/2) log2((nu+1)/2) - ((nu-1)/2) log2((nu-1)/2), in bits.
/// Values in [1 - 1e-9, 1) are clamped to 1; anything lower is a DomainError.
double entropic_h(double nu);

/// Large-nu form of h: log2((e/2) nu).
double entropic_h_asymptotic(double nu);

double von_neumann_entropy(const SymplecticSpectrum& spectrum);

template <typename Scalar>
double von_neumann_entropy(const CovarianceMatrix<Scalar>& v) {
  return von_neumann_entropy(symplectic_spectrum(v));
}

template <typename Scalar>
CovarianceMatrix<Scalar> apply_symplectic(const SymplecticMatrix<Scalar>& s, const CovarianceMatrix<Scalar>& v) {
  if (s.modes() != v.modes()) {
    throw InvalidArgument("apply_symplectic: symplectic acts on " + std::to_string(s.modes()) +
                          " modes, covariance matrix has " + std::to_string(v.modes()));
  }
  DynMatrix<Scalar> out = s.matrix() * v.matrix() * s.matrix().transpose();
  return CovarianceMatrix<Scalar>(detail::symmetrized<Scalar>(out));
}

/// Direct sum V1 (+) V2; modes of V2 follow those of V1.
template <typename Scalar>
CovarianceMatrix<Scalar> tensor(const CovarianceMatrix<Scalar>& a, const CovarianceMatrix<Scalar>& b) {
  const Eigen::Index na = a.matrix().rows();
  const Eigen::Index nb = b.matrix().rows();
  DynMatrix<Scalar> out = DynMatrix<Scalar>::Zero(na + nb, na + nb);
  out.topLeftCorner(na, na) = a.matrix();
  out.bottomRightCorner(nb, nb) = b.matrix();
  return CovarianceMatrix<Scalar>(std::move(out));
}

/// Reduced state on `keep`, in the order given (so it can also reorder modes).
template <typename Scalar>
CovarianceMatrix<Scalar> partial_trace(const CovarianceMatrix<Scalar>& v, const ModeList& keep) {
  detail::check_mode_list(keep, v.modes(), "partial_trace");
  const auto idx = detail::quadrature_indices(keep);
  DynMatrix<Scalar> out = v.matrix()(idx, idx);
  return CovarianceMatrix<Scalar>(std::move(out));
}

/// Heterodyne (both quadratures, unit added vacuum noise) on `measured`;
/// returns the conditional covariance of the remaining modes in ascending
/// order:  V_keep - C (V_meas + I)^-1 C^T.  The result does not depend on the
/// measurement outcome.
template <typename Scalar>
CovarianceMatrix<Scalar> heterodyne_condition(const CovarianceMatrix<Scalar>& v, const ModeList& measured) {
  using Matrix = DynMatrix<Scalar>;
  const std::size_t n = v.modes();
  detail::check_mode_list(measured, n, "heterodyne_condition");
  if (measured.size() >= n) {
    throw InvalidArgument("heterodyne_condition: measured set must be a proper subset of the modes");
  }
  std::vector<bool> is_measured(n, false);
  for (std::size_t m : measured) is_measured[m] = true;
  ModeList keep;
  for (std::size_t m = 0; m < n; ++m) {
    if (!is_measured[m]) keep.push_back(m);
  }
  const auto ki = detail::quadrature_indices(keep);
  const auto mi = detail::quadrature_indices(measured);
  const Matrix a = v.matrix()(ki, ki);
  const Matrix c = v.matrix()(ki, mi);
  Matrix b = v.matrix()(mi, mi);
  b += Matrix::Identity(b.rows(), b.cols());
  Eigen::LLT<Matrix> llt(b);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("heterodyne_condition: V_meas + I is singular");
  }
  const Matrix x = llt.solve(Matrix(c.transpose()));
  Matrix out = a - c * x;
  return CovarianceMatrix<Scalar>(detail::symmetrized<Scalar>(out));
}

/// Two-mode beam splitter acting on (mode_a, mode_b) inside n modes:
///   a' =  sqrt(T) a + sqrt(1-T) b
///   b' = -sqrt(1-T) a + sqrt(T) b
/// identically on q and p.
template <typename Scalar = double>
SymplecticMatrix<Scalar> beam_splitter(double transmissivity, std::size_t mode_a, std::size_t mode_b,
                                       std::size_t n) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw InvalidArgument("beam_splitter: transmissivity must lie in [0, 1]");
  }
  if (mode_a >= n || mode_b >= n || mode_a == mode_b) {
    throw InvalidArgument("beam_splitter: need two distinct mode indices below " + std::to_string(n));
  }
  using std::sqrt;
  const Scalar t(transmissivity);
  const Scalar c = sqrt(t);
  const Scalar s = sqrt(Scalar(1) - t);
  const auto dim = static_cast<Eigen::Index>(2 * n);
  DynMatrix<Scalar> m = DynMatrix<Scalar>::Identity(dim, dim);
  for (Eigen::Index k = 0; k < 2; ++k) {
    const auto a = static_cast<Eigen::Index>(2 * mode_a) + k;
    const auto b = static_cast<Eigen::Index>(2 * mode_b) + k;
    m(a, a) = c;
    m(b, b) = c;
    m(a, b) = s;
    m(b, a) = -s;
  }
  return SymplecticMatrix<Scalar>(std::move(m));
}

/// PPT test for a two-mode state: flip the sign of p on the second mode and
/// require a bona fide result. Necessary and sufficient for 1x1 Gaussian
/// states.
template <typename Scalar>
bool ppt_separable(const CovarianceMatrix<Scalar>& v) {
  if (v.modes() != 2) {
    throw InvalidArgument("ppt_separable: expected a two-mode covariance matrix, got " +
                          std::to_string(v.modes()) + " modes");
  }
  DynMatrix<Scalar> pt = v.matrix();
  for (Eigen::Index k = 0; k < 4; ++k) {
    if (k != 3) {
      pt(3, k) = -pt(3, k);
      pt(k, 3) = -pt(k, 3);
    }
  }
  return symplectic_spectrum(CovarianceMatrix<Scalar>(std::move(pt))).min() >= 1.0 - kBonaFideTolerance;
}

}  // namespace cvqkd
