#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "cjsr/error.hpp"

namespace cjsr {

using Matrix = Eigen::MatrixXd;

/// Induced operator norms; all sub-multiplicative.
enum class NormKind {
  RowSum,    // induced infinity-norm
  ColSum,    // induced 1-norm
  Spectral,  // induced 2-norm
};

inline std::string_view to_string(NormKind k) {
  switch (k) {
    case NormKind::RowSum: return "rowsum";
    case NormKind::ColSum: return "colsum";
    case NormKind::Spectral: return "spectral";
  }
  return "?";
}

inline NormKind parse_norm(std::string_view s) {
  if (s == "rowsum") return NormKind::RowSum;
  if (s == "colsum") return NormKind::ColSum;
  if (s == "spectral") return NormKind::Spectral;
  throw Error(ErrorCode::ParseError, "unknown norm '" + std::string(s) + "'");
}

namespace detail {

inline void check_square_finite(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::InvalidMatrix, "matrix must be square and non-empty");
  if (!m.allFinite()) throw Error(ErrorCode::InvalidMatrix, "matrix has non-finite entries");
}

/// Closed form for d <= 2 from the characteristic polynomial.
inline double spectral_radius_small(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  const double half_trace = 0.5 * (m(0, 0) + m(1, 1));
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double disc = half_trace * half_trace - det;
  if (disc >= 0) return std::abs(half_trace) + std::sqrt(disc);
  return std::sqrt(det);  // complex pair, |lambda|^2 = det
}

inline double spectral_radius_general(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::InvalidMatrix, "eigenvalue iteration did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Modulus of the dominant eigenvalue.
inline double spectral_radius(const Matrix& m) {
  detail::check_square_finite(m);
  if (m.rows() <= 2) return detail::spectral_radius_small(m);
  return detail::spectral_radius_general(m);
}

inline double operator_norm(const Matrix& m, NormKind k) {
  detail::check_square_finite(m);
  switch (k) {
    case NormKind::RowSum: return m.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::ColSum: return m.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::Spectral: {
      Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m, Eigen::EigenvaluesOnly);
      return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
    }
  }
  return 0;
}

}  // namespace cjsr
