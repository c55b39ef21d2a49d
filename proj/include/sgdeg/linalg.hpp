#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include <Eigen/Dense>

namespace sgdeg {

struct DeterminantSign {
  /// -1, 0 or +1; 0 when |det| of the row-equilibrated matrix is below the
  /// threshold.
  int sign = 0;
  /// |det| after scaling every row to unit max-norm.
  double equilibrated_abs = 0.0;
};

/// Sign of det(m) from Gaussian elimination with partial pivoting. Rows are
/// first scaled to unit max-norm (a positive factor, so the sign is kept) to
/// make `threshold` insensitive to the overall scale of m.
inline DeterminantSign determinant_sign(Eigen::MatrixXd m, double threshold) {
  const Eigen::Index n = m.rows();
  DeterminantSign out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = m.row(i).cwiseAbs().maxCoeff();
    if (r == 0.0) return out;
    m.row(i) /= r;
  }
  int sign = 1;
  double abs_det = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    m.col(k).tail(n - k).cwiseAbs().maxCoeff(&p);
    p += k;
    if (m(p, k) == 0.0) return out;
    if (p != k) {
      m.row(p).swap(m.row(k));
      sign = -sign;
    }
    const double pivot = m(k, k);
    if (pivot < 0.0) sign = -sign;
    abs_det *= std::abs(pivot);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = m(i, k) / pivot;
      if (f != 0.0) m.row(i).tail(n - k) -= f * m.row(k).tail(n - k);
    }
  }
  out.equilibrated_abs = abs_det;
  out.sign = abs_det < threshold ? 0 : sign;
  return out;
}

/// Solves a x = b; nullopt when a is numerically singular.
inline std::optional<Eigen::VectorXd> solve_dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) return std::nullopt;
  Eigen::VectorXd x = lu.solve(b);
  if (!x.allFinite()) return std::nullopt;
  return x;
}

}  // namespace sgdeg
