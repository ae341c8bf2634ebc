#ifndef CRM_LINALG_HPP
#define CRM_LINALG_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "crm/types.hpp"

namespace crm {

inline bool all_finite(const CMatrix& m) {
  return m.allFinite();
}

inline double hermiticity_residual(const CMatrix& m) {
  return (m - m.adjoint()).norm();
}

inline bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return hermiticity_residual(m) <= tol * std::max(1.0, m.norm());
}

/// Eigenvalues ascending, eigenvectors as the matching unitary column set.
struct HermitianEigenSystem {
  RVector eigenvalues;
  CMatrix eigenvectors;
};

/// Spectral factorization of a Hermitian matrix.
///
/// The input must be Hermitian within tol (relative Frobenius); the exact
/// Hermitian part (M + M*)/2 is what gets factorized, so reconstruction
/// matches the input to the same tolerance.
inline HermitianEigenSystem hermitian_eig(const CMatrix& m,
                                          double tol = default_tols().hermitian) {
  if (m.rows() != m.cols())
    throw NonSquareInput("hermitian_eig: matrix is " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  if (!is_hermitian(m, tol))
    throw NonHermitianInput("hermitian_eig: ||M - M*|| = " +
                            std::to_string(hermiticity_residual(m)));
  const CMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("hermitian_eig: iteration budget exhausted");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Singular values descending; M = left * diag(s) * right.adjoint().
struct SingularSystem {
  RVector singular_values;
  CMatrix left;
  CMatrix right;
};

inline SingularSystem svd(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("svd: iteration budget exhausted");
  return {solver.singularValues(), solver.matrixU(), solver.matrixV()};
}

inline Eigen::Index numerical_rank(const RVector& singular_values, double rank_tol) {
  if (singular_values.size() == 0) return 0;
  const double cut = rank_tol * singular_values(0);
  Eigen::Index r = 0;
  while (r < singular_values.size() && singular_values(r) > cut) ++r;
  return r;
}

/// Orthonormal basis of the column space (k x rank isometry).
inline CMatrix range_basis(const CMatrix& m, double rank_tol = default_tols().rank) {
  if (m.norm() == 0.0) return CMatrix::Zero(m.rows(), 0);
  SingularSystem s = svd(m);
  const Eigen::Index r = numerical_rank(s.singular_values, rank_tol);
  return s.left.leftCols(r);
}

/// Orthogonal projection onto the column space of m.
///
/// Hermitian and idempotent by construction; the zero matrix maps to the
/// zero projector.
inline CMatrix range_projector(const CMatrix& m, double rank_tol = default_tols().rank) {
  const CMatrix b = range_basis(m, rank_tol);
  if (b.cols() == 0) return CMatrix::Zero(m.rows(), m.rows());
  return b * b.adjoint();
}

struct PsdReport {
  bool ok = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double hermiticity = 0.0; // absolute ||M - M*||_F
};

/// PSD test: Hermitian within the configured tolerance and
/// lambda_min >= -psd_tol * max(1, lambda_max).
///
/// The eigenvalue diagnostics refer to the Hermitian part (M + M*)/2, which
/// coincides with the spectrum whenever the input actually is Hermitian.
inline PsdReport is_psd(const CMatrix& m, double psd_tol = default_tols().psd,
                        const Tolerances& tols = default_tols()) {
  if (m.rows() != m.cols())
    throw NonSquareInput("is_psd: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  PsdReport rep;
  rep.hermiticity = hermiticity_residual(m);
  const CMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("is_psd: eigensolver did not converge");
  rep.min_eigenvalue = solver.eigenvalues().minCoeff();
  rep.max_eigenvalue = solver.eigenvalues().maxCoeff();
  const bool hermitian_ok = rep.hermiticity <= tols.hermitian * std::max(1.0, m.norm());
  rep.ok = hermitian_ok &&
           rep.min_eigenvalue >= -psd_tol * std::max(1.0, rep.max_eigenvalue);
  return rep;
}

} // namespace crm

#endif // CRM_LINALG_HPP
