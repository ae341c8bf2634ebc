#ifndef CRM_SUPEROP_HPP
#define CRM_SUPEROP_HPP

#include <string>

#include "crm/schmidt.hpp"
#include "crm/tensor.hpp"

namespace crm {

/// A linear map M_source -> M_target stored as its matrix in vec_f
/// coordinates: apply(X) = unvec_f(matrix * vec_f(X)).
///
/// Since vec_f is an isometry for the trace inner product, the adjoint of a
/// superoperator is the conjugate transpose of its matrix.
struct SuperOperator {
  Eigen::Index source_dim = 0;
  Eigen::Index target_dim = 0;
  CMatrix matrix; // target_dim^2 x source_dim^2

  SuperOperator() = default;
  SuperOperator(Eigen::Index source, Eigen::Index target, CMatrix m)
      : source_dim(source), target_dim(target), matrix(std::move(m)) {
    if (matrix.rows() != target_dim * target_dim ||
        matrix.cols() != source_dim * source_dim)
      throw DimensionMismatch("SuperOperator: matrix is " +
                              std::to_string(matrix.rows()) + "x" +
                              std::to_string(matrix.cols()));
  }

  CMatrix apply(const CMatrix& x) const {
    if (x.rows() != source_dim || x.cols() != source_dim)
      throw DimensionMismatch("SuperOperator::apply: argument is " +
                              std::to_string(x.rows()) + "x" +
                              std::to_string(x.cols()));
    return unvec_f(matrix * vec_f(x), target_dim, target_dim);
  }
};

/// G_A : M_k -> M_m, the map defined by tr(A (X (x) Y)) = tr(G_A(X) Y).
///
/// Built by applying the defining relation to the full matrix-unit basis;
/// entrywise G_A(E_ij)(p, q) = A(j*m + p, i*m + q).
inline SuperOperator g_of(const BipartiteOperator& a,
                          const Tolerances& tols = default_tols()) {
  if (!is_hermitian(a.mat, tols.hermitian))
    throw NonHermitianInput("g_of: input not Hermitian");
  const Eigen::Index k = a.k, m = a.m;
  CMatrix g(m * m, k * k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index p = 0; p < m; ++p)
        for (Eigen::Index q = 0; q < m; ++q)
          g(p * m + q, i * k + j) = a.mat(j * m + p, i * m + q);
  return {k, m, std::move(g)};
}

/// F_A : M_m -> M_k, the trace-inner-product adjoint of G_A.
///
/// Also built directly from the defining relation tr(A (X (x) Y)) =
/// tr(X F_A(Y)); entrywise F_A(E_pq)(i, j) = A(i*m + q, j*m + p).
inline SuperOperator f_of(const BipartiteOperator& a,
                          const Tolerances& tols = default_tols()) {
  if (!is_hermitian(a.mat, tols.hermitian))
    throw NonHermitianInput("f_of: input not Hermitian");
  const Eigen::Index k = a.k, m = a.m;
  CMatrix f(k * k, m * m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = 0; q < m; ++q)
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
          f(i * k + j, p * m + q) = a.mat(i * m + q, j * m + p);
  return {m, k, std::move(f)};
}

/// The self-adjoint positive map F_A o G_A : M_k -> M_k of a PSD operator.
inline SuperOperator fg_of(const BipartiteOperator& a,
                           const Tolerances& tols = default_tols()) {
  PsdReport psd = is_psd(a.mat, tols.psd, tols);
  if (!psd.ok)
    throw NotPsdInput("fg_of: input not PSD (min eigenvalue " +
                      std::to_string(psd.min_eigenvalue) + ")");
  SuperOperator g = g_of(a, tols);
  SuperOperator f = f_of(a, tols);
  return {a.k, a.k, f.matrix * g.matrix};
}

/// Perron fixed point of a self-adjoint positive map with PSD spectrum.
///
/// Power iteration starting from the identity: positivity keeps every
/// iterate PSD, so the limit is PSD even when the top eigenvalue is
/// degenerate. Returns the eigenvalue and the unit-trace fixed point.
inline std::pair<double, CMatrix> top_fixed_psd(const SuperOperator& l,
                                                const Tolerances& tols = default_tols()) {
  if (l.source_dim != l.target_dim)
    throw DimensionMismatch("top_fixed_psd: map is not an endomorphism");
  const Eigen::Index k = l.source_dim;
  CMatrix gamma = CMatrix::Identity(k, k);
  gamma /= gamma.norm();

  bool converged = false;
  for (int it = 0; it < tols.power_max_iter; ++it) {
    CMatrix next = l.apply(gamma);
    next = (next + next.adjoint()) / 2.0;
    const double nrm = next.norm();
    if (nrm <= tols.power)
      throw ZeroMap("top_fixed_psd: map annihilates the identity");
    next /= nrm;
    if ((next - gamma).norm() <= tols.power) {
      gamma = next;
      converged = true;
      break;
    }
    gamma = next;
  }
  if (!converged)
    throw NoConvergence("top_fixed_psd: no convergence after " +
                        std::to_string(tols.power_max_iter) + " iterations");

  const CMatrix lg = l.apply(gamma);
  const double lambda =
      std::real((vec_f(gamma).adjoint() * vec_f(lg))(0)) / gamma.squaredNorm();
  if (lambda <= tols.power) throw ZeroMap("top_fixed_psd: spectral radius ~ 0");

  const double tr = std::real(gamma.trace());
  if (tr <= 0.0)
    throw NoConvergence("top_fixed_psd: iterate lost positivity");
  gamma /= tr; // unit trace norm for a PSD matrix
  return {lambda, gamma};
}

} // namespace crm

#endif // CRM_SUPEROP_HPP
