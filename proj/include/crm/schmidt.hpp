#ifndef CRM_SCHMIDT_HPP
#define CRM_SCHMIDT_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "crm/tensor.hpp"

namespace crm {

/// A (x) B = sum_i lambda_i gamma_i (x) delta_i with positive descending
/// coefficients and factor lists orthonormal under the trace inner product.
struct SchmidtDecomposition {
  std::vector<double> lambdas;
  std::vector<CMatrix> gammas;
  std::vector<CMatrix> deltas;
  bool hermitian_flag = false;

  std::size_t rank() const { return lambdas.size(); }
};

namespace detail {

// Antilinear involution x -> vec_f(unvec_f(x)^*); fixed points are the
// Hermitian vectors.
inline CVector herm_conj_vec(const CVector& v) {
  return vec_f(unvec_f(v).adjoint());
}

inline std::pair<Eigen::Index, Eigen::Index> largest_modulus_entry(const CMatrix& m) {
  Eigen::Index bi = 0, bj = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > best) {
        best = std::abs(m(i, j));
        bi = i;
        bj = j;
      }
  return {bi, bj};
}

// Rotate gamma so its largest-modulus entry is real positive; the inverse
// phase lands on delta so the product is unchanged.
inline void phase_normalize(CMatrix& gamma, CMatrix& delta) {
  auto [i, j] = largest_modulus_entry(gamma);
  const Complex z = gamma(i, j);
  if (std::abs(z) == 0.0) return;
  const Complex phase = z / std::abs(z);
  gamma /= phase;
  delta *= phase;
}

// Hermitian factors only admit a sign flip; pick the one whose pivot entry
// has nonnegative real part (imaginary part breaks the Re == 0 tie).
inline void sign_normalize(CMatrix& gamma, CMatrix& delta) {
  auto [i, j] = largest_modulus_entry(gamma);
  const Complex z = gamma(i, j);
  if (z.real() < 0.0 || (z.real() == 0.0 && z.imag() < 0.0)) {
    gamma = -gamma;
    delta = -delta;
  }
}

// Orthonormalize candidates (modified Gram-Schmidt, two passes) keeping at
// most `want` vectors. Dropping is measured against the largest candidate
// norm: a candidate that is pure numerical noise must never be normalized
// into a spurious basis direction.
inline std::vector<CVector> orthonormalize(const std::vector<CVector>& candidates,
                                           std::size_t want, double drop_tol = 1e-6) {
  double scale = 0.0;
  for (const CVector& c : candidates) scale = std::max(scale, c.norm());
  if (scale == 0.0) return {};
  std::vector<CVector> basis;
  for (const CVector& cand : candidates) {
    if (basis.size() == want) break;
    CVector v = cand;
    if (v.norm() <= drop_tol * scale) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const CVector& b : basis) v -= b * (b.adjoint() * v)(0);
    if (v.norm() <= drop_tol * scale) continue;
    basis.push_back(v / v.norm());
  }
  return basis;
}

} // namespace detail

/// Operator Schmidt decomposition via the SVD of realign(A).
///
/// gamma_i = unvec_f(x_i), delta_i = unvec_f(conj(y_i)); coefficients below
/// schmidt_cut * s_max are discarded, which pins the Schmidt rank.
inline SchmidtDecomposition schmidt_decompose(const BipartiteOperator& a,
                                              const Tolerances& tols = default_tols()) {
  const CMatrix r = realign(a);
  SingularSystem s = svd(r);
  if (s.singular_values.size() == 0 || s.singular_values(0) == 0.0)
    throw ZeroOperator("schmidt_decompose: zero operator");
  const double cut = tols.schmidt_cut * s.singular_values(0);

  SchmidtDecomposition d;
  for (Eigen::Index i = 0; i < s.singular_values.size(); ++i) {
    if (s.singular_values(i) <= cut) break;
    CMatrix gamma = unvec_f(s.left.col(i), a.k, a.k);
    CMatrix delta = unvec_f(s.right.col(i).conjugate(), a.m, a.m);
    detail::phase_normalize(gamma, delta);
    d.lambdas.push_back(s.singular_values(i));
    d.gammas.push_back(std::move(gamma));
    d.deltas.push_back(std::move(delta));
  }
  return d;
}

/// Hermitian Schmidt decomposition of a Hermitian bipartite operator.
///
/// Within each degenerate singular-value cluster the left vectors are
/// re-chosen inside the cluster subspace by splitting candidates into
/// Hermitian and anti-Hermitian parts and re-orthonormalizing; the matching
/// right vectors R* x / s then come out Hermitian automatically because
/// realign of a Hermitian operator satisfies R = P_k conj(R) P_m with P the
/// transpose permutations.
///
/// Near-degenerate clusters (relative gap inside tols.cluster) trade a
/// reconstruction error of the order of the cluster spread; exact
/// degeneracies and generic spectra are unaffected.
inline SchmidtDecomposition hermitian_schmidt_decompose(
    const BipartiteOperator& a, const Tolerances& tols = default_tols()) {
  if (!is_hermitian(a.mat, tols.hermitian))
    throw NonHermitianInput("hermitian_schmidt_decompose: input not Hermitian");
  BipartiteOperator h(a.k, a.m, (a.mat + a.mat.adjoint()) / 2.0);

  const CMatrix r = realign(h);
  SingularSystem s = svd(r);
  if (s.singular_values.size() == 0 || s.singular_values(0) == 0.0)
    throw ZeroOperator("hermitian_schmidt_decompose: zero operator");
  const double s_max = s.singular_values(0);
  const double cut = tols.schmidt_cut * s_max;

  Eigen::Index kept = 0;
  while (kept < s.singular_values.size() && s.singular_values(kept) > cut) ++kept;

  SchmidtDecomposition d;
  d.hermitian_flag = true;

  Eigen::Index lo = 0;
  while (lo < kept) {
    Eigen::Index hi = lo + 1;
    while (hi < kept &&
           s.singular_values(hi - 1) - s.singular_values(hi) <= tols.cluster * s_max)
      ++hi;
    const std::size_t dim = static_cast<std::size_t>(hi - lo);

    // Hermitian / anti-Hermitian split of each cluster vector (w = w1 + i w2).
    std::vector<CVector> candidates;
    candidates.reserve(2 * dim);
    for (Eigen::Index c = lo; c < hi; ++c) {
      const CVector w = s.left.col(c);
      const CVector jw = detail::herm_conj_vec(w);
      candidates.push_back((w + jw) / 2.0);
      candidates.push_back((w - jw) / Complex(0.0, 2.0));
    }
    std::vector<CVector> lefts = detail::orthonormalize(candidates, dim);
    if (lefts.size() != dim)
      throw DegenerateClusterFailure(
          "hermitian_schmidt_decompose: cluster of size " + std::to_string(dim) +
          " yielded only " + std::to_string(lefts.size()) + " Hermitian vectors");

    std::vector<CVector> rights_raw;
    std::vector<double> values;
    for (const CVector& x : lefts) {
      CVector y = r.adjoint() * x;
      const double lam = y.norm();
      values.push_back(lam);
      rights_raw.push_back(y / lam);
    }
    std::vector<CVector> rights = detail::orthonormalize(rights_raw, dim);
    if (rights.size() != dim)
      throw DegenerateClusterFailure(
          "hermitian_schmidt_decompose: right-vector re-basis collapsed");

    for (std::size_t t = 0; t < dim; ++t) {
      CMatrix gamma = unvec_f(lefts[t], a.k, a.k);
      CMatrix delta = unvec_f(rights[t].conjugate(), a.m, a.m);
      const double herm_err =
          std::max(hermiticity_residual(gamma), hermiticity_residual(delta));
      if (herm_err > std::sqrt(tols.hermitian))
        throw DegenerateClusterFailure(
            "hermitian_schmidt_decompose: factor hermiticity residual " +
            std::to_string(herm_err));
      gamma = (gamma + gamma.adjoint()) / 2.0;
      delta = (delta + delta.adjoint()) / 2.0;
      detail::sign_normalize(gamma, delta);
      d.lambdas.push_back(values[t]);
      d.gammas.push_back(std::move(gamma));
      d.deltas.push_back(std::move(delta));
    }
    lo = hi;
  }

  // Within-cluster re-pairing can disorder the values slightly; restore the
  // descending contract.
  std::vector<std::size_t> order(d.lambdas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return d.lambdas[i] > d.lambdas[j]; });
  SchmidtDecomposition sorted;
  sorted.hermitian_flag = true;
  for (std::size_t idx : order) {
    sorted.lambdas.push_back(d.lambdas[idx]);
    sorted.gammas.push_back(std::move(d.gammas[idx]));
    sorted.deltas.push_back(std::move(d.deltas[idx]));
  }
  return sorted;
}

/// Sum the decomposition back into a bipartite operator.
inline BipartiteOperator reconstruct(const SchmidtDecomposition& d, Eigen::Index k,
                                     Eigen::Index m) {
  CMatrix out = CMatrix::Zero(k * m, k * m);
  for (std::size_t i = 0; i < d.rank(); ++i) {
    if (d.gammas[i].rows() != k || d.gammas[i].cols() != k ||
        d.deltas[i].rows() != m || d.deltas[i].cols() != m)
      throw DimensionMismatch("reconstruct: factor " + std::to_string(i) +
                              " does not match dims (" + std::to_string(k) + "," +
                              std::to_string(m) + ")");
    out += d.lambdas[i] * kron(d.gammas[i], d.deltas[i]);
  }
  return {k, m, std::move(out)};
}

} // namespace crm

#endif // CRM_SCHMIDT_HPP
