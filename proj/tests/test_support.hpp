#ifndef CRM_TEST_SUPPORT_HPP
#define CRM_TEST_SUPPORT_HPP

#include <random>
#include <vector>

#include "crm/crm.hpp"

namespace crm::test {

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  return detail::gaussian_matrix(rows, cols, rng);
}

inline CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  return detail::gaussian_hermitian(n, rng);
}

inline CMatrix random_psd(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix x = detail::gaussian_matrix(n, n, rng);
  return x * x.adjoint();
}

inline CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  return detail::random_unitary(n, rng);
}

inline CVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

inline BipartiteOperator random_bipartite(Eigen::Index k, Eigen::Index m,
                                          std::mt19937_64& rng) {
  return {k, m, random_matrix(k * m, k * m, rng)};
}

inline BipartiteOperator random_bipartite_hermitian(Eigen::Index k, Eigen::Index m,
                                                    std::mt19937_64& rng) {
  const CMatrix x = random_matrix(k * m, k * m, rng);
  return {k, m, (x + x.adjoint()) / 2.0};
}

inline BipartiteOperator random_bipartite_psd(Eigen::Index k, Eigen::Index m,
                                              std::mt19937_64& rng) {
  CMatrix x = random_psd(k * m, rng);
  x /= x.norm();
  return {k, m, std::move(x)};
}

/// Standard orthonormal Hermitian basis of M_k under the trace inner product.
inline std::vector<CMatrix> hermitian_basis(Eigen::Index k) {
  std::vector<CMatrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < k; ++i) {
    CMatrix d = CMatrix::Zero(k, k);
    d(i, i) = 1.0;
    out.push_back(d);
  }
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i + 1; j < k; ++j) {
      CMatrix sym = CMatrix::Zero(k, k), asym = CMatrix::Zero(k, k);
      sym(i, j) = sym(j, i) = s;
      asym(i, j) = Complex(0, s);
      asym(j, i) = Complex(0, -s);
      out.push_back(sym);
      out.push_back(asym);
    }
  return out;
}

/// Embed a small matrix into the top-left (or offset) corner of a larger one.
inline CMatrix embed(const CMatrix& small, Eigen::Index n, Eigen::Index offset) {
  CMatrix out = CMatrix::Zero(n, n);
  out.block(offset, offset, small.rows(), small.cols()) = small;
  return out;
}

/// Direct sum of two separable PSD pieces supported on complementary local
/// subspaces; the canonical completely-reducible two-block fixture.
inline BipartiteOperator two_block_fixture(unsigned long long seed) {
  std::mt19937_64 rng(seed);
  const Eigen::Index k = 4, m = 4, half = 2;
  CMatrix total = CMatrix::Zero(k * m, k * m);
  for (int piece = 0; piece < 2; ++piece) {
    const Eigen::Index off = piece * half;
    for (int t = 0; t < 2; ++t) {
      const CMatrix c = embed(random_psd(half, rng), k, off);
      const CMatrix d = embed(random_psd(half, rng), m, off);
      total += kron(c, d);
    }
  }
  total /= std::real(total.trace());
  return {k, m, std::move(total)};
}

} // namespace crm::test

#endif // CRM_TEST_SUPPORT_HPP
