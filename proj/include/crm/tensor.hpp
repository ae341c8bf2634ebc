#ifndef CRM_TENSOR_HPP
#define CRM_TENSOR_HPP

#include <string>
#include <utility>

#include "crm/linalg.hpp"
#include "crm/types.hpp"

namespace crm {

/// A km x km matrix tagged with its local dimensions (k, m).
///
/// Index convention, fixed once for the whole library: the tensor basis
/// vector e_i (x) e_p sits at position i*m + p, so the entry of A at
/// tensor 4-index (i, j, p, q) is A.mat(i*m + p, j*m + q) with
/// i, j < k and p, q < m. Every reshape below derives from this.
struct BipartiteOperator {
  Eigen::Index k = 0;
  Eigen::Index m = 0;
  CMatrix mat;

  BipartiteOperator() = default;
  BipartiteOperator(Eigen::Index k_, Eigen::Index m_, CMatrix mat_)
      : k(k_), m(m_), mat(std::move(mat_)) {
    if (k <= 0 || m <= 0 || mat.rows() != k * m || mat.cols() != k * m)
      throw DimensionMismatch("BipartiteOperator: matrix is " +
                              std::to_string(mat.rows()) + "x" +
                              std::to_string(mat.cols()) + ", dims (" +
                              std::to_string(k) + "," + std::to_string(m) + ")");
  }

  bool square_dims() const { return k == m; }
  double norm() const { return mat.norm(); }
};

struct BipartiteVector {
  Eigen::Index k = 0;
  Eigen::Index m = 0;
  CVector vec;

  BipartiteVector() = default;
  BipartiteVector(Eigen::Index k_, Eigen::Index m_, CVector vec_)
      : k(k_), m(m_), vec(std::move(vec_)) {
    if (k <= 0 || m <= 0 || vec.size() != k * m)
      throw DimensionMismatch("BipartiteVector: length " +
                              std::to_string(vec.size()) + ", dims (" +
                              std::to_string(k) + "," + std::to_string(m) + ")");
  }
};

/// Kronecker product, (A (x) B)(i*rB + p, j*cB + q) = A(i,j) B(p,q).
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CVector kron_vec(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Row-major vectorization: vec_f(a b^t) = a (x) b.
inline CVector vec_f(const CMatrix& m) {
  CVector v(m.rows() * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

inline CMatrix unvec_f(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw DimensionMismatch("unvec_f: length " + std::to_string(v.size()) +
                            " != " + std::to_string(rows) + "*" + std::to_string(cols));
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

/// Square unvectorization (the paper's F^{-1} on C^{k*k}).
inline CMatrix unvec_f(const CVector& v) {
  const auto k = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (k * k != v.size())
    throw DimensionMismatch("unvec_f: length " + std::to_string(v.size()) +
                            " is not a perfect square");
  return unvec_f(v, k, k);
}

/// The flip operator T = sum_ij e_i e_j^t (x) e_j e_i^t, T(a (x) b) = b (x) a.
inline BipartiteOperator flip(Eigen::Index k) {
  if (k < 1) throw BadDimension("flip: k must be >= 1");
  CMatrix t = CMatrix::Zero(k * k, k * k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) t(i * k + j, j * k + i) = 1.0;
  return {k, k, std::move(t)};
}

/// The unnormalized maximally entangled vector u = sum_i e_i (x) e_i.
inline BipartiteVector max_entangled_u(Eigen::Index k) {
  if (k < 1) throw BadDimension("max_entangled_u: k must be >= 1");
  CVector u = CVector::Zero(k * k);
  for (Eigen::Index i = 0; i < k; ++i) u(i * k + i) = 1.0;
  return {k, k, std::move(u)};
}

/// Realignment: S(A)(i*k + j, p*m + q) = A(i*m + p, j*m + q).
///
/// Output is k^2 x m^2; on square dims it is an involution. On rank-one
/// blocks C (x) D it equals vec_f(C) vec_f(D)^t.
inline CMatrix realign(const BipartiteOperator& a) {
  const Eigen::Index k = a.k, m = a.m;
  CMatrix out(k * k, m * m);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index p = 0; p < m; ++p)
        for (Eigen::Index q = 0; q < m; ++q)
          out(i * k + j, p * m + q) = a.mat(i * m + p, j * m + q);
  return out;
}

/// Inverse of realign: maps a k^2 x m^2 matrix back to M_k (x) M_m.
inline BipartiteOperator unrealign(const CMatrix& r, Eigen::Index k, Eigen::Index m) {
  if (r.rows() != k * k || r.cols() != m * m)
    throw DimensionMismatch("unrealign: matrix is " + std::to_string(r.rows()) +
                            "x" + std::to_string(r.cols()));
  CMatrix out(k * m, k * m);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index p = 0; p < m; ++p)
        for (Eigen::Index q = 0; q < m; ++q)
          out(i * m + p, j * m + q) = r(i * k + j, p * m + q);
  return {k, m, std::move(out)};
}

/// Square-dims realignment, re-tagged as a bipartite operator.
inline BipartiteOperator realign_square(const BipartiteOperator& a) {
  if (!a.square_dims())
    throw NonSquareDims("realign_square: dims (" + std::to_string(a.k) + "," +
                        std::to_string(a.m) + ")");
  return {a.k, a.k, realign(a)};
}

enum class Slot { first, second };

/// Partial transposition: slot second maps C (x) D to C (x) D^t.
inline BipartiteOperator partial_transpose(const BipartiteOperator& a,
                                           Slot slot = Slot::second) {
  const Eigen::Index k = a.k, m = a.m;
  CMatrix out(k * m, k * m);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index p = 0; p < m; ++p)
        for (Eigen::Index q = 0; q < m; ++q) {
          if (slot == Slot::second)
            out(i * m + p, j * m + q) = a.mat(i * m + q, j * m + p);
          else
            out(i * m + p, j * m + q) = a.mat(j * m + p, i * m + q);
        }
  return {k, m, std::move(out)};
}

/// True when F^{-1}(v) is Hermitian within tol (a "Hermitian vector").
inline bool is_hermitian_vector(const CVector& v, double tol = default_tols().hermitian) {
  return is_hermitian(unvec_f(v), tol);
}

} // namespace crm

#endif // CRM_TENSOR_HPP
