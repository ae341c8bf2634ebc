#ifndef CRM_MUB_HPP
#define CRM_MUB_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "crm/reducibility.hpp"
#include "crm/tensor.hpp"

namespace crm {

/// An orthonormal basis of C^k, vectors stored as matrix columns.
struct Basis {
  Eigen::Index dim = 0;
  CMatrix vectors;

  Basis() = default;
  Basis(Eigen::Index dim_, CMatrix vectors_) : dim(dim_), vectors(std::move(vectors_)) {
    if (dim <= 0 || vectors.rows() != dim || vectors.cols() != dim)
      throw DimensionMismatch("Basis: matrix is " + std::to_string(vectors.rows()) +
                              "x" + std::to_string(vectors.cols()) + ", dim " +
                              std::to_string(dim));
  }

  double orthonormality_residual() const {
    return (vectors.adjoint() * vectors - CMatrix::Identity(dim, dim)).norm();
  }
};

struct MubSet {
  Eigen::Index dim = 0;
  std::vector<Basis> bases;
};

namespace detail {

inline CVector phase_normalized(CVector v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  const Complex z = v(best);
  if (std::abs(z) > 0.0) v /= z / std::abs(z);
  return v;
}

} // namespace detail

/// A_alpha = sum_i v_i conj(v_i)^t (x) conj(v_i) v_i^t, the rank-k orthogonal
/// projection attached to a basis; always invariant under realignment.
inline BipartiteOperator a_alpha(const Basis& alpha,
                                 const Tolerances& tols = default_tols()) {
  const double res = alpha.orthonormality_residual();
  if (res > 1e3 * tols.hermitian * alpha.dim)
    throw NotOrthonormal("a_alpha: basis orthonormality residual " +
                         std::to_string(res));
  const Eigen::Index k = alpha.dim;
  CMatrix out = CMatrix::Zero(k * k, k * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const CMatrix p = alpha.vectors.col(i) * alpha.vectors.col(i).adjoint();
    out += kron(p, p.transpose());
  }
  return {k, k, std::move(out)};
}

struct UnbiasedPairResult {
  bool unbiased = false;
  bool overlap_ok = false;
  bool operator_ok = false;
  double max_overlap_deviation = 0.0; // max | |<v_i,w_j>|^2 - 1/k |
  double operator_residual = 0.0;     // || A_a A_b - uu^t / k ||_F
};

/// Unbiasedness of a basis pair, cross-validated two ways: the overlap
/// definition and the operator criterion A_alpha A_beta = uu^t / k.
inline UnbiasedPairResult is_unbiased_pair(const Basis& alpha, const Basis& beta,
                                           double tol = 1e-9,
                                           const Tolerances& tols = default_tols()) {
  if (alpha.dim != beta.dim)
    throw DimMismatch("is_unbiased_pair: dims " + std::to_string(alpha.dim) + " vs " +
                      std::to_string(beta.dim));
  const Eigen::Index k = alpha.dim;
  UnbiasedPairResult r;
  const CMatrix overlaps = beta.vectors.adjoint() * alpha.vectors;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      r.max_overlap_deviation =
          std::max(r.max_overlap_deviation,
                   std::abs(std::norm(overlaps(j, i)) - 1.0 / double(k)));
  r.overlap_ok = r.max_overlap_deviation <= tol;

  const CMatrix uu =
      max_entangled_u(k).vec * max_entangled_u(k).vec.transpose();
  r.operator_residual =
      (a_alpha(alpha, tols).mat * a_alpha(beta, tols).mat - uu / double(k)).norm();
  r.operator_ok = r.operator_residual <= tol * double(k);

  r.unbiased = r.overlap_ok && r.operator_ok;
  return r;
}

struct MubVerifyReport {
  bool ok = false;
  std::vector<Eigen::Index> non_orthonormal; // basis indices
  struct PairFailure {
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    double max_overlap_deviation = 0.0;
    double operator_residual = 0.0;
  };
  std::vector<PairFailure> failed_pairs;
  bool resolution_checked = false; // only when the set has k + 1 bases
  double resolution_residual = 0.0;
  bool resolution_ok = true;
};

/// Pairwise verification of a basis set; with k + 1 bases the resolution
/// identity sum_i A_alpha_i = Id (x) Id + uu^t is checked as well.
inline MubVerifyReport verify_set(const MubSet& ms, double tol = 1e-9,
                                  const Tolerances& tols = default_tols()) {
  MubVerifyReport rep;
  const Eigen::Index k = ms.dim;
  std::vector<bool> usable(ms.bases.size(), true);
  for (std::size_t i = 0; i < ms.bases.size(); ++i) {
    if (ms.bases[i].dim != k || ms.bases[i].orthonormality_residual() > tol * double(k)) {
      rep.non_orthonormal.push_back(static_cast<Eigen::Index>(i));
      usable[i] = false;
    }
  }
  for (std::size_t i = 0; i < ms.bases.size(); ++i)
    for (std::size_t j = i + 1; j < ms.bases.size(); ++j) {
      if (!usable[i] || !usable[j]) continue;
      const UnbiasedPairResult pr = is_unbiased_pair(ms.bases[i], ms.bases[j], tol, tols);
      if (!pr.unbiased)
        rep.failed_pairs.push_back({static_cast<Eigen::Index>(i),
                                    static_cast<Eigen::Index>(j),
                                    pr.max_overlap_deviation, pr.operator_residual});
    }

  if (ms.bases.size() == static_cast<std::size_t>(k) + 1 &&
      rep.non_orthonormal.empty()) {
    CMatrix sum = CMatrix::Zero(k * k, k * k);
    for (const Basis& b : ms.bases) sum += a_alpha(b, tols).mat;
    const CVector u = max_entangled_u(k).vec;
    const CMatrix target = CMatrix::Identity(k * k, k * k) + u * u.transpose();
    rep.resolution_checked = true;
    rep.resolution_residual = (sum - target).norm();
    rep.resolution_ok = rep.resolution_residual <= tol * (1.0 + target.norm());
  }

  rep.ok = rep.non_orthonormal.empty() && rep.failed_pairs.empty() &&
           rep.resolution_ok;
  return rep;
}

/// Completion of k mutually unbiased bases of C^k to k + 1.
///
/// Forms B = Id (x) Id + uu^t - sum_i A_alpha_i, checks its spectrum is
/// {1 x k, 0 x (k^2 - k)} and S(B) = B, then extracts the rank-one PSD
/// Schmidt factors of B; their top eigenvectors are the missing basis,
/// unique up to per-vector phases (fixed here by making the largest-modulus
/// entry real positive).
inline Basis complete(const MubSet& ms, double tol = 1e-9, unsigned long long seed = 0,
                      const Tolerances& tols = default_tols()) {
  const Eigen::Index k = ms.dim;
  if (ms.bases.size() != static_cast<std::size_t>(k))
    throw DimMismatch("complete: need exactly " + std::to_string(k) + " bases, got " +
                      std::to_string(ms.bases.size()));
  for (std::size_t i = 0; i < ms.bases.size(); ++i)
    for (std::size_t j = i + 1; j < ms.bases.size(); ++j) {
      const UnbiasedPairResult pr = is_unbiased_pair(ms.bases[i], ms.bases[j],
                                                     std::max(tol, tols.cluster), tols);
      if (!pr.unbiased)
        throw InputNotUnbiased("complete: bases " + std::to_string(i) + " and " +
                               std::to_string(j) + " deviate by " +
                               std::to_string(pr.max_overlap_deviation));
    }

  CMatrix b_mat = CMatrix::Identity(k * k, k * k);
  const CVector u = max_entangled_u(k).vec;
  b_mat += u * u.transpose();
  for (const Basis& basis : ms.bases) b_mat -= a_alpha(basis, tols).mat;
  const BipartiteOperator b(k, k, (b_mat + b_mat.adjoint()) / 2.0);

  const HermitianEigenSystem eig = hermitian_eig(b.mat, tols.hermitian);
  Eigen::Index ones = 0, zeros = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double v = eig.eigenvalues(i);
    if (std::abs(v - 1.0) <= tols.cluster)
      ++ones;
    else if (std::abs(v) <= tols.cluster)
      ++zeros;
  }
  if (ones != k || zeros != k * k - k)
    throw SpectrumMismatch("complete: B has " + std::to_string(ones) +
                           " unit eigenvalues and " + std::to_string(zeros) +
                           " null ones; the input is not a genuine k-MUB set");
  const double inv_res = (b.mat - realign(b)).norm();
  if (inv_res > std::max(tol, tols.cluster) * (1.0 + b.mat.norm()))
    throw SpectrumMismatch("complete: B not invariant under realignment, residual " +
                           std::to_string(inv_res));

  SchmidtDecomposition d;
  try {
    d = positive_schmidt_unique(b, std::max(tol, tols.cluster), seed, tols);
  } catch (const NotCompletelyReducible& e) {
    throw ExtractionFailure(std::string("complete: ") + e.what());
  }
  if (d.rank() != static_cast<std::size_t>(k))
    throw ExtractionFailure("complete: expected " + std::to_string(k) +
                            " factors, got " + std::to_string(d.rank()));

  CMatrix vectors(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const HermitianEigenSystem ge = hermitian_eig(d.gammas[i], tols.hermitian);
    const Eigen::Index last = ge.eigenvalues.size() - 1;
    const double second = last > 0 ? std::abs(ge.eigenvalues(last - 1)) : 0.0;
    if (std::abs(ge.eigenvalues(last) - 1.0) > tols.cluster || second > tols.cluster)
      throw ExtractionFailure("complete: factor " + std::to_string(i) +
                              " is not rank-one (eigenvalues " +
                              std::to_string(ge.eigenvalues(last)) + ", " +
                              std::to_string(second) + ")");
    vectors.col(i) = detail::phase_normalized(ge.eigenvectors.col(last));
  }
  Basis out(k, std::move(vectors));

  if (out.orthonormality_residual() > std::max(tol, tols.cluster) * double(k))
    throw ExtractionFailure("complete: extracted vectors are not orthonormal");
  for (std::size_t i = 0; i < ms.bases.size(); ++i) {
    const UnbiasedPairResult pr =
        is_unbiased_pair(out, ms.bases[i], std::max(tol, tols.cluster), tols);
    if (!pr.unbiased)
      throw ExtractionFailure("complete: output not unbiased with input basis " +
                              std::to_string(i));
  }
  return out;
}

/// Greedy |overlap| matching of two bases; deviation is the max over matched
/// pairs of ||v - phase-aligned w||. Uniqueness up to phases makes this the
/// right comparison for completed bases.
struct BasisAlignment {
  bool matched = false;
  double max_deviation = 0.0;
  double min_overlap = 0.0; // smallest matched |<v,w>|
};

inline BasisAlignment align_up_to_phase(const Basis& a, const Basis& b) {
  BasisAlignment out;
  if (a.dim != b.dim) return out;
  const Eigen::Index k = a.dim;
  std::vector<bool> used(k, false);
  out.matched = true;
  out.min_overlap = 1.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    Eigen::Index best = -1;
    double best_ov = -1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (used[j]) continue;
      const double ov = std::abs((b.vectors.col(j).adjoint() * a.vectors.col(i))(0));
      if (ov > best_ov) {
        best_ov = ov;
        best = j;
      }
    }
    used[best] = true;
    out.min_overlap = std::min(out.min_overlap, best_ov);
    const Complex ip = (b.vectors.col(best).adjoint() * a.vectors.col(i))(0);
    const Complex phase = std::abs(ip) > 0.0 ? ip / std::abs(ip) : Complex(1.0, 0.0);
    out.max_deviation = std::max(
        out.max_deviation,
        (a.vectors.col(i) - phase * b.vectors.col(best)).norm());
  }
  return out;
}

namespace detail {

inline bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

} // namespace detail

/// The p + 1 mutually unbiased bases of C^p for prime p: the computational
/// basis plus, for odd p, the bases with entries w^(m s^2 + b s) / sqrt(p);
/// p = 2 gets the computational / Hadamard / circular triple. The output is
/// validated by verify_set before being returned.
inline MubSet generate_prime(long long p, const Tolerances& tols = default_tols()) {
  if (!detail::is_prime(p))
    throw NotPrime("generate_prime: " + std::to_string(p) + " is not prime");
  MubSet ms;
  ms.dim = static_cast<Eigen::Index>(p);

  if (p == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix comp = CMatrix::Identity(2, 2);
    CMatrix had(2, 2), circ(2, 2);
    had << s, s, s, -s;
    circ << s, s, Complex(0, s), Complex(0, -s);
    ms.bases.emplace_back(2, std::move(comp));
    ms.bases.emplace_back(2, std::move(had));
    ms.bases.emplace_back(2, std::move(circ));
  } else {
    const Eigen::Index k = ms.dim;
    ms.bases.emplace_back(k, CMatrix::Identity(k, k));
    const double inv_sqrt = 1.0 / std::sqrt(double(p));
    for (long long m = 0; m < p; ++m) {
      CMatrix basis(k, k);
      for (long long b = 0; b < p; ++b)
        for (long long s = 0; s < p; ++s) {
          const long long expo = (m * s % p * s + b * s) % p;
          const double angle = 2.0 * std::numbers::pi * double(expo) / double(p);
          basis(s, b) = inv_sqrt * Complex(std::cos(angle), std::sin(angle));
        }
      ms.bases.emplace_back(k, std::move(basis));
    }
  }

  const MubVerifyReport rep = verify_set(ms, 1e-10, tols);
  if (!rep.ok)
    throw Error("generate_prime: construction failed its own verification at p = " +
                std::to_string(p));
  return ms;
}

} // namespace crm

#endif // CRM_MUB_HPP
