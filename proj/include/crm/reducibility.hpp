#ifndef CRM_REDUCIBILITY_HPP
#define CRM_REDUCIBILITY_HPP

#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "crm/superop.hpp"

namespace crm {

/// One weakly irreducible summand (V (x) W) A (V (x) W) of a completely
/// reducible decomposition.
struct Block {
  CMatrix V; // k x k orthogonal projection
  CMatrix W; // m x m orthogonal projection
  BipartiteOperator block_operator;
  double top_eigenvalue = 0.0;
  bool irreducible_certified = false;
};

struct Witness {
  CMatrix gamma;
  double cross_norm = 0.0;
};

/// Outcome of decompose(). Exactly one of three states holds:
///  - completely_reducible: blocks reconstruct A, projectors pairwise
///    orthogonal, residual_norm is the relative reconstruction error;
///  - not completely reducible: witness carries a PSD eigenvector of
///    F_A o G_A whose induced split leaves cross mass behind;
///  - indeterminate: the randomized minimal-block search exhausted its
///    retry budget without producing either certificate.
struct ReducibilityReport {
  bool completely_reducible = false;
  bool indeterminate = false;
  std::vector<Block> blocks;
  double residual_norm = 0.0;
  std::optional<Witness> witness;
  int multiplicity_top = 0;

  std::size_t block_count() const { return blocks.size(); }
};

struct SplitCheckResult {
  bool pass = false;
  CMatrix V1;
  CMatrix W1;
  double cross_norm = 0.0;
  BipartiteOperator inside;  // (V1 (x) W1) A (V1 (x) W1)
  BipartiteOperator outside; // complement compression
};

namespace detail {

inline CMatrix hermitized(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

// Split test against precomputed superoperators; `tol` gates the residual,
// while the eigenvector precondition additionally allows for the width of a
// degenerate cluster (candidates drawn from one are eigenvectors only up to
// the cluster spread).
inline SplitCheckResult split_check_impl(const BipartiteOperator& a,
                                         const SuperOperator& g, const SuperOperator& f,
                                         const CMatrix& gamma, double tol,
                                         const Tolerances& tols) {
  const CMatrix g_gamma = hermitized(g.apply(gamma));
  const CMatrix fg_gamma = hermitized(f.apply(g_gamma));
  const double gamma_sq = gamma.squaredNorm();
  if (gamma_sq == 0.0) throw NotAnEigenvector("split_check: gamma is zero");
  const double lambda =
      std::real((vec_f(gamma).adjoint() * vec_f(fg_gamma))(0)) / gamma_sq;
  const double eig_tol = std::max(tol, 10.0 * tols.cluster);
  if (lambda <= eig_tol ||
      (fg_gamma - lambda * gamma).norm() > eig_tol * lambda * gamma.norm())
    throw NotAnEigenvector("split_check: gamma is not a positive-eigenvalue "
                           "eigenvector of F_A o G_A");

  SplitCheckResult r;
  r.V1 = range_projector(gamma, tols.rank);
  r.W1 = range_projector(g_gamma, tols.rank);
  const Eigen::Index k = a.k, m = a.m;
  const CMatrix p_in = kron(r.V1, r.W1);
  const CMatrix p_out =
      kron(CMatrix::Identity(k, k) - r.V1, CMatrix::Identity(m, m) - r.W1);
  r.inside = BipartiteOperator(k, m, hermitized(p_in * a.mat * p_in));
  r.outside = BipartiteOperator(k, m, hermitized(p_out * a.mat * p_out));
  r.cross_norm = (a.mat - r.inside.mat - r.outside.mat).norm();
  r.pass = r.cross_norm <= tol * a.mat.norm();
  return r;
}

} // namespace detail

/// Split test of the decomposition property: V1 projects onto Im(gamma), W1
/// onto Im(G_A(gamma)); passes when A equals (V1 (x) W1) A (V1 (x) W1) plus
/// the complementary compression within tol * ||A||_F.
inline SplitCheckResult split_check(const BipartiteOperator& a, const CMatrix& gamma,
                                    double tol = 1e-9,
                                    const Tolerances& tols = default_tols()) {
  PsdReport psd = is_psd(a.mat, tols.psd, tols);
  if (!psd.ok)
    throw NotPsdInput("split_check: input not PSD (min eigenvalue " +
                      std::to_string(psd.min_eigenvalue) + ")");
  return detail::split_check_impl(a, g_of(a, tols), f_of(a, tols), gamma, tol, tols);
}

namespace detail {

enum class DecStatus { reducible, failed, indeterminate };

struct SubBlock {
  CMatrix V;
  CMatrix W;
  double top_eigenvalue = 0.0;
  bool certified = false;
};

struct SubResult {
  DecStatus status = DecStatus::reducible;
  std::vector<SubBlock> blocks;
  std::optional<Witness> witness;
};

// Orthonormal Hermitian basis of the span of the given eigenvector columns.
// The eigenspaces of F_A o G_A are *-closed, so a full Hermitian basis
// exists; candidates come from the Hermitian/anti-Hermitian split of each
// column.
inline std::vector<CMatrix> hermitian_eigenspace_basis(const CMatrix& vectors,
                                                       Eigen::Index dim) {
  std::vector<CVector> candidates;
  candidates.reserve(2 * static_cast<std::size_t>(vectors.cols()));
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    const CVector w = vectors.col(c);
    const CVector jw = vec_f(unvec_f(w, dim, dim).adjoint());
    candidates.push_back((w + jw) / 2.0);
    candidates.push_back((w - jw) / Complex(0.0, 2.0));
  }
  const std::vector<CVector> basis =
      orthonormalize(candidates, static_cast<std::size_t>(vectors.cols()));
  if (basis.size() != static_cast<std::size_t>(vectors.cols()))
    throw DegenerateClusterFailure(
        "decompose: eigenspace does not admit a Hermitian basis numerically");
  std::vector<CMatrix> out;
  out.reserve(basis.size());
  for (const CVector& v : basis) out.push_back(hermitized(unvec_f(v, dim, dim)));
  return out;
}

struct CompressedOp {
  BipartiteOperator op;
  CMatrix iso_v; // k x r isometry, columns span Im(V)
  CMatrix iso_w; // m x r' isometry
};

inline CompressedOp compress(const BipartiteOperator& a, const CMatrix& v_proj,
                             const CMatrix& w_proj) {
  // Projector singular values are 0/1; 0.5 separates them robustly.
  CMatrix bv = range_basis(v_proj, 0.5);
  CMatrix bw = range_basis(w_proj, 0.5);
  const CMatrix iso = kron(bv, bw);
  CMatrix sub = hermitized(iso.adjoint() * a.mat * iso);
  CompressedOp c;
  c.op = BipartiteOperator(bv.cols(), bw.cols(), std::move(sub));
  c.iso_v = std::move(bv);
  c.iso_w = std::move(bw);
  return c;
}

class Decomposer {
public:
  // The depth cap is the local dimension k: every split strictly shrinks the
  // first-factor support, so exceeding it signals tolerance-driven cycling.
  Decomposer(double tol, unsigned long long seed, const Tolerances& tols,
             double root_norm, Eigen::Index root_k)
      : tol_(tol), tols_(tols), rng_(seed), root_norm_(root_norm),
        depth_cap_(static_cast<int>(root_k)) {}

  SubResult run(const BipartiteOperator& b, int depth) {
    if (b.mat.norm() <= tol_ * root_norm_) return {}; // vanished compression
    if (depth > depth_cap_)
      throw RecursionLimit("decompose: recursion depth " + std::to_string(depth) +
                           " exceeds cap " + std::to_string(depth_cap_));

    const SuperOperator g = g_of(b, tols_);
    const SuperOperator f = f_of(b, tols_);
    const SuperOperator fg(b.k, b.k, f.matrix * g.matrix);
    const HermitianEigenSystem eig = hermitian_eig(fg.matrix, tols_.hermitian);
    const double lam_max = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (lam_max <= 0.0) return {};

    // Top eigenvalue cluster and a Hermitian basis of its eigenspace.
    Eigen::Index first = eig.eigenvalues.size() - 1;
    while (first > 0 && lam_max - eig.eigenvalues(first - 1) <= tols_.cluster * lam_max)
      --first;
    const Eigen::Index mu = eig.eigenvalues.size() - first;
    const std::vector<CMatrix> e_basis =
        hermitian_eigenspace_basis(eig.eigenvectors.rightCols(mu), b.k);

    if (depth == 0) root_multiplicity_ = static_cast<int>(mu);

    std::optional<Witness> last_trivial;
    bool fallback_used = false;
    for (int attempt = 0; attempt <= tols_.retries; ++attempt) {
      CMatrix gamma = candidate(e_basis, mu, fallback_used, fg);
      if (gamma.size() == 0) continue; // candidate construction failed; retry

      SplitCheckResult split;
      try {
        split = split_check_impl(b, g, f, gamma, tol_, tols_);
      } catch (const NotAnEigenvector&) {
        continue;
      }

      if (!split.pass) {
        SubResult r;
        r.status = DecStatus::failed;
        r.witness = Witness{gamma, split.cross_norm};
        return r;
      }

      if (split.outside.mat.norm() <= tol_ * b.mat.norm()) {
        // Trivial split: the candidate covers the whole support.
        if (mu == 1) {
          SubResult r;
          SubBlock blk;
          blk.V = split.V1;
          blk.W = split.W1;
          blk.top_eigenvalue = lam_max;
          blk.certified = true; // multiplicity 1 with full-support eigenvector
          r.blocks.push_back(std::move(blk));
          return r;
        }
        last_trivial = Witness{gamma, split.cross_norm};
        continue; // degenerate top: a fresh draw should isolate a sub-block
      }

      return recurse(b, split, depth);
    }

    // Retry budget exhausted: no constructive decomposition, no violation.
    SubResult r;
    r.status = DecStatus::indeterminate;
    r.witness = last_trivial;
    return r;
  }

  int root_multiplicity() const { return root_multiplicity_; }

private:
  CMatrix candidate(const std::vector<CMatrix>& e_basis, Eigen::Index mu,
                    bool& fallback_used, const SuperOperator& fg) {
    CMatrix gamma;
    if (mu == 1) {
      gamma = e_basis[0];
      if (std::real(gamma.trace()) < 0.0) gamma = -gamma;
    } else {
      // Generic Hermitian element of the eigenspace; the spectral projector
      // of its largest-|eigenvalue| cluster isolates a single minimal block
      // whenever the map is completely reducible.
      std::normal_distribution<double> gauss;
      CMatrix x = CMatrix::Zero(e_basis[0].rows(), e_basis[0].cols());
      for (const CMatrix& h : e_basis) x += gauss(rng_) * h;
      const HermitianEigenSystem xe = hermitian_eig(x, 1e-8);
      const Eigen::Index n = xe.eigenvalues.size();
      double top = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        top = std::max(top, std::abs(xe.eigenvalues(i)));
      if (top == 0.0) return {};
      CMatrix proj = CMatrix::Zero(x.rows(), x.cols());
      for (Eigen::Index i = 0; i < n; ++i)
        if (top - std::abs(xe.eigenvalues(i)) <= tols_.cluster * top)
          proj += xe.eigenvectors.col(i) * xe.eigenvectors.col(i).adjoint();
      gamma = CMatrix::Zero(x.rows(), x.cols());
      for (const CMatrix& h : e_basis)
        gamma += std::real((vec_f(proj).adjoint() * vec_f(h))(0)) * h;
      gamma = hermitized(gamma);
    }
    if (gamma.norm() == 0.0) return {};
    gamma /= gamma.norm();

    PsdReport psd = is_psd(gamma, tols_.psd, tols_);
    if (!psd.ok) {
      if (fallback_used) return {};
      fallback_used = true;
      try {
        gamma = top_fixed_psd(fg, tols_).second;
        gamma /= gamma.norm();
      } catch (const Error&) {
        return {};
      }
    }
    return gamma;
  }

  SubResult recurse(const BipartiteOperator& b, const SplitCheckResult& split,
                    int depth) {
    SubResult merged;
    for (const bool inner : {true, false}) {
      const BipartiteOperator& part = inner ? split.inside : split.outside;
      const CMatrix v_proj =
          inner ? split.V1 : CMatrix(CMatrix::Identity(b.k, b.k) - split.V1);
      const CMatrix w_proj =
          inner ? split.W1 : CMatrix(CMatrix::Identity(b.m, b.m) - split.W1);
      if (part.mat.norm() <= tol_ * root_norm_) continue;
      CompressedOp c = compress(part, v_proj, w_proj);
      SubResult sub = run(c.op, depth + 1);
      if (sub.status != DecStatus::reducible) {
        if (sub.witness)
          sub.witness->gamma = c.iso_v * sub.witness->gamma * c.iso_v.adjoint();
        return sub;
      }
      for (SubBlock& blk : sub.blocks) {
        blk.V = c.iso_v * blk.V * c.iso_v.adjoint();
        blk.W = c.iso_w * blk.W * c.iso_w.adjoint();
        merged.blocks.push_back(std::move(blk));
      }
    }
    return merged;
  }

  double tol_;
  Tolerances tols_;
  std::mt19937_64 rng_;
  double root_norm_;
  int depth_cap_;
  int root_multiplicity_ = 0;
};

} // namespace detail

/// Recursive completely-reducible decomposition of a PSD bipartite operator.
///
/// Succeeds with the unique block structure, fails with an explicit split
/// witness, or reports indeterminate when the seeded minimal-block search
/// exhausts its retries (tols.retries) without either certificate. All
/// randomness flows through `seed`.
inline ReducibilityReport decompose(const BipartiteOperator& a, double tol = 1e-9,
                                    unsigned long long seed = 0,
                                    const Tolerances& tols = default_tols()) {
  PsdReport psd = is_psd(a.mat, tols.psd, tols);
  if (!psd.ok)
    throw NotPsdInput("decompose: input not PSD (min eigenvalue " +
                      std::to_string(psd.min_eigenvalue) + ", hermiticity " +
                      std::to_string(psd.hermiticity) + ")");

  ReducibilityReport report;
  const double a_norm = a.mat.norm();
  if (a_norm == 0.0) {
    report.completely_reducible = true;
    return report;
  }

  detail::Decomposer dec(tol, seed, tols, a_norm, a.k);
  detail::SubResult res;
  try {
    res = dec.run(a, 0);
  } catch (const DegenerateClusterFailure&) {
    report.indeterminate = true;
    return report;
  }
  report.multiplicity_top = dec.root_multiplicity();

  if (res.status == detail::DecStatus::failed) {
    report.completely_reducible = false;
    report.witness = std::move(res.witness);
    return report;
  }
  if (res.status == detail::DecStatus::indeterminate) {
    report.indeterminate = true;
    report.witness = std::move(res.witness);
    return report;
  }

  // Verification pass over the assembled blocks.
  CMatrix sum = CMatrix::Zero(a.mat.rows(), a.mat.cols());
  for (const detail::SubBlock& sb : res.blocks) {
    Block blk;
    blk.V = sb.V;
    blk.W = sb.W;
    const CMatrix p = kron(sb.V, sb.W);
    blk.block_operator =
        BipartiteOperator(a.k, a.m, detail::hermitized(p * a.mat * p));
    blk.top_eigenvalue = sb.top_eigenvalue;
    blk.irreducible_certified = sb.certified;
    sum += blk.block_operator.mat;
    report.blocks.push_back(std::move(blk));
  }
  report.residual_norm = (a.mat - sum).norm() / a_norm;

  double ortho = 0.0;
  for (std::size_t i = 0; i < report.blocks.size(); ++i)
    for (std::size_t j = i + 1; j < report.blocks.size(); ++j) {
      ortho = std::max(ortho, (report.blocks[i].V * report.blocks[j].V).norm());
      ortho = std::max(ortho, (report.blocks[i].W * report.blocks[j].W).norm());
    }

  const double accept = std::max(tol, 100.0 * tols.split);
  if (report.residual_norm <= accept && ortho <= accept) {
    report.completely_reducible = true;
  } else {
    report.indeterminate = true; // construction did not survive verification
    report.blocks.clear();
  }
  return report;
}

/// Weak irreducibility via the Hermitian Schmidt decomposition: the top
/// coefficient must be simple and every factor range must sit inside the
/// range of the corresponding top factor.
inline bool is_weakly_irreducible(const BipartiteOperator& a, double tol = 1e-9,
                                  const Tolerances& tols = default_tols()) {
  if (a.mat.norm() == 0.0)
    throw ZeroOperator("is_weakly_irreducible: zero operator");
  PsdReport psd = is_psd(a.mat, tols.psd, tols);
  if (!psd.ok)
    throw NotPsdInput("is_weakly_irreducible: input not PSD (min eigenvalue " +
                      std::to_string(psd.min_eigenvalue) + ")");

  const SchmidtDecomposition d = hermitian_schmidt_decompose(a, tols);
  if (d.rank() == 0) throw ZeroOperator("is_weakly_irreducible: zero operator");
  if (d.rank() == 1) return true;
  if (d.lambdas[0] - d.lambdas[1] <= tols.cluster * d.lambdas[0]) return false;

  const CMatrix p1 = range_projector(d.gammas[0], tols.rank);
  const CMatrix q1 = range_projector(d.deltas[0], tols.rank);
  const CMatrix pc = CMatrix::Identity(a.k, a.k) - p1;
  const CMatrix qc = CMatrix::Identity(a.m, a.m) - q1;
  const double guard = std::max(tol, 10.0 * tols.rank);
  for (std::size_t i = 1; i < d.rank(); ++i) {
    if ((pc * d.gammas[i]).norm() > guard) return false;
    if ((qc * d.deltas[i]).norm() > guard) return false;
  }
  return true;
}

/// The unique Hermitian Schmidt decomposition with PSD factors that exists
/// when F_A o G_A is completely reducible with spectrum in {0, 1}: each
/// block contributes its normalized Perron vector gamma_i and delta_i =
/// G_A(gamma_i), all coefficients equal to 1.
inline SchmidtDecomposition positive_schmidt_unique(
    const BipartiteOperator& a, double tol = 1e-9, unsigned long long seed = 0,
    const Tolerances& tols = default_tols()) {
  const SuperOperator fg = fg_of(a, tols);
  const HermitianEigenSystem eig = hermitian_eig(fg.matrix, tols.hermitian);
  const double spec_tol = std::max(tol, tols.cluster);
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double v = eig.eigenvalues(i);
    if (std::abs(v) > spec_tol && std::abs(v - 1.0) > spec_tol)
      throw SpectrumNotZeroOne("positive_schmidt_unique: eigenvalue " +
                               std::to_string(v) + " of F_A o G_A");
  }

  ReducibilityReport rep = decompose(a, tol, seed, tols);
  if (!rep.completely_reducible) {
    std::string msg = "positive_schmidt_unique: F_A o G_A not completely reducible";
    if (rep.witness)
      msg += " (witness cross norm " + std::to_string(rep.witness->cross_norm) + ")";
    if (rep.indeterminate) msg += " [indeterminate]";
    throw NotCompletelyReducible(msg);
  }

  const SuperOperator g = g_of(a, tols);
  SchmidtDecomposition out;
  out.hermitian_flag = true;
  for (const Block& blk : rep.blocks) {
    const SuperOperator fgb = fg_of(blk.block_operator, tols);
    const HermitianEigenSystem be = hermitian_eig(fgb.matrix, tols.hermitian);
    CMatrix gamma = detail::hermitized(
        unvec_f(be.eigenvectors.col(be.eigenvalues.size() - 1), a.k, a.k));
    if (std::real(gamma.trace()) < 0.0) gamma = -gamma;
    gamma /= gamma.norm();
    if (std::abs(be.eigenvalues(be.eigenvalues.size() - 1) - 1.0) > spec_tol)
      throw SpectrumNotZeroOne("positive_schmidt_unique: block eigenvalue " +
                               std::to_string(be.eigenvalues(be.eigenvalues.size() - 1)));
    CMatrix delta = detail::hermitized(g.apply(gamma));
    if (!is_psd(gamma, tols.psd, tols).ok || !is_psd(delta, tols.psd, tols).ok)
      throw Error("positive_schmidt_unique: extracted factor not PSD");
    out.lambdas.push_back(1.0);
    out.gammas.push_back(std::move(gamma));
    out.deltas.push_back(std::move(delta));
  }

  const BipartiteOperator back = reconstruct(out, a.k, a.m);
  if ((back.mat - a.mat).norm() > std::max(tol, 100.0 * tols.reconstruction) *
                                      (1.0 + a.mat.norm()))
    throw Error("positive_schmidt_unique: reconstruction failed");
  return out;
}

} // namespace crm

#endif // CRM_REDUCIBILITY_HPP
