#ifndef CRM_CLASSIFY_HPP
#define CRM_CLASSIFY_HPP

#include "crm/symmetry.hpp"
#include "crm/tensor.hpp"

namespace crm {

/// Membership flags and the diagnostics backing them. Non-PSD inputs are
/// legal: every class flag is then false and min_eigenvalue tells why.
///
/// spc_min_eig refers to the Hermitian part of S(A^t2); when that matrix is
/// not Hermitian (spc_herm_residual large) the SPC flag is false regardless.
struct ClassReport {
  Eigen::Index k = 0;
  Eigen::Index m = 0;
  bool input_psd = false;
  bool ppt = false;
  bool spc = false;
  bool invariant_realign = false;
  bool square = false;
  double min_eigenvalue = 0.0;     // of the Hermitian part of A
  double min_eig_pt = 0.0;         // least eigenvalue of A^t2
  double spc_min_eig = 0.0;        // least eigenvalue of Herm(S(A^t2)); square only
  double spc_herm_residual = 0.0;  // ||S(A^t2) - S(A^t2)^*||_F; square only
  double invariance_residual = 0.0;// ||A - S(A)||_F; square only
};

struct PptResult {
  bool ok = false;
  bool input_psd = false;
  double min_eig_pt = 0.0;
};

/// PPT test: A and A^t2 both PSD. Defined for rectangular dims.
inline PptResult is_ppt(const BipartiteOperator& a,
                        const Tolerances& tols = default_tols()) {
  PptResult r;
  r.input_psd = is_psd(a.mat, tols.psd, tols).ok;
  const PsdReport pt = is_psd(partial_transpose(a, Slot::second).mat, tols.psd, tols);
  r.min_eig_pt = pt.min_eigenvalue;
  r.ok = r.input_psd && pt.ok;
  return r;
}

struct SpcResult {
  bool ok = false;
  bool input_psd = false;
  double spc_min_eig = 0.0;
  double herm_residual = 0.0;
};

/// SPC test: A PSD and S(A^t2) PSD (the operator criterion for a symmetric
/// Hermitian Schmidt decomposition with positive coefficients).
inline SpcResult is_spc(const BipartiteOperator& a,
                        const Tolerances& tols = default_tols()) {
  if (!a.square_dims())
    throw NonSquareDims("is_spc: dims (" + std::to_string(a.k) + "," +
                        std::to_string(a.m) + ")");
  SpcResult r;
  r.input_psd = is_psd(a.mat, tols.psd, tols).ok;
  const CMatrix s_pt = realign(partial_transpose(a, Slot::second));
  const PsdReport rep = is_psd(s_pt, tols.psd, tols);
  r.spc_min_eig = rep.min_eigenvalue;
  r.herm_residual = rep.hermiticity;
  r.ok = r.input_psd && rep.ok;
  return r;
}

struct InvarianceResult {
  bool ok = false;
  bool input_psd = false;
  double residual = 0.0;
};

/// Invariance under realignment: A PSD and A = S(A) within tol.
inline InvarianceResult is_invariant_realign(const BipartiteOperator& a,
                                             double tol = 1e-9,
                                             const Tolerances& tols = default_tols()) {
  if (!a.square_dims())
    throw NonSquareDims("is_invariant_realign: dims (" + std::to_string(a.k) + "," +
                        std::to_string(a.m) + ")");
  InvarianceResult r;
  r.input_psd = is_psd(a.mat, tols.psd, tols).ok;
  r.residual = (a.mat - realign(a)).norm();
  r.ok = r.input_psd && r.residual <= tol * (1.0 + a.mat.norm());
  return r;
}

struct SigmaMembership {
  bool in_p_sigma = false;
  bool in_i_sigma = false;
};

/// P_sigma / I_sigma membership for one permutation: A PSD plus L_sigma(A)
/// PSD, respectively A fixed by L_sigma within tol.
inline SigmaMembership membership(const BipartiteOperator& a, const Perm4& sigma,
                                  double tol = 1e-9,
                                  const Tolerances& tols = default_tols()) {
  if (!a.square_dims())
    throw NonSquareDims("membership: dims (" + std::to_string(a.k) + "," +
                        std::to_string(a.m) + ")");
  const bool psd_in = is_psd(a.mat, tols.psd, tols).ok;
  const BipartiteOperator la = l_sigma(sigma, a);
  SigmaMembership r;
  r.in_p_sigma = psd_in && is_psd(la.mat, tols.psd, tols).ok;
  r.in_i_sigma = psd_in && (a.mat - la.mat).norm() <= tol * (1.0 + a.mat.norm());
  return r;
}

/// All three class flags computed independently, so inclusion claims between
/// the classes stay testable instead of assumed.
inline ClassReport classify(const BipartiteOperator& a, double tol = 1e-9,
                            const Tolerances& tols = default_tols()) {
  ClassReport rep;
  rep.k = a.k;
  rep.m = a.m;
  rep.square = a.square_dims();
  rep.min_eigenvalue = is_psd(a.mat, tols.psd, tols).min_eigenvalue;

  const PptResult ppt = is_ppt(a, tols);
  rep.input_psd = ppt.input_psd;
  rep.ppt = ppt.ok;
  rep.min_eig_pt = ppt.min_eig_pt;

  if (rep.square) {
    const SpcResult spc = is_spc(a, tols);
    rep.spc = spc.ok;
    rep.spc_min_eig = spc.spc_min_eig;
    rep.spc_herm_residual = spc.herm_residual;

    const InvarianceResult inv = is_invariant_realign(a, tol, tols);
    rep.invariant_realign = inv.ok;
    rep.invariance_residual = inv.residual;
  }
  return rep;
}

} // namespace crm

#endif // CRM_CLASSIFY_HPP
