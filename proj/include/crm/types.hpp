#ifndef CRM_TYPES_HPP
#define CRM_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace crm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Base class for every error thrown by this library. `kind` separates
/// violated input contracts from numerical breakdowns (the CLI maps them to
/// different exit codes).
struct Error : std::runtime_error {
  enum class Kind { input, numerical };
  Kind kind;
  explicit Error(const std::string& what, Kind k = Kind::numerical)
      : std::runtime_error(what), kind(k) {}
};

#define CRM_DEFINE_ERROR(NAME, KIND)                                     \
  struct NAME : Error {                                                  \
    explicit NAME(const std::string& what) : Error(what, Kind::KIND) {}  \
  }

CRM_DEFINE_ERROR(NonHermitianInput, input);
CRM_DEFINE_ERROR(NonSquareInput, input);
CRM_DEFINE_ERROR(NonSquareDims, input);
CRM_DEFINE_ERROR(NoConvergence, numerical);
CRM_DEFINE_ERROR(ZeroOperator, input);
CRM_DEFINE_ERROR(ZeroMap, numerical);
CRM_DEFINE_ERROR(DegenerateClusterFailure, numerical);
CRM_DEFINE_ERROR(DimensionMismatch, input);
CRM_DEFINE_ERROR(NotPsdInput, input);
CRM_DEFINE_ERROR(NotAnEigenvector, input);
CRM_DEFINE_ERROR(RecursionLimit, numerical);
CRM_DEFINE_ERROR(SpectrumNotZeroOne, input);
CRM_DEFINE_ERROR(NotCompletelyReducible, numerical);
CRM_DEFINE_ERROR(NotOrthonormal, input);
CRM_DEFINE_ERROR(DimMismatch, input);
CRM_DEFINE_ERROR(InputNotUnbiased, input);
CRM_DEFINE_ERROR(SpectrumMismatch, numerical);
CRM_DEFINE_ERROR(ExtractionFailure, numerical);
CRM_DEFINE_ERROR(NotPrime, input);
CRM_DEFINE_ERROR(BadDimension, input);
CRM_DEFINE_ERROR(BudgetExhausted, numerical);
CRM_DEFINE_ERROR(ParseError, input);

#undef CRM_DEFINE_ERROR

/// Single source of truth for every numerical threshold in the library.
///
/// All values are relative unless noted. The CLI exposes one global knob
/// that rescales the epsilon-like members via scaled(); individual checks
/// never hard-code their own constants.
struct Tolerances {
  double hermitian = 1e-10;     // hermiticity acceptance, relative to norm
  double reconstruction = 1e-10;// factorization reconstruction acceptance
  double psd = 1e-9;            // PSD slack: lambda_min >= -psd * max(1, lambda_max)
  double rank = 1e-9;           // singular values below rank * s_max count as zero
  double cluster = 1e-8;        // relative gap that merges eigen/singular values
  double schmidt_cut = 1e-12;   // Schmidt coefficients below cut * s_max are dropped
  double power = 1e-12;         // power-iteration convergence on normalized iterates
  double split = 1e-9;          // split residual acceptance, relative to ||A||_F
  int power_max_iter = 10000;
  int retries = 5;              // fresh random draws inside a degenerate eigenspace

  /// Rescale the epsilon-like members by (global / 1e-9), the CLI default.
  static Tolerances scaled(double global) {
    Tolerances t;
    const double r = global / 1e-9;
    t.hermitian *= r;
    t.reconstruction *= r;
    t.psd *= r;
    t.rank *= r;
    t.cluster *= r;
    t.schmidt_cut *= r;
    t.power *= r;
    t.split *= r;
    return t;
  }
};

inline const Tolerances& default_tols() {
  static const Tolerances t{};
  return t;
}

} // namespace crm

#endif // CRM_TYPES_HPP
