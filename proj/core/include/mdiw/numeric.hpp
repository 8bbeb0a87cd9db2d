#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mdiw {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Absolute tolerances shared by the whole library. Validation of states and
/// operators uses the 1e-10 entries; NPT verdicts and entanglement flags use
/// decision_tol (the CLI maps MDIW_TOL onto it).
struct NumericPolicy {
  double hermiticity_tol = 1e-10;
  double trace_tol = 1e-10;
  double psd_tol = 1e-10;
  double decision_tol = 1e-9;
  double agreement_tol = 1e-10;
};

/// The single mutable policy record backing all default-tolerance arguments.
NumericPolicy& numeric_policy();

/// Precondition or invariant violation: bad dimensions, non-Hermitian data,
/// trace or positivity failures, rank-deficient input ensembles.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a request would materialize a dense operator past the size
/// guard instead of silently allocating gigabytes.
class SizeGuardError : public std::runtime_error {
 public:
  explicit SizeGuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mdiw
