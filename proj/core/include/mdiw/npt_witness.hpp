#pragma once

#include <vector>

#include "mdiw/operators.hpp"
#include "mdiw/shift_ops.hpp"

namespace mdiw {

enum class Verdict { NPT, PPT, Boundary };

enum class CoeffMethod { Eigen, PowerSum, WitnessTrace };

/// Characteristic-polynomial coefficients a_0..a_upto of the partially
/// transposed state: a_k is the k-th elementary symmetric polynomial of the
/// PT spectrum. a_0 = a_1 = 1 always (partial transposition preserves the
/// trace). A coefficient inside the ±tol band is flagged as boundary rather
/// than rounded.
struct CoefficientReport {
  int local_dim = 0;
  RVec a;
  std::vector<CoeffMethod> method;
  std::vector<bool> boundary;
  Verdict verdict = Verdict::PPT;
  int first_negative = -1;  // smallest k with a_k < -tol; the copies needed
  double tol = 0.0;
};

/// The k-copy NPT witness, Hermitian on (H_A ⊗ H_B)^⊗k, built from copy
/// shifts so that Tr(W_k ρ^⊗k) = a_k(ρ^T_B) for every unit-trace ρ:
///   W_2 = ½ [I − V]
///   W_3 = ⅙ [I − 3 I⊗V + S_3 + S_3†]
///   W_4 = 1/24 I − ⅛ (S_4 + S_4†) + ⅙ I⊗(S_3 + S_3†) + ⅛ V⊗V − ¼ I⊗I⊗V
/// with V the two-copy swap and S_k the one-party-forward/other-party-
/// backward copy shift. Supported k: 2, 3, 4; dense materialization is
/// guarded at order (d²)^k ≤ 4096, which admits every supported case except
/// d ≥ 3 with k = 4 (use the eigen or power-sum coefficient routes there).
HermitianOperator build_witness(int k, int d);

/// Coefficient ladder by the chosen route:
///  - Eigen: elementary symmetric polynomials of the PT spectrum.
///  - PowerSum: Newton identities k·a_k = Σ_i (-1)^{i-1} a_{k-i} Tr((ρ^T_B)^i).
///  - WitnessTrace: a_k = Tr(W_k ρ^⊗k) for k ≤ 4 (size guard applies).
CoefficientReport coefficients(const DensityMatrix& rho, CoeffMethod method, int upto);
CoefficientReport coefficients(const DensityMatrix& rho, CoeffMethod method, int upto, double tol);

struct NptResult {
  Verdict verdict = Verdict::PPT;
  int first_negative = -1;
  CoefficientReport report;
};

/// Full-ladder NPT verdict: NPT iff some a_k < -tol, with the smallest such
/// k reported (the fewest shared copies that certify it).
NptResult npt_verdict(const DensityMatrix& rho);
NptResult npt_verdict(const DensityMatrix& rho, double tol);

/// det(ρ^T_B) for a two-qubit state, evaluated as the four-copy witness
/// trace Tr(W_4 ρ^⊗4). Negative exactly when the state is entangled.
double universal_det(const DensityMatrix& rho);

/// Measurement settings needed by full two-qudit state tomography: d⁴ − 1.
int tomography_cost(int d);

/// Observables needed to read off a_k: 1 for k = 2, 2 for k = 3, 4 for k = 4.
int witness_cost(int k);

}  // namespace mdiw
