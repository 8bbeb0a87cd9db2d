#pragma once

#include <vector>

#include "mdiw/numeric.hpp"
#include "mdiw/tensor.hpp"

namespace mdiw {

/// A quantum state: Hermitian, unit trace, positive semidefinite (all within
/// the policy tolerances), carrying its subsystem dimension vector.
struct DensityMatrix {
  std::vector<int> dims;
  CMat data;

  /// Validates all three state invariants; throws ValidationError naming the
  /// violated one.
  static DensityMatrix make(std::vector<int> dims, CMat data);

  /// Skips validation; for values that are valid by construction.
  static DensityMatrix unchecked(std::vector<int> dims, CMat data);

  int order() const { return static_cast<int>(data.rows()); }
};

/// A Hermitian observable with subsystem structure. No trace or positivity
/// constraint.
struct HermitianOperator {
  std::vector<int> dims;
  CMat data;

  static HermitianOperator make(std::vector<int> dims, CMat data);
  static HermitianOperator unchecked(std::vector<int> dims, CMat data);

  int order() const { return static_cast<int>(data.rows()); }
};

/// Orthogonal Hermitian operator basis of a d-dimensional space, element 0
/// the identity, the rest traceless, normalized to Tr(B_i B_j) = d δ_ij.
/// That normalization makes expand_in_basis the plain divided trace.
struct BasisSet {
  int local_dim = 0;
  std::vector<CMat> elements;

  int size() const { return static_cast<int>(elements.size()); }
};

/// Generalized Gell-Mann construction scaled to Tr(B_i B_j) = d δ_ij.
/// For d = 2 this is exactly {I, σx, σy, σz}.
BasisSet gell_mann_basis(int d);

/// Coefficients c_i = Tr(H B_i) / d, real for Hermitian H.
RVec expand_in_basis(const CMat& h, const BasisSet& basis);

/// Σ c_i B_i; inverse of expand_in_basis.
CMat reconstruct_from_coeffs(const RVec& c, const BasisSet& basis);

/// Coefficients of a bipartite operator in the product basis {A_i ⊗ B_j}:
/// C(i,j) = Tr(H (A_i ⊗ B_j)) / (dA*dB), computed by two staged mode
/// contractions rather than dA²·dB² explicit traces.
RMat expand_bipartite(const CMat& h, const BasisSet& basis_a, const BasisSet& basis_b);

/// Ascending real spectrum of a Hermitian matrix. Throws if the hermiticity
/// defect exceeds the policy tolerance.
RVec hermitian_eigenvalues(const CMat& h);
RVec hermitian_eigenvalues(const HermitianOperator& h);
RVec hermitian_eigenvalues(const DensityMatrix& rho);

DensityMatrix partial_transpose(const DensityMatrix& rho, int subsystem);
HermitianOperator partial_transpose(const HermitianOperator& h, int subsystem);

}  // namespace mdiw
