#pragma once

#include <vector>

#include "mdiw/operators.hpp"

namespace mdiw {

/// Largest operator order materialized as a dense matrix. Above this only
/// matrix-free application and contraction are available.
inline constexpr int kDenseGuardMaxOrder = 4096;

/// A tensor-slot permutation: output slot s carries input slot source_of[s].
/// Every copy-shift operator here is one of these; in the computational
/// basis it is a 0/1 matrix, unitary, with transpose equal to the inverse
/// permutation. Stored as an index map and materialized dense only on demand.
struct PermutationOperator {
  std::vector<int> slot_dims;
  std::vector<int> source_of;

  int slot_count() const { return static_cast<int>(slot_dims.size()); }
  int order() const;
  bool is_hermitian() const;
  bool is_identity() const;

  /// Inverse permutation; equals the matrix transpose (and adjoint).
  PermutationOperator transposed() const;

  /// Matrix-free application to a state vector.
  CVec apply(const CVec& v) const;

  /// Composite-index image: the basis map |z⟩ → |π(z)⟩.
  Eigen::Index map_index(Eigen::Index z) const;

  /// Dense 0/1 matrix; throws SizeGuardError past kDenseGuardMaxOrder.
  CMat dense() const;

  /// P M P† by index relabeling, for basis reorderings of dense operators.
  CMat conjugate_matrix(const CMat& m) const;

  void validate() const;
};

/// Cyclic shift of k tensor copies, each copy spanning the given local dims
/// laid out copy-major: copy 0's slots first, then copy 1's, and so on.
/// Sends copy contents c → c+1 (mod k).
PermutationOperator cyclic_copy_shift(int k, const std::vector<int>& copy_dims);

/// Shift of k copies of the full bipartite space (dims {dA, dB} per copy).
PermutationOperator bipartite_shift(int k, int d_a, int d_b);

/// Shift of k copies of a single d-dimensional party.
PermutationOperator tilde_shift(int k, int d);

/// One party's copies cycled forward while the other party's copies cycle
/// backward, on the interleaved layout A1 B1 A2 B2 ... This is the
/// partial-transpose image of the full copy shift: contracting it against
/// ρ^⊗k yields Tr((ρ^T_B)^k).
PermutationOperator pt_shift(int k, int d_a, int d_b);

/// ½ (V + V†) as a dense Hermitian operator (size guard applies).
HermitianOperator symmetrize(const PermutationOperator& v);

/// Tr(P (F_0 ⊗ F_1 ⊗ ...)) without materializing the product state. Factors
/// cover consecutive slot groups whose dimension products match the factor
/// orders. Cost O(order · slots), memory O(1).
Complex trace_against_product(const PermutationOperator& p, const std::vector<CMat>& factors);

/// Tr(ρ^k) computed along two independent routes, the cyclic-shift
/// contraction and the plain matrix power, which must agree to the policy
/// tolerance. The shift route never materializes ρ^⊗k.
double trace_power(const DensityMatrix& rho, int k);

}  // namespace mdiw
