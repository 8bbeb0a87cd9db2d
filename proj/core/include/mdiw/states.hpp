#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdiw/operators.hpp"

namespace mdiw {

/// Two-qubit correlation parametrization
///   ρ = ¼ (I⊗I + Σ a_i I⊗σ_i + Σ b_i σ_i⊗I + Σ c_ij σ_i⊗σ_j).
/// Composing an arbitrary form gives a unit-trace Hermitian operator;
/// positivity is only checked when converting to a DensityMatrix.
struct BlochForm {
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
};

/// Labeled referee input states, all on one local dimension. For qubit
/// ensembles the Bloch vectors are carried alongside and checked against the
/// states at construction.
struct InputEnsemble {
  std::vector<std::string> labels;
  std::vector<DensityMatrix> states;
  std::optional<std::vector<Eigen::Vector3d>> bloch;

  int size() const { return static_cast<int>(states.size()); }
  int local_dim() const;
  void validate() const;
};

/// σ_0..σ_3 = I, σx, σy, σz.
const CMat& pauli(int i);

/// Maximally entangled |Φ⟩ = (1/√d) Σ_j |jj⟩ on d ⊗ d.
DensityMatrix bell_state(int d);

/// The singlet (|01⟩ - |10⟩)/√2 as a density matrix.
DensityMatrix psi_minus();

/// p · singlet + (1-p)/4 · I. Rejects p outside [0, 1].
DensityMatrix werner_state(double p);

/// (1-r) · singlet + r/2 (|00⟩⟨00| + |11⟩⟨11|). Rejects r outside [0, 1].
DensityMatrix timeshift_state(double r);

/// The six-polarization qubit ensemble H, V, D, Dbar, L, R with Bloch
/// vectors ±z, ±x, ±y.
InputEnsemble table1_ensemble();

/// Ginibre state G G† / Tr(G G†), full rank with probability one and
/// deterministic in the seed.
DensityMatrix random_density(int d, std::uint64_t seed);
DensityMatrix random_density(const std::vector<int>& dims, std::uint64_t seed);

/// Convex mixture of `terms` independent Ginibre product states with
/// Dirichlet(1,..,1) weights. PPT by construction.
DensityMatrix random_separable(int d_a, int d_b, int terms, std::uint64_t seed);

/// Pauli-trace decomposition of a 2 ⊗ 2 state; exact inverse of bloch_compose.
BlochForm bloch_decompose(const DensityMatrix& rho);
HermitianOperator bloch_compose(const BlochForm& form);

/// (I + r·σ)/2 for |r| ≤ 1.
DensityMatrix qubit_from_bloch(const Eigen::Vector3d& r);

}  // namespace mdiw
