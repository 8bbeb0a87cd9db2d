#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdiw/states.hpp"

namespace mdiw {

/// Referee payoff coefficients β_{s,t} over two input ensembles. The note
/// records the normalization; the pre-maximization payoffs of the raw game
/// are never materialized here (the separable maximization is already folded
/// into the witness constraint Tr(Wσ) ≥ 0).
struct PayoffMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  RMat beta;
  std::string note;
};

/// Joint success probabilities P(1,1|s,t), entrywise in [0, 1] within 1e-12.
struct ProbabilityTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  RMat p;

  void validate() const;
};

/// Rank-one projector onto (1/√D) Σ |ii⟩ on D ⊗ D.
HermitianOperator bell_projector(int d);

enum class ProbMode { Reduced, Direct };

/// P(1,1|s,t) for one input pair: the joint Bell projection succeeding on
/// both sides of τ ⊗ ρ ⊗ ω. Reduced mode evaluates the equivalent
/// Tr[(τ^T ⊗ ω^T) ρ] / (D_A D_B); direct mode contracts the rank-one
/// measurement vector through the full product state matrix-free, which
/// stays cheap even on the 65536-dimensional four-copy geometry.
double prob_11(const DensityMatrix& tau, const DensityMatrix& rho, const DensityMatrix& omega,
               ProbMode mode = ProbMode::Reduced);

/// Exact probability table over two ensembles (reduced route, vectorized
/// through the operator-basis expansion of ρ).
ProbabilityTable exact_probability_table(const InputEnsemble& ens_a, const InputEnsemble& ens_b,
                                         const DensityMatrix& rho);

/// Minimum-Frobenius-norm β with Σ β_{s,t} τ_s^T ⊗ ω_t^T = W, found from two
/// per-side least-squares problems on the ensembles' operator-basis
/// coefficient frames (never one (dA²dB²)-sized dense solve). Throws if an
/// ensemble is not informationally complete.
PayoffMatrix solve_betas(const HermitianOperator& w, const InputEnsemble& ens_a,
                         const InputEnsemble& ens_b);

/// solve_betas scaled by D_A·D_B: with these payoffs the game value equals
/// Tr(W ρ) itself, the normalization under which the reproduction targets
/// and noise closed forms are quoted.
PayoffMatrix referee_payoffs(const HermitianOperator& w, const InputEnsemble& ens_a,
                             const InputEnsemble& ens_b);

/// Σ β_{s,t} P(1,1|s,t). With literal solve_betas payoffs this equals
/// Tr(W ρ)/(D_A D_B); with referee_payoffs it equals Tr(W ρ).
double game_value(const PayoffMatrix& beta, const ProbabilityTable& p);

/// Informationally complete single-party ensemble {I/d} ∪ {(I + εB_i)/d}
/// over the traceless basis elements, ε = 1/(d-1); positivity is checked at
/// construction.
InputEnsemble gellmann_frame_ensemble(int d);

/// Four copies of a two-qubit state regrouped so that all A factors precede
/// all B factors: the 256-dimensional bipartite state the four-copy game is
/// played on.
DensityMatrix four_copy_grouped(const DensityMatrix& rho);

/// The four-copy determinant witness expressed in the grouped (16 ⊗ 16)
/// basis, ready for payoff solving against dim-16 input ensembles.
HermitianOperator universal_witness_grouped();

/// Runs the four-copy game: payoffs solved against the grouped witness,
/// probabilities by the reduced route, returning Σ β P = det(ρ^T_B).
double universal_mdi_run(const DensityMatrix& rho, const InputEnsemble& ens_a,
                         const InputEnsemble& ens_b);
double universal_mdi_run(const DensityMatrix& rho);

struct ShotEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  long long shots_per_pair = 0;
};

/// Finite-statistics simulation: an independent binomial draw per input pair
/// (seeded per pair, so parallel evaluation cannot change the stream),
/// estimator Σ β P̂ with standard error sqrt(Σ β² P̂(1-P̂)/N).
ShotEstimate sample_shots(const ProbabilityTable& p, const PayoffMatrix& beta,
                          long long shots_per_pair, std::uint64_t seed);

/// The single-copy two-qubit game: six-polarization inputs against the
/// swap/2 witness (¼[I⊗I + Σ σ_k⊗σ_k]), payoffs in the Tr(Wρ) normalization.
struct TwoQubitGame {
  InputEnsemble ens_a;
  InputEnsemble ens_b;
  HermitianOperator witness;
  PayoffMatrix payoffs;
};
TwoQubitGame standard_two_qubit_game();

/// ½ · SWAP on 2 ⊗ 2; nonnegative on every separable state, −½ on the
/// singlet.
HermitianOperator swap_witness();

}  // namespace mdiw
