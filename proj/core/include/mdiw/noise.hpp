#pragma once

#include "mdiw/mdi_game.hpp"

namespace mdiw {

/// Imperfection model of the polarization Bell-state measurement plus the
/// referee-side preparation:
///  - mu1, mu2: per-side visibilities — of the Bell projector against white
///    noise in the beam-splitter model (together with delta1, delta2), and
///    of the input states against the n1/n2 noise states in the known-input-
///    noise model,
///  - delta1, delta2: wave-plate rotation errors (only the difference of the
///    two plate angles enters, so one angle per side suffices),
///  - xi: joint coincidence-detection efficiency multiplying every success
///    probability,
///  - nu with m1, m2: measurement visibility against a general additive
///    noise operator (coefficients over the two-party operator basis).
/// Empty coefficient vectors mean white noise.
struct NoiseParams {
  double mu1 = 1.0;
  double mu2 = 1.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double xi = 1.0;
  double nu = 1.0;
  RVec n1, n2;
  RVec m1, m2;

  void validate() const;
  static NoiseParams from_plate_angles(double g1, double g2);
};

/// cos(g2-g1) |Φ+⟩ + sin(g2-g1) |Ψ-⟩: the Bell vector after the two
/// polarization rotations, equal to (e^{-i g1 σy} ⊗ e^{-i g2 σy}) |Φ+⟩.
CVec rotated_bell(double g1, double g2);

/// μ |χ(Δ)⟩⟨χ(Δ)| + (1-μ)/4 I with |χ⟩ = rotated_bell(0, Δ); the one-sided
/// noisy Bell projector. PSD with top eigenvalue μ + (1-μ)/4.
HermitianOperator noisy_projector(double mu, double delta);

enum class IModMode { Simulated, ClosedForm };

/// The modified game value under the measurement-noise model:
///   I_mod = ξ Σ β_{s,t} Tr[(P_A ⊗ P_B)(τ_s ⊗ ρ ⊗ ω_t)].
/// Simulated mode contracts the exact noisy projectors and is the ground
/// truth. Closed-form mode evaluates the correlation-coefficient expansion,
/// which requires mu1 = mu2, delta1 = delta2, qubit ensembles with Bloch
/// vectors, and a two-qubit ρ. Pass referee_payoffs-normalized β to land on
/// the Tr(Wρ) scale the reproduction targets use.
double i_mod(const DensityMatrix& rho, const InputEnsemble& ens_a, const InputEnsemble& ens_b,
             const PayoffMatrix& beta, const NoiseParams& noise,
             IModMode mode = IModMode::Simulated);

/// The operator on the shared space whose expectation equals the simulated
/// I_mod: ξ Σ β_{s,t} K_A^{(s)} ⊗ K_B^{(t)}, with K the input-side
/// contraction of each noisy projector. Useful for sweeping many states
/// against one noise point.
HermitianOperator noisy_game_operator(const InputEnsemble& ens_a, const InputEnsemble& ens_b,
                                      const PayoffMatrix& beta, const NoiseParams& noise);

/// The multiplicative factor in front of the clean game value produced by
/// the white-noise parts of both projectors:
///   μ1 μ2 cos²Δ1 cos²Δ2 + μ1(1-μ2)cos²Δ1/4 + μ2(1-μ1)cos²Δ2/4
///   + (1-μ1)(1-μ2)/16.
double noise_scale_factor(const NoiseParams& noise);

/// μ τ + (1-μ)/d · (n·B): input state mixed with a known noise state given
/// by basis coefficients n (n empty = white noise, n[0] must be 1).
DensityMatrix noisy_input(const DensityMatrix& tau, double mu, const RVec& n);

/// One side's effective transposed input under measurement noise:
/// (1/d)(ν τ^T + (1-ν)/d · X) with X the referee-side contraction of the
/// noise operator. Two of these tensored give the operator whose plain
/// expectation on ρ is the noisy success probability.
CMat effective_input_factor(const DensityMatrix& tau, double nu, const CMat& noise_op,
                            bool a_side);

/// The effective pair operator of the noisy measurement: contracting it
/// against ρ reproduces prob_11 under the (ν, m1, m2) model exactly. For
/// white measurement noise this is the generalized-Bloch shrinking
/// (1/d⁴)(I + ν Γ·tr(Γτ^T)) ⊗ (I + ν Γ·tr(Γω^T)).
HermitianOperator effective_noisy_inputs(const DensityMatrix& tau, const DensityMatrix& omega,
                                         double nu, const RVec& m1, const RVec& m2);

/// Success probability under the noisy measurement (ν ·Bell + (1-ν)/d² ·M on
/// each side), by the full product-space trace. Oracle route for the
/// effective-operator reduction.
double noisy_measurement_prob(const DensityMatrix& tau, const DensityMatrix& rho,
                              const DensityMatrix& omega, double nu, const RVec& m1,
                              const RVec& m2);

/// Payoffs re-solved against the effective noisy input family so the noisy
/// game still reports Tr(W ρ). Throws when noise collapses the family's rank
/// (for example ν = 0, where every effective input is the same).
PayoffMatrix corrected_betas(const HermitianOperator& w, const InputEnsemble& ens_a,
                             const InputEnsemble& ens_b, const NoiseParams& noise);

/// Game value of the noisy run evaluated with corrected payoffs; recovers
/// the clean Tr(W ρ) when the noise description is accurate.
double corrected_game_value(const HermitianOperator& w, const InputEnsemble& ens_a,
                            const InputEnsemble& ens_b, const NoiseParams& noise,
                            const DensityMatrix& rho);

/// Tr[(W'' - W) ρ]: the bias a referee incurs by keeping the clean payoffs
/// while inputs and measurement are noisy. Equals the uncorrected noisy game
/// value minus the clean one.
double uncorrected_error(const HermitianOperator& w, const InputEnsemble& ens_a,
                         const InputEnsemble& ens_b, const NoiseParams& noise,
                         const DensityMatrix& rho);

}  // namespace mdiw
