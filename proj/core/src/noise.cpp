#include "mdiw/noise.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace mdiw {

namespace {

const BasisSet& cached_basis(int d) {
  static std::map<int, BasisSet> cache;
  static std::mutex mutex;
  std::scoped_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(d);
  if (inserted) it->second = gell_mann_basis(d);
  return it->second;
}

void check_unit_interval(double v, const char* name) {
  if (v < 0.0 || v > 1.0)
    throw ValidationError(std::string(name) + " must lie in [0, 1]");
}

// Noise-state coefficients over the local basis; empty means white noise.
CMat noise_operator(const RVec& coeffs, int d, const char* name) {
  const BasisSet& basis = cached_basis(d);
  if (coeffs.size() == 0) return CMat::Identity(d, d);
  if (coeffs.size() != basis.size())
    throw ValidationError(std::string(name) + " coefficient vector has wrong length");
  if (std::abs(coeffs[0] - 1.0) > numeric_policy().trace_tol)
    throw ValidationError(std::string(name) + " identity coefficient must be 1");
  CMat op = reconstruct_from_coeffs(coeffs, basis);
  const RVec eigs = hermitian_eigenvalues(op);
  if (eigs.minCoeff() < -numeric_policy().psd_tol)
    throw ValidationError(std::string(name) + " noise operator is not positive semidefinite");
  return op;
}

}  // namespace

void NoiseParams::validate() const {
  check_unit_interval(mu1, "mu1");
  check_unit_interval(mu2, "mu2");
  check_unit_interval(xi, "xi");
  check_unit_interval(nu, "nu");
}

NoiseParams NoiseParams::from_plate_angles(double g1, double g2) {
  NoiseParams p;
  p.delta1 = p.delta2 = g2 - g1;
  return p;
}

CVec rotated_bell(double g1, double g2) {
  const double delta = g2 - g1;
  CVec phi_plus = CVec::Zero(4);
  phi_plus[0] = phi_plus[3] = Complex(1.0 / std::sqrt(2.0), 0);
  CVec psi_m = CVec::Zero(4);
  psi_m[1] = Complex(1.0 / std::sqrt(2.0), 0);
  psi_m[2] = Complex(-1.0 / std::sqrt(2.0), 0);
  return std::cos(delta) * phi_plus + std::sin(delta) * psi_m;
}

HermitianOperator noisy_projector(double mu, double delta) {
  check_unit_interval(mu, "mu");
  const CVec chi = rotated_bell(0.0, delta);
  CMat p = mu * (chi * chi.adjoint()) + (1.0 - mu) / 4.0 * CMat::Identity(4, 4);
  return HermitianOperator::unchecked({2, 2}, std::move(p));
}

double noise_scale_factor(const NoiseParams& noise) {
  const double c1 = std::cos(noise.delta1) * std::cos(noise.delta1);
  const double c2 = std::cos(noise.delta2) * std::cos(noise.delta2);
  return noise.mu1 * noise.mu2 * c1 * c2 + noise.mu1 * (1.0 - noise.mu2) * c1 / 4.0 +
         noise.mu2 * (1.0 - noise.mu1) * c2 / 4.0 +
         (1.0 - noise.mu1) * (1.0 - noise.mu2) / 16.0;
}

namespace {

// Contraction of one noisy projector against an input state:
// K(a, a') = Σ_{o,o'} P[(o, a), (o', a')] τ(o', o), an operator on the
// player's share with Tr[(K_A ⊗ K_B) ρ] the success probability.
CMat input_contraction(const CMat& projector, const CMat& input, bool input_first) {
  const int d_in = static_cast<int>(input.rows());
  const int d_keep = static_cast<int>(projector.rows()) / d_in;
  CMat k = CMat::Zero(d_keep, d_keep);
  for (int a = 0; a < d_keep; ++a)
    for (int ap = 0; ap < d_keep; ++ap) {
      Complex acc(0, 0);
      for (int o = 0; o < d_in; ++o)
        for (int op = 0; op < d_in; ++op) {
          // A side: projector indexed (input, keep); B side: (keep, input).
          const int row = input_first ? o * d_keep + a : a * d_in + o;
          const int col = input_first ? op * d_keep + ap : ap * d_in + op;
          acc += projector(row, col) * input(op, o);
        }
      k(a, ap) = acc;
    }
  return k;
}

struct GameIndex {
  const InputEnsemble& ens_a;
  const InputEnsemble& ens_b;
  const PayoffMatrix& beta;
};

void check_game_index(const GameIndex& g) {
  g.ens_a.validate();
  g.ens_b.validate();
  if (g.beta.row_labels != g.ens_a.labels || g.beta.col_labels != g.ens_b.labels)
    throw ValidationError("payoff matrix is not indexed by the given ensembles");
}

void check_closed_form_supported(const DensityMatrix& rho, const InputEnsemble& ens_a,
                                 const InputEnsemble& ens_b, const NoiseParams& noise) {
  if (std::abs(noise.mu1 - noise.mu2) > 0.0 || std::abs(noise.delta1 - noise.delta2) > 0.0)
    throw ValidationError("closed form requires equal visibilities and plate errors");
  if (!ens_a.bloch || !ens_b.bloch)
    throw ValidationError("closed form requires qubit ensembles with Bloch vectors");
  if (rho.dims != std::vector<int>{2, 2})
    throw ValidationError("closed form requires a two-qubit shared state");
}

}  // namespace

HermitianOperator noisy_game_operator(const InputEnsemble& ens_a, const InputEnsemble& ens_b,
                                      const PayoffMatrix& beta, const NoiseParams& noise) {
  check_game_index({ens_a, ens_b, beta});
  noise.validate();
  if (ens_a.local_dim() != 2 || ens_b.local_dim() != 2)
    throw ValidationError("the beam-splitter noise model is a two-qubit measurement model");

  const CMat pa = noisy_projector(noise.mu1, noise.delta1).data;
  const CMat pb = noisy_projector(noise.mu2, noise.delta2).data;

  std::vector<CMat> ka(static_cast<std::size_t>(ens_a.size()));
  std::vector<CMat> kb(static_cast<std::size_t>(ens_b.size()));
  for (int s = 0; s < ens_a.size(); ++s)
    ka[static_cast<std::size_t>(s)] =
        input_contraction(pa, ens_a.states[static_cast<std::size_t>(s)].data, true);
  for (int t = 0; t < ens_b.size(); ++t)
    kb[static_cast<std::size_t>(t)] =
        input_contraction(pb, ens_b.states[static_cast<std::size_t>(t)].data, false);

  CMat op = CMat::Zero(4, 4);
  for (int s = 0; s < ens_a.size(); ++s)
    for (int t = 0; t < ens_b.size(); ++t) {
      const double b = beta.beta(s, t);
      if (b == 0.0) continue;
      op += b * kron(ka[static_cast<std::size_t>(s)], kb[static_cast<std::size_t>(t)]);
    }
  op *= noise.xi;
  return HermitianOperator::unchecked({2, 2}, std::move(op));
}

double i_mod(const DensityMatrix& rho, const InputEnsemble& ens_a, const InputEnsemble& ens_b,
             const PayoffMatrix& beta, const NoiseParams& noise, IModMode mode) {
  if (mode == IModMode::Simulated) {
    const HermitianOperator op = noisy_game_operator(ens_a, ens_b, beta, noise);
    if (rho.order() != op.order())
      throw ValidationError("shared state does not match the game operator");
    return (op.data * rho.data).trace().real();
  }

  check_game_index({ens_a, ens_b, beta});
  noise.validate();
  check_closed_form_supported(rho, ens_a, ens_b, noise);

  const BlochForm f = bloch_decompose(rho);
  const double mu = noise.mu1;
  const double d2 = 2.0 * noise.delta1;
  const double s2 = std::sin(d2), c2 = std::cos(d2);
  const double s4 = std::sin(2.0 * d2);
  const double s2sq = s2 * s2, c2sq = c2 * c2;
  const auto& ra = *ens_a.bloch;
  const auto& rb = *ens_b.bloch;

  double acc = 0.0;
  for (int s = 0; s < ens_a.size(); ++s) {
    const double xs = ra[static_cast<std::size_t>(s)][0];
    const double ys = ra[static_cast<std::size_t>(s)][1];
    const double zs = ra[static_cast<std::size_t>(s)][2];
    for (int t = 0; t < ens_b.size(); ++t) {
      const double b = beta.beta(s, t);
      if (b == 0.0) continue;
      const double xt = rb[static_cast<std::size_t>(t)][0];
      const double yt = rb[static_cast<std::size_t>(t)][1];
      const double zt = rb[static_cast<std::size_t>(t)][2];

      const double a1 = f.a[0], a2 = f.a[1], a3 = f.a[2];
      const double b1 = f.b[0], b2 = f.b[1], b3 = f.b[2];
      const auto& c = f.c;
      double bracket = 2.0;
      bracket += 2.0 * a3 * mu * s2 * xt;
      bracket += 2.0 * a1 * mu * c2 * xt;
      bracket += -2.0 * a2 * mu * yt;
      bracket += -2.0 * a1 * mu * s2 * zt;
      bracket += 2.0 * a3 * mu * c2 * zt;
      bracket += 2.0 * b1 * mu * (c2 * xs + s2 * zs);
      bracket += -2.0 * b3 * mu * (s2 * xs - c2 * zs);
      bracket += -2.0 * b2 * mu * ys;
      bracket += -2.0 * c(2, 2) * mu * mu * s2sq * xs * xt;
      bracket += c(0, 2) * mu * mu * s4 * xs * xt;
      bracket += -c(2, 0) * mu * mu * s4 * xs * xt;
      bracket += 2.0 * c(0, 0) * mu * mu * c2sq * xs * xt;
      bracket += -2.0 * c(1, 2) * mu * mu * s2 * ys * xt;
      bracket += 2.0 * c(2, 1) * mu * mu * s2 * xs * yt;
      bracket += -2.0 * c(1, 0) * mu * mu * c2 * ys * xt;
      bracket += -2.0 * c(0, 1) * mu * mu * c2 * xs * yt;
      bracket += 2.0 * c(0, 2) * mu * mu * s2sq * zs * xt;
      bracket += 2.0 * c(2, 0) * mu * mu * s2sq * xs * zt;
      bracket += c(0, 0) * mu * mu * s4 * zs * xt;
      bracket += c(2, 2) * mu * mu * s4 * zs * xt;
      bracket += -c(0, 0) * mu * mu * s4 * xs * zt;
      bracket += -c(2, 2) * mu * mu * s4 * xs * zt;
      bracket += 2.0 * c(2, 0) * mu * mu * c2sq * zs * xt;
      bracket += 2.0 * c(0, 2) * mu * mu * c2sq * xs * zt;
      bracket += 2.0 * c(1, 1) * mu * mu * ys * yt;
      bracket += -2.0 * c(0, 1) * mu * mu * s2 * zs * yt;
      bracket += 2.0 * c(1, 0) * mu * mu * s2 * ys * zt;
      bracket += -2.0 * c(2, 1) * mu * mu * c2 * zs * yt;
      bracket += -2.0 * c(1, 2) * mu * mu * c2 * ys * zt;
      bracket += -2.0 * c(0, 0) * mu * mu * s2sq * zs * zt;
      bracket += c(0, 2) * mu * mu * s4 * zs * zt;
      bracket += -c(2, 0) * mu * mu * s4 * zs * zt;
      bracket += 2.0 * c(2, 2) * mu * mu * c2sq * zs * zt;

      acc += b * bracket;
    }
  }
  const double d_ab = 4.0;
  return noise.xi / (8.0 * d_ab) * acc;
}

DensityMatrix noisy_input(const DensityMatrix& tau, double mu, const RVec& n) {
  check_unit_interval(mu, "input visibility");
  const int d = tau.order();
  const CMat noise_state = noise_operator(n, d, "input") / static_cast<double>(d);
  CMat out = mu * tau.data + (1.0 - mu) * noise_state;
  return DensityMatrix::unchecked(tau.dims, std::move(out));
}

CMat effective_input_factor(const DensityMatrix& tau, double nu, const CMat& noise_op,
                            bool a_side) {
  check_unit_interval(nu, "nu");
  const int d = tau.order();
  if (noise_op.rows() != d * d)
    throw ValidationError("measurement noise operator has wrong order");
  // Referee-side contraction of the noise operator: the A-side projector is
  // indexed (referee, player), the B side (player, referee).
  const CMat x = a_side
                     ? partial_trace(kron(tau.data, CMat::Identity(d, d)) * noise_op, {d, d}, 0)
                     : partial_trace(noise_op * kron(CMat::Identity(d, d), tau.data), {d, d}, 1);
  return (nu * tau.data.transpose() + (1.0 - nu) / d * x) / static_cast<double>(d);
}

HermitianOperator effective_noisy_inputs(const DensityMatrix& tau, const DensityMatrix& omega,
                                         double nu, const RVec& m1, const RVec& m2) {
  const int d_a = tau.order();
  const int d_b = omega.order();
  const CMat op1 = noise_operator(m1, d_a * d_a, "m1");
  const CMat op2 = noise_operator(m2, d_b * d_b, "m2");
  // The full noisy measurement operator must stay positive.
  const CMat meas_a =
      nu * bell_projector(d_a).data + (1.0 - nu) / (d_a * d_a) * op1;
  if (hermitian_eigenvalues(meas_a).minCoeff() < -numeric_policy().psd_tol)
    throw ValidationError("noisy measurement operator is not positive semidefinite");
  const CMat meas_b =
      nu * bell_projector(d_b).data + (1.0 - nu) / (d_b * d_b) * op2;
  if (hermitian_eigenvalues(meas_b).minCoeff() < -numeric_policy().psd_tol)
    throw ValidationError("noisy measurement operator is not positive semidefinite");

  const CMat fa = effective_input_factor(tau, nu, op1, true);
  const CMat fb = effective_input_factor(omega, nu, op2, false);
  return HermitianOperator::unchecked({d_a, d_b}, kron(fa, fb));
}

double noisy_measurement_prob(const DensityMatrix& tau, const DensityMatrix& rho,
                              const DensityMatrix& omega, double nu, const RVec& m1,
                              const RVec& m2) {
  check_unit_interval(nu, "nu");
  if (rho.dims.size() != 2)
    throw ValidationError("noisy_measurement_prob requires a bipartite shared state");
  const int d_a = rho.dims[0];
  const int d_b = rho.dims[1];
  if (tau.order() != d_a || omega.order() != d_b)
    throw ValidationError("input dimensions do not match the shared state");
  const CMat meas_a = nu * bell_projector(d_a).data +
                      (1.0 - nu) / (d_a * d_a) * noise_operator(m1, d_a * d_a, "m1");
  const CMat meas_b = nu * bell_projector(d_b).data +
                      (1.0 - nu) / (d_b * d_b) * noise_operator(m2, d_b * d_b, "m2");
  // Full trace on (A_O, A, B, B_O).
  const CMat state = kron(kron(tau.data, rho.data), omega.data);
  const CMat measurement = kron(meas_a, meas_b);
  return (measurement * state).trace().real();
}

namespace {

InputEnsemble effective_family(const InputEnsemble& ens, const NoiseParams& noise, bool a_side) {
  const int d = ens.local_dim();
  const RVec& n = a_side ? noise.n1 : noise.n2;
  const RVec& m = a_side ? noise.m1 : noise.m2;
  const double mu = a_side ? noise.mu1 : noise.mu2;
  const CMat noise_op = noise_operator(m, d * d, a_side ? "m1" : "m2");

  InputEnsemble out;
  out.labels = ens.labels;
  for (const DensityMatrix& s : ens.states) {
    const DensityMatrix prime = noisy_input(s, mu, n);
    const CMat factor = effective_input_factor(prime, noise.nu, noise_op, a_side);
    // d * factor = ν τ'^T + (1-ν)/d X: unit trace and Hermitian but not
    // necessarily positive; carried as a raw frame member for the solve.
    out.states.push_back(
        DensityMatrix::unchecked({d}, static_cast<double>(d) * factor.transpose()));
  }
  return out;
}

}  // namespace

PayoffMatrix corrected_betas(const HermitianOperator& w, const InputEnsemble& ens_a,
                             const InputEnsemble& ens_b, const NoiseParams& noise) {
  noise.validate();
  // The effective family is what the noisy run actually probes; solving
  // against it restores Σ β' ⟨noisy probabilities⟩ = Tr(W ρ)/(dA dB).
  InputEnsemble eff_a = effective_family(ens_a, noise, true);
  InputEnsemble eff_b = effective_family(ens_b, noise, false);
  PayoffMatrix payoff = solve_betas(w, eff_a, eff_b);
  payoff.beta *= static_cast<double>(ens_a.local_dim()) * ens_b.local_dim();
  payoff.note = "noise-corrected referee payoffs: noisy game value = Tr(W rho)";
  return payoff;
}

namespace {

double noisy_pair_game_value(const InputEnsemble& ens_a, const InputEnsemble& ens_b,
                             const RMat& beta, const NoiseParams& noise,
                             const DensityMatrix& rho) {
  const int d_a = ens_a.local_dim();
  const int d_b = ens_b.local_dim();
  const CMat op1 = noise_operator(noise.m1, d_a * d_a, "m1");
  const CMat op2 = noise_operator(noise.m2, d_b * d_b, "m2");
  double acc = 0.0;
  for (int s = 0; s < ens_a.size(); ++s) {
    const DensityMatrix tau = noisy_input(ens_a.states[static_cast<std::size_t>(s)],
                                          noise.mu1, noise.n1);
    const CMat fa = effective_input_factor(tau, noise.nu, op1, true);
    for (int t = 0; t < ens_b.size(); ++t) {
      if (beta(s, t) == 0.0) continue;
      const DensityMatrix omega = noisy_input(ens_b.states[static_cast<std::size_t>(t)],
                                              noise.mu2, noise.n2);
      const CMat fb = effective_input_factor(omega, noise.nu, op2, false);
      acc += beta(s, t) * (kron(fa, fb) * rho.data).trace().real();
    }
  }
  return acc * noise.xi;
}

}  // namespace

double corrected_game_value(const HermitianOperator& w, const InputEnsemble& ens_a,
                            const InputEnsemble& ens_b, const NoiseParams& noise,
                            const DensityMatrix& rho) {
  if (noise.xi <= 0.0) throw ValidationError("corrected game value needs xi > 0");
  const PayoffMatrix corrected = corrected_betas(w, ens_a, ens_b, noise);
  return noisy_pair_game_value(ens_a, ens_b, corrected.beta, noise, rho) / noise.xi;
}

double uncorrected_error(const HermitianOperator& w, const InputEnsemble& ens_a,
                         const InputEnsemble& ens_b, const NoiseParams& noise,
                         const DensityMatrix& rho) {
  noise.validate();
  const PayoffMatrix clean = solve_betas(w, ens_a, ens_b);
  const int d_a = ens_a.local_dim();
  const int d_b = ens_b.local_dim();
  const CMat op1 = noise_operator(noise.m1, d_a * d_a, "m1");
  const CMat op2 = noise_operator(noise.m2, d_b * d_b, "m2");

  // W'' = Σ β τ''^T ⊗ ω''^T with the clean payoffs and the noise-distorted
  // input family (unprefixed factors: d · effective factor per side).
  CMat w_noisy = CMat::Zero(d_a * d_b, d_a * d_b);
  for (int s = 0; s < ens_a.size(); ++s) {
    const DensityMatrix tau = noisy_input(ens_a.states[static_cast<std::size_t>(s)],
                                          noise.mu1, noise.n1);
    const CMat fa = static_cast<double>(d_a) * effective_input_factor(tau, noise.nu, op1, true);
    for (int t = 0; t < ens_b.size(); ++t) {
      if (clean.beta(s, t) == 0.0) continue;
      const DensityMatrix omega = noisy_input(ens_b.states[static_cast<std::size_t>(t)],
                                              noise.mu2, noise.n2);
      const CMat fb = static_cast<double>(d_b) * effective_input_factor(omega, noise.nu, op2, false);
      w_noisy += clean.beta(s, t) * kron(fa, fb);
    }
  }
  return ((w_noisy - w.data) * rho.data).trace().real();
}

}  // namespace mdiw
