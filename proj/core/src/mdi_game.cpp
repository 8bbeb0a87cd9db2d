#include "mdiw/mdi_game.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <string>

#include "mdiw/npt_witness.hpp"
#include "mdiw/parallel.hpp"

namespace mdiw {

void ProbabilityTable::validate() const {
  if (p.rows() != static_cast<Eigen::Index>(row_labels.size()) ||
      p.cols() != static_cast<Eigen::Index>(col_labels.size()))
    throw ValidationError("probability table shape does not match labels");
  const double slack = 1e-12;
  for (Eigen::Index s = 0; s < p.rows(); ++s)
    for (Eigen::Index t = 0; t < p.cols(); ++t)
      if (p(s, t) < -slack || p(s, t) > 1.0 + slack)
        throw ValidationError("probability entry outside [0, 1]: " + std::to_string(p(s, t)));
}

HermitianOperator bell_projector(int d) {
  if (d < 2) throw ValidationError("bell_projector requires D >= 2");
  return HermitianOperator::unchecked({d, d}, bell_state(d).data);
}

namespace {

const BasisSet& cached_basis(int d) {
  static std::map<int, BasisSet> cache;
  static std::mutex mutex;
  std::scoped_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace(d);
  if (inserted) it->second = gell_mann_basis(d);
  return it->second;
}

// Rows are the operator-basis coefficients of the transposed ensemble
// states: G(s, i) = Tr(τ_s^T B_i) / d, so τ_s^T = Σ_i G(s, i) B_i.
RMat coefficient_frame(const InputEnsemble& ens) {
  const int d = ens.local_dim();
  const BasisSet& basis = cached_basis(d);
  RMat g(ens.size(), basis.size());
  for (int s = 0; s < ens.size(); ++s)
    g.row(s) = expand_in_basis(ens.states[static_cast<std::size_t>(s)].data.transpose(), basis)
                   .transpose();
  return g;
}

void require_complete(const RMat& frame, const std::string& side) {
  Eigen::JacobiSVD<RMat> svd(frame);
  const RVec& sv = svd.singularValues();
  const double threshold = sv.size() ? sv[0] * 1e-10 : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > threshold) ++rank;
  if (rank < frame.cols())
    throw ValidationError(side + " ensemble is not informationally complete (rank " +
                          std::to_string(rank) + " of " + std::to_string(frame.cols()) + ")");
}

}  // namespace

double prob_11(const DensityMatrix& tau, const DensityMatrix& rho, const DensityMatrix& omega,
               ProbMode mode) {
  if (rho.dims.size() != 2)
    throw ValidationError("prob_11 requires a bipartite shared state");
  const int d_a = rho.dims[0];
  const int d_b = rho.dims[1];
  if (tau.order() != d_a || omega.order() != d_b)
    throw ValidationError("input state dimensions do not match the shared state");

  if (mode == ProbMode::Reduced) {
    const CMat pair = kron(tau.data.transpose(), omega.data.transpose());
    return (pair * rho.data).trace().real() / (d_a * d_b);
  }

  // Rank-one measurement vector on (A_O, A, B, B_O):
  // v[(j, j, u, u)] = 1/sqrt(dA dB).
  const Eigen::Index n = static_cast<Eigen::Index>(d_a) * d_a * d_b * d_b;
  CVec v = CVec::Zero(n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d_a) * d_b);
  for (int j = 0; j < d_a; ++j)
    for (int u = 0; u < d_b; ++u) {
      const Eigen::Index idx =
          ((static_cast<Eigen::Index>(j) * d_a + j) * d_b + u) * d_b + u;
      v[idx] = Complex(amp, 0);
    }
  const CVec w = kron_apply({tau.data, rho.data, omega.data}, v);
  return v.dot(w).real();  // Eigen's dot conjugates the left argument
}

ProbabilityTable exact_probability_table(const InputEnsemble& ens_a, const InputEnsemble& ens_b,
                                         const DensityMatrix& rho) {
  ens_a.validate();
  ens_b.validate();
  if (rho.dims.size() != 2 || rho.dims[0] != ens_a.local_dim() ||
      rho.dims[1] != ens_b.local_dim())
    throw ValidationError("shared state dimensions do not match the ensembles");

  const RMat ga = coefficient_frame(ens_a);
  const RMat gb = coefficient_frame(ens_b);
  // P = G_A C G_B^T with C the product-basis coefficients of ρ; the 1/(dA dB)
  // normalization of the reduced probability cancels against the basis norm.
  const RMat c = expand_bipartite(rho.data, cached_basis(rho.dims[0]), cached_basis(rho.dims[1]));
  ProbabilityTable table;
  table.row_labels = ens_a.labels;
  table.col_labels = ens_b.labels;
  table.p = ga * c * gb.transpose();
  table.validate();
  return table;
}

PayoffMatrix solve_betas(const HermitianOperator& w, const InputEnsemble& ens_a,
                         const InputEnsemble& ens_b) {
  ens_a.validate();
  ens_b.validate();
  const int d_a = ens_a.local_dim();
  const int d_b = ens_b.local_dim();
  if (w.order() != d_a * d_b)
    throw ValidationError("witness order does not match the ensembles");

  const RMat ga = coefficient_frame(ens_a);
  const RMat gb = coefficient_frame(ens_b);
  require_complete(ga, "left");
  require_complete(gb, "right");

  const RMat c = expand_bipartite(w.data, cached_basis(d_a), cached_basis(d_b));

  // G_A^T β G_B = C. The pseudoinverse on each side gives the
  // minimum-Frobenius-norm solution of the consistent system.
  Eigen::CompleteOrthogonalDecomposition<RMat> cod_a(ga.transpose());
  Eigen::CompleteOrthogonalDecomposition<RMat> cod_b(gb.transpose());
  const RMat left = cod_a.solve(c);                            // pinv(G_A^T) C
  const RMat beta = cod_b.solve(left.transpose()).transpose(); // right-multiply by pinv(G_B)

  PayoffMatrix payoff;
  payoff.row_labels = ens_a.labels;
  payoff.col_labels = ens_b.labels;
  payoff.beta = beta;
  payoff.note = "minimum-norm payoffs: sum_{s,t} beta τ^T⊗ω^T reconstructs the witness; "
                "game value = Tr(W rho)/(dA*dB)";

  // Post-condition: reconstruction in coefficient space (Parseval-exact
  // proxy for the Frobenius distance).
  const RMat residual = ga.transpose() * beta * gb - c;
  const double frob = residual.norm() * std::sqrt(static_cast<double>(d_a) * d_b);
  if (frob > 1e-8)
    throw ValidationError("payoff solve failed to reconstruct the witness (residual " +
                          std::to_string(frob) + ")");
  return payoff;
}

PayoffMatrix referee_payoffs(const HermitianOperator& w, const InputEnsemble& ens_a,
                             const InputEnsemble& ens_b) {
  PayoffMatrix payoff = solve_betas(w, ens_a, ens_b);
  payoff.beta *= static_cast<double>(ens_a.local_dim()) * ens_b.local_dim();
  payoff.note = "referee payoffs scaled by dA*dB: game value = Tr(W rho)";
  return payoff;
}

double game_value(const PayoffMatrix& beta, const ProbabilityTable& p) {
  if (beta.row_labels != p.row_labels || beta.col_labels != p.col_labels)
    throw ValidationError("payoff and probability tables are indexed differently");
  return beta.beta.cwiseProduct(p.p).sum();
}

InputEnsemble gellmann_frame_ensemble(int d) {
  if (d < 2) throw ValidationError("gellmann_frame_ensemble requires d >= 2");
  const BasisSet& basis = cached_basis(d);
  const double eps = 1.0 / (d - 1);
  InputEnsemble ens;
  ens.labels.reserve(static_cast<std::size_t>(basis.size()));
  ens.states.reserve(static_cast<std::size_t>(basis.size()));
  ens.labels.push_back("f0");
  ens.states.push_back(
      DensityMatrix::unchecked({d}, CMat::Identity(d, d) / static_cast<double>(d)));
  for (int i = 1; i < basis.size(); ++i) {
    CMat m = (CMat::Identity(d, d) + eps * basis.elements[static_cast<std::size_t>(i)]) /
             static_cast<double>(d);
    ens.labels.push_back("f" + std::to_string(i));
    // Positivity is not automatic for every ε; reject loudly instead of
    // shipping an invalid input state.
    ens.states.push_back(DensityMatrix::make({d}, std::move(m)));
  }
  return ens;
}

namespace {

// Slot reordering A1 B1 A2 B2 A3 B3 A4 B4 → A1 A2 A3 A4 B1 B2 B3 B4.
const PermutationOperator& grouping_permutation() {
  static const PermutationOperator g = [] {
    PermutationOperator p;
    p.slot_dims.assign(8, 2);
    p.source_of = {0, 2, 4, 6, 1, 3, 5, 7};
    p.validate();
    return p;
  }();
  return g;
}

}  // namespace

DensityMatrix four_copy_grouped(const DensityMatrix& rho) {
  if (rho.dims != std::vector<int>{2, 2})
    throw ValidationError("four_copy_grouped requires a two-qubit state");
  const CMat rho4 = kron_power(rho.data, 4);
  return DensityMatrix::unchecked({16, 16}, grouping_permutation().conjugate_matrix(rho4));
}

HermitianOperator universal_witness_grouped() {
  static const CMat w = [] {
    const HermitianOperator interleaved = build_witness(4, 2);
    return grouping_permutation().conjugate_matrix(interleaved.data);
  }();
  return HermitianOperator::unchecked({16, 16}, w);
}

double universal_mdi_run(const DensityMatrix& rho, const InputEnsemble& ens_a,
                         const InputEnsemble& ens_b) {
  if (ens_a.local_dim() != 16 || ens_b.local_dim() != 16)
    throw ValidationError("the four-copy game needs dim-16 input ensembles");
  const PayoffMatrix payoffs = referee_payoffs(universal_witness_grouped(), ens_a, ens_b);
  const ProbabilityTable table = exact_probability_table(ens_a, ens_b, four_copy_grouped(rho));
  return game_value(payoffs, table);
}

double universal_mdi_run(const DensityMatrix& rho) {
  // The default frame and its payoff solve are state-independent; cache them.
  static const InputEnsemble frame = gellmann_frame_ensemble(16);
  static const PayoffMatrix payoffs = referee_payoffs(universal_witness_grouped(), frame, frame);
  const ProbabilityTable table = exact_probability_table(frame, frame, four_copy_grouped(rho));
  return game_value(payoffs, table);
}

ShotEstimate sample_shots(const ProbabilityTable& p, const PayoffMatrix& beta,
                          long long shots_per_pair, std::uint64_t seed) {
  if (shots_per_pair < 1) throw ValidationError("sample_shots requires shots >= 1");
  if (beta.row_labels != p.row_labels || beta.col_labels != p.col_labels)
    throw ValidationError("payoff and probability tables are indexed differently");

  const Eigen::Index rows = p.p.rows(), cols = p.p.cols();
  RMat hat(rows, cols);
  std::vector<double> flat(static_cast<std::size_t>(rows * cols));
  parallel_for(static_cast<std::size_t>(rows * cols), [&](std::size_t idx) {
    const Eigen::Index s = static_cast<Eigen::Index>(idx) / cols;
    const Eigen::Index t = static_cast<Eigen::Index>(idx) % cols;
    double prob = std::clamp(p.p(s, t), 0.0, 1.0);
    // splitmix64-style per-pair stream so parallel order is irrelevant
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (idx + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    std::mt19937_64 rng(z ^ (z >> 31));
    long long hits = 0;
    if (prob > 0.0 && prob < 1.0) {
      std::binomial_distribution<long long> bin(shots_per_pair, prob);
      hits = bin(rng);
    } else if (prob >= 1.0) {
      hits = shots_per_pair;
    }
    flat[idx] = static_cast<double>(hits) / static_cast<double>(shots_per_pair);
  });
  for (Eigen::Index s = 0; s < rows; ++s)
    for (Eigen::Index t = 0; t < cols; ++t)
      hat(s, t) = flat[static_cast<std::size_t>(s * cols + t)];

  ShotEstimate est;
  est.shots_per_pair = shots_per_pair;
  est.estimate = beta.beta.cwiseProduct(hat).sum();
  double var = 0.0;
  for (Eigen::Index s = 0; s < rows; ++s)
    for (Eigen::Index t = 0; t < cols; ++t)
      var += beta.beta(s, t) * beta.beta(s, t) * hat(s, t) * (1.0 - hat(s, t)) /
             static_cast<double>(shots_per_pair);
  est.stderr_ = std::sqrt(var);
  return est;
}

HermitianOperator swap_witness() {
  PermutationOperator swap;
  swap.slot_dims = {2, 2};
  swap.source_of = {1, 0};
  return HermitianOperator::unchecked({2, 2}, 0.5 * swap.dense());
}

TwoQubitGame standard_two_qubit_game() {
  TwoQubitGame game{table1_ensemble(), table1_ensemble(), swap_witness(), {}};
  game.payoffs = referee_payoffs(game.witness, game.ens_a, game.ens_b);
  return game;
}

}  // namespace mdiw
