#include "mdiw/states.hpp"

#include <array>
#include <cmath>
#include <random>

namespace mdiw {

int InputEnsemble::local_dim() const {
  if (states.empty()) throw ValidationError("ensemble is empty");
  return states.front().order();
}

void InputEnsemble::validate() const {
  if (states.empty()) throw ValidationError("ensemble is empty");
  if (labels.size() != states.size())
    throw ValidationError("ensemble label count does not match state count");
  const int d = states.front().order();
  for (const DensityMatrix& s : states)
    if (s.order() != d) throw ValidationError("ensemble states have mixed dimensions");
  if (bloch) {
    if (d != 2) throw ValidationError("Bloch vectors only apply to qubit ensembles");
    if (bloch->size() != states.size())
      throw ValidationError("Bloch vector count does not match state count");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const CMat expected = qubit_from_bloch((*bloch)[i]).data;
      if ((states[i].data - expected).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("ensemble state '" + labels[i] + "' does not match its Bloch vector");
    }
  }
}

const CMat& pauli(int i) {
  static const std::array<CMat, 4> sigma = [] {
    std::array<CMat, 4> s;
    s[0] = CMat::Identity(2, 2);
    s[1] = CMat::Zero(2, 2);
    s[1](0, 1) = s[1](1, 0) = Complex(1, 0);
    s[2] = CMat::Zero(2, 2);
    s[2](0, 1) = Complex(0, -1);
    s[2](1, 0) = Complex(0, 1);
    s[3] = CMat::Zero(2, 2);
    s[3](0, 0) = Complex(1, 0);
    s[3](1, 1) = Complex(-1, 0);
    return s;
  }();
  if (i < 0 || i > 3) throw ValidationError("pauli index out of range");
  return sigma[static_cast<std::size_t>(i)];
}

DensityMatrix bell_state(int d) {
  if (d < 2) throw ValidationError("bell_state requires d >= 2");
  CVec v = CVec::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) v[static_cast<Eigen::Index>(j) * d + j] = Complex(amp, 0);
  return DensityMatrix::unchecked({d, d}, v * v.adjoint());
}

DensityMatrix psi_minus() {
  CVec v = CVec::Zero(4);
  v[1] = Complex(1.0 / std::sqrt(2.0), 0);
  v[2] = Complex(-1.0 / std::sqrt(2.0), 0);
  return DensityMatrix::unchecked({2, 2}, v * v.adjoint());
}

DensityMatrix werner_state(double p) {
  if (p < 0.0 || p > 1.0) throw ValidationError("werner_state requires p in [0, 1]");
  CMat m = p * psi_minus().data + (1.0 - p) / 4.0 * CMat::Identity(4, 4);
  return DensityMatrix::unchecked({2, 2}, std::move(m));
}

DensityMatrix timeshift_state(double r) {
  if (r < 0.0 || r > 1.0) throw ValidationError("timeshift_state requires r in [0, 1]");
  CMat m = (1.0 - r) * psi_minus().data;
  m(0, 0) += r / 2.0;
  m(3, 3) += r / 2.0;
  return DensityMatrix::unchecked({2, 2}, std::move(m));
}

DensityMatrix qubit_from_bloch(const Eigen::Vector3d& r) {
  if (r.norm() > 1.0 + 1e-12) throw ValidationError("Bloch vector lies outside the unit ball");
  CMat m = 0.5 * pauli(0);
  for (int i = 0; i < 3; ++i) m += 0.5 * r[i] * pauli(i + 1);
  return DensityMatrix::unchecked({2}, std::move(m));
}

InputEnsemble table1_ensemble() {
  InputEnsemble ens;
  ens.labels = {"H", "V", "D", "Dbar", "L", "R"};
  std::vector<Eigen::Vector3d> vecs = {
      {0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  for (const auto& r : vecs) ens.states.push_back(qubit_from_bloch(r));
  ens.bloch = std::move(vecs);
  ens.validate();
  return ens;
}

namespace {

CMat ginibre(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

DensityMatrix ginibre_state(const std::vector<int>& dims, std::mt19937_64& rng) {
  const int d = dims_order(dims);
  const CMat g = ginibre(d, rng);
  CMat rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix::unchecked(dims, std::move(rho));
}

}  // namespace

DensityMatrix random_density(int d, std::uint64_t seed) {
  if (d < 2) throw ValidationError("random_density requires d >= 2");
  std::mt19937_64 rng(seed);
  return ginibre_state({d}, rng);
}

DensityMatrix random_density(const std::vector<int>& dims, std::uint64_t seed) {
  if (dims_order(dims) < 2) throw ValidationError("random_density requires order >= 2");
  std::mt19937_64 rng(seed);
  return ginibre_state(dims, rng);
}

DensityMatrix random_separable(int d_a, int d_b, int terms, std::uint64_t seed) {
  if (d_a < 2 || d_b < 2) throw ValidationError("random_separable requires local dims >= 2");
  if (terms < 1) throw ValidationError("random_separable requires terms >= 1");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);

  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0.0;
  for (double& x : w) {
    x = expo(rng);
    total += x;
  }
  CMat rho = CMat::Zero(d_a * d_b, d_a * d_b);
  for (int t = 0; t < terms; ++t) {
    const DensityMatrix a = ginibre_state({d_a}, rng);
    const DensityMatrix b = ginibre_state({d_b}, rng);
    rho += (w[static_cast<std::size_t>(t)] / total) * kron(a.data, b.data);
  }
  return DensityMatrix::unchecked({d_a, d_b}, std::move(rho));
}

BlochForm bloch_decompose(const DensityMatrix& rho) {
  if (rho.dims != std::vector<int>{2, 2})
    throw ValidationError("bloch_decompose requires a 2 x 2 subsystem split");
  BlochForm f;
  for (int i = 0; i < 3; ++i) {
    f.a[i] = (rho.data * kron(pauli(0), pauli(i + 1))).trace().real();
    f.b[i] = (rho.data * kron(pauli(i + 1), pauli(0))).trace().real();
    for (int j = 0; j < 3; ++j)
      f.c(i, j) = (rho.data * kron(pauli(i + 1), pauli(j + 1))).trace().real();
  }
  return f;
}

HermitianOperator bloch_compose(const BlochForm& form) {
  CMat m = kron(pauli(0), pauli(0));
  for (int i = 0; i < 3; ++i) {
    m += form.a[i] * kron(pauli(0), pauli(i + 1));
    m += form.b[i] * kron(pauli(i + 1), pauli(0));
    for (int j = 0; j < 3; ++j) m += form.c(i, j) * kron(pauli(i + 1), pauli(j + 1));
  }
  return HermitianOperator::unchecked({2, 2}, 0.25 * m);
}

}  // namespace mdiw
