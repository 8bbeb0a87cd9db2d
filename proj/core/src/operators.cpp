#include "mdiw/operators.hpp"

#include <cmath>
#include <string>

namespace mdiw {

namespace {

void check_square_against_dims(const std::vector<int>& dims, const CMat& data) {
  const int order = dims_order(dims);
  if (data.rows() != order || data.cols() != order)
    throw ValidationError("matrix order " + std::to_string(data.rows()) +
                          " does not match dims product " + std::to_string(order));
}

}  // namespace

DensityMatrix DensityMatrix::make(std::vector<int> dims, CMat data) {
  check_square_against_dims(dims, data);
  const NumericPolicy& pol = numeric_policy();
  const double defect = hermiticity_defect(data);
  if (defect > pol.hermiticity_tol)
    throw ValidationError("density matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  const double tr_err = std::abs(data.trace() - Complex(1, 0));
  if (tr_err > pol.trace_tol)
    throw ValidationError("density matrix trace differs from 1 by " + std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<CMat> es(data, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -pol.psd_tol)
    throw ValidationError("density matrix has negative eigenvalue " + std::to_string(min_eig));
  return DensityMatrix{std::move(dims), std::move(data)};
}

DensityMatrix DensityMatrix::unchecked(std::vector<int> dims, CMat data) {
  return DensityMatrix{std::move(dims), std::move(data)};
}

HermitianOperator HermitianOperator::make(std::vector<int> dims, CMat data) {
  check_square_against_dims(dims, data);
  const double defect = hermiticity_defect(data);
  if (defect > numeric_policy().hermiticity_tol)
    throw ValidationError("operator is not Hermitian (defect " + std::to_string(defect) + ")");
  return HermitianOperator{std::move(dims), std::move(data)};
}

HermitianOperator HermitianOperator::unchecked(std::vector<int> dims, CMat data) {
  return HermitianOperator{std::move(dims), std::move(data)};
}

BasisSet gell_mann_basis(int d) {
  if (d < 2) throw ValidationError("gell_mann_basis requires d >= 2");
  BasisSet basis;
  basis.local_dim = d;
  basis.elements.reserve(static_cast<std::size_t>(d) * d);
  basis.elements.push_back(CMat::Identity(d, d));

  // Standard generalized Gell-Mann matrices carry Tr(B²) = 2; rescale by
  // sqrt(d/2) so every element satisfies Tr(B²) = d like the identity.
  const double scale = std::sqrt(d / 2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMat sym = CMat::Zero(d, d);
      sym(j, k) = sym(k, j) = Complex(1, 0);
      basis.elements.push_back(scale * sym);
      CMat asym = CMat::Zero(d, d);
      asym(j, k) = Complex(0, -1);
      asym(k, j) = Complex(0, 1);
      basis.elements.push_back(scale * asym);
    }
  }
  for (int l = 1; l < d; ++l) {
    CMat diag = CMat::Zero(d, d);
    const double norm = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) diag(j, j) = Complex(norm, 0);
    diag(l, l) = Complex(-l * norm, 0);
    basis.elements.push_back(scale * diag);
  }
  return basis;
}

RVec expand_in_basis(const CMat& h, const BasisSet& basis) {
  const int d = basis.local_dim;
  if (h.rows() != d || h.cols() != d)
    throw ValidationError("expand_in_basis dimension mismatch");
  RVec c(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const Complex t = (h * basis.elements[i]).trace();
    c[i] = t.real() / d;
  }
  return c;
}

CMat reconstruct_from_coeffs(const RVec& c, const BasisSet& basis) {
  if (c.size() != basis.size())
    throw ValidationError("coefficient vector length does not match basis size");
  const int d = basis.local_dim;
  CMat out = CMat::Zero(d, d);
  for (int i = 0; i < basis.size(); ++i) out += Complex(c[i], 0) * basis.elements[i];
  return out;
}

RMat expand_bipartite(const CMat& h, const BasisSet& basis_a, const BasisSet& basis_b) {
  const int da = basis_a.local_dim;
  const int db = basis_b.local_dim;
  if (h.rows() != da * db || h.cols() != da * db)
    throw ValidationError("expand_bipartite dimension mismatch");

  // Stage one: contract the B side. S_j(a, a') = Σ_{b b'} H[(a b), (a' b')] B_j(b', b).
  // Stage two: contract the A side against each S_j.
  const int nb = basis_b.size();
  const int na = basis_a.size();
  RMat c(na, nb);
  std::vector<CMat> stage(nb, CMat::Zero(da, da));
  for (int j = 0; j < nb; ++j) {
    const CMat& bj = basis_b.elements[j];
    CMat& s = stage[j];
    for (int a = 0; a < da; ++a)
      for (int ap = 0; ap < da; ++ap) {
        Complex acc(0, 0);
        for (int b = 0; b < db; ++b)
          for (int bp = 0; bp < db; ++bp) acc += h(a * db + b, ap * db + bp) * bj(bp, b);
        s(a, ap) = acc;
      }
  }
  for (int i = 0; i < na; ++i) {
    const CMat& ai = basis_a.elements[i];
    for (int j = 0; j < nb; ++j) {
      Complex acc(0, 0);
      for (int a = 0; a < da; ++a)
        for (int ap = 0; ap < da; ++ap) acc += stage[j](a, ap) * ai(ap, a);
      c(i, j) = acc.real() / (da * db);
    }
  }
  return c;
}

RVec hermitian_eigenvalues(const CMat& h) {
  const double defect = hermiticity_defect(h);
  if (defect > numeric_policy().hermiticity_tol)
    throw ValidationError("eigenvalue request for non-Hermitian matrix (defect " +
                          std::to_string(defect) + ")");
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

RVec hermitian_eigenvalues(const HermitianOperator& h) { return hermitian_eigenvalues(h.data); }
RVec hermitian_eigenvalues(const DensityMatrix& rho) { return hermitian_eigenvalues(rho.data); }

DensityMatrix partial_transpose(const DensityMatrix& rho, int subsystem) {
  // Output stays a "state-shaped" value (Hermitian, unit trace) but is in
  // general indefinite, so no positivity revalidation here.
  return DensityMatrix::unchecked(rho.dims, partial_transpose(rho.data, rho.dims, subsystem));
}

HermitianOperator partial_transpose(const HermitianOperator& h, int subsystem) {
  return HermitianOperator::unchecked(h.dims, partial_transpose(h.data, h.dims, subsystem));
}

}  // namespace mdiw
