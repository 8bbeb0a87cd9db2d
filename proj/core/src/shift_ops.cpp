#include "mdiw/shift_ops.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace mdiw {

void PermutationOperator::validate() const {
  if (slot_dims.empty()) throw ValidationError("permutation has no slots");
  if (source_of.size() != slot_dims.size())
    throw ValidationError("permutation slot map has wrong length");
  std::vector<bool> seen(slot_dims.size(), false);
  for (std::size_t s = 0; s < source_of.size(); ++s) {
    const int src = source_of[s];
    if (src < 0 || src >= static_cast<int>(slot_dims.size()) || seen[static_cast<std::size_t>(src)])
      throw ValidationError("slot map is not a permutation");
    seen[static_cast<std::size_t>(src)] = true;
    if (slot_dims[static_cast<std::size_t>(src)] != slot_dims[s])
      throw ValidationError("permutation maps between slots of different dimension");
  }
}

int PermutationOperator::order() const { return dims_order(slot_dims); }

bool PermutationOperator::is_identity() const {
  for (std::size_t s = 0; s < source_of.size(); ++s)
    if (source_of[s] != static_cast<int>(s)) return false;
  return true;
}

bool PermutationOperator::is_hermitian() const {
  // Real permutation matrix: Hermitian iff it is an involution.
  for (std::size_t s = 0; s < source_of.size(); ++s)
    if (source_of[static_cast<std::size_t>(source_of[s])] != static_cast<int>(s)) return false;
  return true;
}

PermutationOperator PermutationOperator::transposed() const {
  PermutationOperator inv;
  inv.slot_dims = slot_dims;
  inv.source_of.resize(source_of.size());
  for (std::size_t s = 0; s < source_of.size(); ++s)
    inv.source_of[static_cast<std::size_t>(source_of[s])] = static_cast<int>(s);
  return inv;
}

namespace {

std::vector<Eigen::Index> slot_strides(const std::vector<int>& dims) {
  std::vector<Eigen::Index> strides(dims.size());
  Eigen::Index run = 1;
  for (std::size_t s = dims.size(); s-- > 0;) {
    strides[s] = run;
    run *= dims[s];
  }
  return strides;
}

}  // namespace

Eigen::Index PermutationOperator::map_index(Eigen::Index z) const {
  const auto strides = slot_strides(slot_dims);
  Eigen::Index out = 0;
  for (std::size_t s = 0; s < slot_dims.size(); ++s) {
    const std::size_t src = static_cast<std::size_t>(source_of[s]);
    const Eigen::Index digit = (z / strides[src]) % slot_dims[src];
    out += digit * strides[s];
  }
  return out;
}

CVec PermutationOperator::apply(const CVec& v) const {
  const Eigen::Index n = order();
  if (v.size() != n) throw ValidationError("permutation apply dimension mismatch");
  const auto strides = slot_strides(slot_dims);
  const PermutationOperator inv = transposed();
  CVec out(n);
  // (P v)[y] = v[z] with z_t = y_{σ^{-1}(t)}.
  for (Eigen::Index y = 0; y < n; ++y) out[y] = v[inv.map_index(y)];
  return out;
}

CMat PermutationOperator::dense() const {
  const Eigen::Index n = order();
  if (n > kDenseGuardMaxOrder)
    throw SizeGuardError("dense permutation of order " + std::to_string(n) +
                         " exceeds the guard (" + std::to_string(kDenseGuardMaxOrder) + ")");
  CMat m = CMat::Zero(n, n);
  for (Eigen::Index z = 0; z < n; ++z) m(map_index(z), z) = Complex(1, 0);
  return m;
}

CMat PermutationOperator::conjugate_matrix(const CMat& m) const {
  const Eigen::Index n = order();
  if (m.rows() != n || m.cols() != n)
    throw ValidationError("conjugate_matrix dimension mismatch");
  std::vector<Eigen::Index> image(static_cast<std::size_t>(n));
  for (Eigen::Index z = 0; z < n; ++z) image[static_cast<std::size_t>(z)] = map_index(z);
  CMat out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(image[static_cast<std::size_t>(i)], image[static_cast<std::size_t>(j)]) = m(i, j);
  return out;
}

PermutationOperator cyclic_copy_shift(int k, const std::vector<int>& copy_dims) {
  if (k < 2) throw ValidationError("copy shift requires k >= 2");
  const int m = static_cast<int>(copy_dims.size());
  PermutationOperator p;
  p.slot_dims.reserve(static_cast<std::size_t>(k) * m);
  p.source_of.reserve(static_cast<std::size_t>(k) * m);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < m; ++r) {
      p.slot_dims.push_back(copy_dims[static_cast<std::size_t>(r)]);
      p.source_of.push_back(((c + k - 1) % k) * m + r);
    }
  p.validate();
  return p;
}

PermutationOperator bipartite_shift(int k, int d_a, int d_b) {
  return cyclic_copy_shift(k, {d_a, d_b});
}

PermutationOperator tilde_shift(int k, int d) { return cyclic_copy_shift(k, {d}); }

PermutationOperator pt_shift(int k, int d_a, int d_b) {
  if (k < 2) throw ValidationError("pt_shift requires k >= 2");
  PermutationOperator p;
  for (int c = 0; c < k; ++c) {
    p.slot_dims.push_back(d_a);
    p.source_of.push_back(((c + k - 1) % k) * 2);
    p.slot_dims.push_back(d_b);
    p.source_of.push_back(((c + 1) % k) * 2 + 1);
  }
  p.validate();
  return p;
}

HermitianOperator symmetrize(const PermutationOperator& v) {
  const CMat d = v.dense();
  return HermitianOperator::unchecked(v.slot_dims, 0.5 * (d + d.adjoint()));
}

Complex trace_against_product(const PermutationOperator& p, const std::vector<CMat>& factors) {
  p.validate();
  const Eigen::Index n = p.order();
  const int slots = p.slot_count();
  const auto strides = slot_strides(p.slot_dims);

  // Group boundaries: factor f covers consecutive slots whose dims multiply
  // to its order.
  struct Group {
    int first_slot;
    int slot_count;
    Eigen::Index order;
  };
  std::vector<Group> groups;
  int slot = 0;
  for (const CMat& f : factors) {
    if (f.rows() != f.cols()) throw ValidationError("trace_against_product factors must be square");
    Eigen::Index run = 1;
    const int first = slot;
    while (run < f.rows()) {
      if (slot >= slots) throw ValidationError("factors overrun permutation slots");
      run *= p.slot_dims[static_cast<std::size_t>(slot)];
      ++slot;
    }
    if (run != f.rows()) throw ValidationError("factor order does not align with slot dims");
    groups.push_back({first, slot - first, run});
  }
  if (slot != slots) throw ValidationError("factors do not cover all permutation slots");

  std::vector<int> digits(static_cast<std::size_t>(slots));
  std::vector<int> image_digits(static_cast<std::size_t>(slots));
  std::complex<long double> acc(0, 0);
  // Tr(P M) = Σ_z M[z, π(z)] with π(z)_s = z_{σ(s)}.
  for (Eigen::Index z = 0; z < n; ++z) {
    for (int s = 0; s < slots; ++s)
      digits[static_cast<std::size_t>(s)] =
          static_cast<int>((z / strides[static_cast<std::size_t>(s)]) %
                           p.slot_dims[static_cast<std::size_t>(s)]);
    for (int s = 0; s < slots; ++s)
      image_digits[static_cast<std::size_t>(s)] =
          digits[static_cast<std::size_t>(p.source_of[static_cast<std::size_t>(s)])];

    Complex term(1, 0);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      Eigen::Index row = 0, col = 0;
      for (int s = groups[g].first_slot; s < groups[g].first_slot + groups[g].slot_count; ++s) {
        const int dim = p.slot_dims[static_cast<std::size_t>(s)];
        row = row * dim + digits[static_cast<std::size_t>(s)];
        col = col * dim + image_digits[static_cast<std::size_t>(s)];
      }
      term *= factors[g](row, col);
      if (term == Complex(0, 0)) break;
    }
    acc += term;
  }
  return Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
}

double trace_power(const DensityMatrix& rho, int k) {
  if (k < 1) throw ValidationError("trace_power requires k >= 1");
  if (k == 1) return rho.data.trace().real();

  CMat power = rho.data;
  for (int i = 1; i < k; ++i) power = power * rho.data;
  const double via_power = power.trace().real();

  const PermutationOperator shift = cyclic_copy_shift(k, rho.dims);
  const std::vector<CMat> copies(static_cast<std::size_t>(k), rho.data);
  const Complex via_shift = trace_against_product(shift, copies);

  if (std::abs(via_shift - Complex(via_power, 0)) > numeric_policy().agreement_tol)
    throw ValidationError("shift-contraction and matrix-power traces disagree");
  return via_power;
}

}  // namespace mdiw
