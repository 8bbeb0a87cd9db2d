#include "mdiw/npt_witness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace mdiw {

namespace {

// Permutation that shifts a chosen window of copies forward, identity
// elsewhere. Slots are the interleaved A/B layout of k copies.
PermutationOperator window_copy_shift(int k, int d_a, int d_b, int first, int count) {
  PermutationOperator p;
  for (int c = 0; c < k; ++c) {
    p.slot_dims.push_back(d_a);
    p.slot_dims.push_back(d_b);
  }
  p.source_of.resize(static_cast<std::size_t>(2 * k));
  for (int c = 0; c < k; ++c) {
    int src = c;
    if (c >= first && c < first + count) src = first + (c - first + count - 1) % count;
    p.source_of[static_cast<std::size_t>(2 * c)] = 2 * src;
    p.source_of[static_cast<std::size_t>(2 * c + 1)] = 2 * src + 1;
  }
  p.validate();
  return p;
}

// A-copies of a window cycled forward, B-copies backward; identity outside.
PermutationOperator window_pt_shift(int k, int d_a, int d_b, int first, int count) {
  PermutationOperator p;
  for (int c = 0; c < k; ++c) {
    p.slot_dims.push_back(d_a);
    p.slot_dims.push_back(d_b);
  }
  p.source_of.resize(static_cast<std::size_t>(2 * k));
  for (int c = 0; c < k; ++c) {
    int src_a = c, src_b = c;
    if (c >= first && c < first + count) {
      src_a = first + (c - first + count - 1) % count;
      src_b = first + (c - first + 1) % count;
    }
    p.source_of[static_cast<std::size_t>(2 * c)] = 2 * src_a;
    p.source_of[static_cast<std::size_t>(2 * c + 1)] = 2 * src_b + 1;
  }
  p.validate();
  return p;
}

// Swap of two copy windows of length 1 each (the two-copy swap embedded at
// positions c0, c1).
PermutationOperator pair_swap(int k, int d_a, int d_b, int c0, int c1) {
  PermutationOperator p;
  for (int c = 0; c < k; ++c) {
    p.slot_dims.push_back(d_a);
    p.slot_dims.push_back(d_b);
  }
  p.source_of.resize(static_cast<std::size_t>(2 * k));
  for (int c = 0; c < k; ++c) {
    int src = c;
    if (c == c0) src = c1;
    if (c == c1) src = c0;
    p.source_of[static_cast<std::size_t>(2 * c)] = 2 * src;
    p.source_of[static_cast<std::size_t>(2 * c + 1)] = 2 * src + 1;
  }
  p.validate();
  return p;
}

long long ipow(long long base, int exp) {
  long long out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

void check_witness_guard(int k, int d) {
  if (k < 2 || k > 4) throw ValidationError("witness operators are built for k in {2, 3, 4}");
  if (d < 2) throw ValidationError("build_witness requires d >= 2");
  const long long order = ipow(static_cast<long long>(d) * d, k);
  if (order > kDenseGuardMaxOrder)
    throw SizeGuardError("dense witness of order " + std::to_string(order) +
                         " exceeds the guard; use the eigen or power-sum routes");
}

CMat build_witness_matrix(int k, int d) {
  check_witness_guard(k, d);
  const int n = static_cast<int>(ipow(static_cast<long long>(d) * d, k));
  CMat w = CMat::Zero(n, n);
  auto add = [&](double coeff, const PermutationOperator& p) { w += coeff * p.dense(); };

  switch (k) {
    case 2: {
      w = 0.5 * CMat::Identity(n, n);
      add(-0.5, window_copy_shift(2, d, d, 0, 2));
      break;
    }
    case 3: {
      w = (1.0 / 6.0) * CMat::Identity(n, n);
      add(-0.5, pair_swap(3, d, d, 1, 2));
      const PermutationOperator s3 = window_pt_shift(3, d, d, 0, 3);
      add(1.0 / 6.0, s3);
      add(1.0 / 6.0, s3.transposed());
      break;
    }
    case 4: {
      w = (1.0 / 24.0) * CMat::Identity(n, n);
      const PermutationOperator s4 = window_pt_shift(4, d, d, 0, 4);
      add(-1.0 / 8.0, s4);
      add(-1.0 / 8.0, s4.transposed());
      const PermutationOperator s3 = window_pt_shift(4, d, d, 1, 3);
      add(1.0 / 6.0, s3);
      add(1.0 / 6.0, s3.transposed());
      // Swap copies (1,2) and (3,4) simultaneously, then minus the tail swap.
      PermutationOperator double_swap = pair_swap(4, d, d, 0, 1);
      PermutationOperator tail = pair_swap(4, d, d, 2, 3);
      for (int s = 4; s < 8; ++s) double_swap.source_of[static_cast<std::size_t>(s)] =
          tail.source_of[static_cast<std::size_t>(s)];
      double_swap.validate();
      add(1.0 / 8.0, double_swap);
      add(-1.0 / 4.0, tail);
      break;
    }
    default:
      break;
  }
  return w;
}

}  // namespace

HermitianOperator build_witness(int k, int d) {
  std::vector<int> dims;
  for (int c = 0; c < k; ++c) {
    dims.push_back(d);
    dims.push_back(d);
  }
  return HermitianOperator::unchecked(std::move(dims), build_witness_matrix(k, d));
}

namespace {

const CMat& cached_witness(int k, int d) {
  static std::map<std::pair<int, int>, CMat> cache;
  static std::mutex mutex;
  std::scoped_lock lock(mutex);
  auto [it, inserted] = cache.try_emplace({k, d});
  if (inserted) it->second = build_witness_matrix(k, d);
  return it->second;
}

// Elementary symmetric polynomials e_0..e_upto of the given values, by the
// stable incremental product expansion.
RVec elementary_symmetric(const RVec& values, int upto) {
  RVec e = RVec::Zero(upto + 1);
  e[0] = 1.0;
  int filled = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    filled = std::min(filled + 1, upto);
    for (int k = filled; k >= 1; --k) e[k] += values[i] * e[k - 1];
  }
  return e;
}

// Newton ladder from power sums p_1..p_upto: k a_k = Σ_{i=1..k} (-1)^{i-1} a_{k-i} p_i.
RVec newton_ladder(const RVec& power_sums, int upto) {
  RVec a = RVec::Zero(upto + 1);
  a[0] = 1.0;
  for (int k = 1; k <= upto; ++k) {
    double acc = 0.0;
    double sign = 1.0;
    for (int i = 1; i <= k; ++i) {
      acc += sign * a[k - i] * power_sums[i - 1];
      sign = -sign;
    }
    a[k] = acc / k;
  }
  return a;
}

void require_two_qudit(const DensityMatrix& rho) {
  if (rho.dims.size() != 2)
    throw ValidationError("coefficient ladder requires a bipartite state");
}

}  // namespace

CoefficientReport coefficients(const DensityMatrix& rho, CoeffMethod method, int upto) {
  return coefficients(rho, method, upto, numeric_policy().decision_tol);
}

CoefficientReport coefficients(const DensityMatrix& rho, CoeffMethod method, int upto, double tol) {
  require_two_qudit(rho);
  const int n = rho.order();
  if (upto < 1 || upto > n)
    throw ValidationError("coefficient index must lie in [1, dA*dB]");

  CoefficientReport report;
  report.local_dim = rho.dims[0];
  report.tol = tol;
  report.a = RVec::Zero(upto + 1);
  report.method.assign(static_cast<std::size_t>(upto) + 1, method);

  const CMat pt = partial_transpose(rho.data, rho.dims, 1);
  switch (method) {
    case CoeffMethod::Eigen: {
      report.a = elementary_symmetric(hermitian_eigenvalues(pt), upto);
      break;
    }
    case CoeffMethod::PowerSum: {
      RVec p(upto);
      CMat power = CMat::Identity(n, n);
      for (int i = 1; i <= upto; ++i) {
        power = power * pt;
        p[i - 1] = power.trace().real();
      }
      report.a = newton_ladder(p, upto);
      break;
    }
    case CoeffMethod::WitnessTrace: {
      if (upto > 4)
        throw ValidationError("witness-trace route provides coefficients up to a_4 only");
      if (rho.dims[0] != rho.dims[1])
        throw ValidationError("witness-trace route requires equal local dimensions");
      const int d = rho.dims[0];
      check_witness_guard(std::max(upto, 2), d);
      report.a[0] = 1.0;
      if (upto >= 1) report.a[1] = rho.data.trace().real();  // one copy, identity observable
      CMat copies = rho.data;
      for (int k = 2; k <= upto; ++k) {
        copies = kron(copies, rho.data);
        const CMat& w = cached_witness(k, d);
        report.a[k] = (w * copies).trace().real();
      }
      break;
    }
  }

  report.boundary.assign(static_cast<std::size_t>(upto) + 1, false);
  report.verdict = Verdict::PPT;
  for (int k = 0; k <= upto; ++k) {
    if (std::abs(report.a[k]) < tol) report.boundary[static_cast<std::size_t>(k)] = true;
    if (report.a[k] < -tol && report.first_negative < 0) report.first_negative = k;
  }
  if (report.first_negative >= 0)
    report.verdict = Verdict::NPT;
  else if (std::find(report.boundary.begin(), report.boundary.end(), true) !=
           report.boundary.end())
    report.verdict = Verdict::Boundary;
  return report;
}

NptResult npt_verdict(const DensityMatrix& rho) {
  return npt_verdict(rho, numeric_policy().decision_tol);
}

NptResult npt_verdict(const DensityMatrix& rho, double tol) {
  require_two_qudit(rho);
  NptResult result;
  result.report = coefficients(rho, CoeffMethod::Eigen, rho.order(), tol);
  result.verdict = result.report.verdict;
  result.first_negative = result.report.first_negative;
  return result;
}

double universal_det(const DensityMatrix& rho) {
  if (rho.dims != std::vector<int>{2, 2})
    throw ValidationError("universal_det requires a two-qubit state");
  const CMat rho4 = kron_power(rho.data, 4);
  return (cached_witness(4, 2) * rho4).trace().real();
}

int tomography_cost(int d) {
  if (d < 2) throw ValidationError("tomography_cost requires d >= 2");
  return d * d * d * d - 1;
}

int witness_cost(int k) {
  switch (k) {
    case 2:
      return 1;
    case 3:
      return 2;
    case 4:
      return 4;
    default:
      throw ValidationError("witness_cost supports k in {2, 3, 4}");
  }
}

}  // namespace mdiw
