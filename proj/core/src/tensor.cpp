#include "mdiw/tensor.hpp"

#include <numeric>

namespace mdiw {

int dims_order(const std::vector<int>& dims) {
  if (dims.empty()) throw ValidationError("dims vector is empty");
  int order = 1;
  for (int d : dims) {
    if (d < 1) throw ValidationError("subsystem dimension must be positive");
    order *= d;
  }
  return order;
}

CMat kron(const CMat& a, const CMat& b) {
  const auto ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  CMat out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

CMat kron_power(const CMat& a, int k) {
  if (k < 1) throw ValidationError("kron_power requires k >= 1");
  CMat out = a;
  for (int i = 1; i < k; ++i) out = kron(out, a);
  return out;
}

CVec kron_apply(const std::vector<CMat>& factors, const CVec& v) {
  if (factors.empty()) throw ValidationError("kron_apply requires at least one factor");
  Eigen::Index total = 1;
  for (const CMat& f : factors) {
    if (f.rows() != f.cols()) throw ValidationError("kron_apply factors must be square");
    total *= f.rows();
  }
  if (total != v.size()) throw ValidationError("kron_apply dimension mismatch");

  CVec cur = v;
  CVec next(total);
  // Contract factor i over the middle index of the (left, n_i, right) shape.
  Eigen::Index left = 1;
  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    const CMat& f = factors[fi];
    const Eigen::Index n = f.rows();
    const Eigen::Index right = total / (left * n);
    for (Eigen::Index l = 0; l < left; ++l) {
      for (Eigen::Index a = 0; a < n; ++a) {
        const Eigen::Index out_base = (l * n + a) * right;
        for (Eigen::Index r = 0; r < right; ++r) next[out_base + r] = Complex(0, 0);
        for (Eigen::Index b = 0; b < n; ++b) {
          const Complex w = f(a, b);
          if (w == Complex(0, 0)) continue;
          const Eigen::Index in_base = (l * n + b) * right;
          for (Eigen::Index r = 0; r < right; ++r) next[out_base + r] += w * cur[in_base + r];
        }
      }
    }
    cur.swap(next);
    left *= n;
  }
  return cur;
}

namespace {

struct SubsystemIndex {
  Eigen::Index stride;
  int dim;
};

SubsystemIndex subsystem_index(const std::vector<int>& dims, int subsystem, Eigen::Index order) {
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size()))
    throw ValidationError("invalid subsystem index");
  Eigen::Index stride = order;
  for (int s = 0; s <= subsystem; ++s) stride /= dims[s];
  return {stride, dims[subsystem]};
}

}  // namespace

CMat partial_transpose(const CMat& m, const std::vector<int>& dims, int subsystem) {
  const Eigen::Index order = dims_order(dims);
  if (m.rows() != order || m.cols() != order)
    throw ValidationError("matrix order does not match dims");
  const auto [stride, dim] = subsystem_index(dims, subsystem, order);

  CMat out(order, order);
  for (Eigen::Index i = 0; i < order; ++i) {
    const Eigen::Index di = (i / stride) % dim;
    for (Eigen::Index j = 0; j < order; ++j) {
      const Eigen::Index dj = (j / stride) % dim;
      const Eigen::Index ii = i + (dj - di) * stride;
      const Eigen::Index jj = j + (di - dj) * stride;
      out(ii, jj) = m(i, j);
    }
  }
  return out;
}

CMat partial_trace(const CMat& m, const std::vector<int>& dims, int subsystem) {
  const Eigen::Index order = dims_order(dims);
  if (m.rows() != order || m.cols() != order)
    throw ValidationError("matrix order does not match dims");
  const auto [stride, dim] = subsystem_index(dims, subsystem, order);

  const Eigen::Index reduced = order / dim;
  CMat out = CMat::Zero(reduced, reduced);
  // Composite index i = hi * (stride*dim) + x * stride + lo.
  const Eigen::Index block = stride * dim;
  for (Eigen::Index rhi = 0; rhi < order / block; ++rhi) {
    for (Eigen::Index rlo = 0; rlo < stride; ++rlo) {
      const Eigen::Index r = rhi * stride + rlo;
      for (Eigen::Index chi = 0; chi < order / block; ++chi) {
        for (Eigen::Index clo = 0; clo < stride; ++clo) {
          const Eigen::Index c = chi * stride + clo;
          Complex acc(0, 0);
          for (int x = 0; x < dim; ++x)
            acc += m(rhi * block + x * stride + rlo, chi * block + x * stride + clo);
          out(r, c) += acc;
        }
      }
    }
  }
  return out;
}

Complex trace_of_product(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw ValidationError("trace_of_product dimension mismatch");
  return a.transpose().cwiseProduct(b).sum();
}

double hermiticity_defect(const CMat& m) {
  if (m.rows() != m.cols()) throw ValidationError("hermiticity check requires a square matrix");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& m, double tol) { return hermiticity_defect(m) <= tol; }

}  // namespace mdiw
