#pragma once

#include <vector>

#include "mdiw/numeric.hpp"

namespace mdiw {

/// Kronecker product with row-major composite indexing:
/// (A ⊗ B)[(i*nB + k), (j*nB + l)] = A(i,j) * B(k,l).
CMat kron(const CMat& a, const CMat& b);

/// k-fold Kronecker power of a.
CMat kron_power(const CMat& a, int k);

/// Applies (F_0 ⊗ F_1 ⊗ ... ⊗ F_{m-1}) to v one mode at a time. The product
/// matrix is never assembled; cost is sum_i n_i * prod_j n_j, memory one
/// vector. This is what makes 65536-dimensional contractions routine.
CVec kron_apply(const std::vector<CMat>& factors, const CVec& v);

/// Transpose of the chosen tensor factor only. Involutive and trace- and
/// Hermiticity-preserving.
CMat partial_transpose(const CMat& m, const std::vector<int>& dims, int subsystem);

/// Trace over the chosen tensor factor; output lives on the remaining dims.
CMat partial_trace(const CMat& m, const std::vector<int>& dims, int subsystem);

/// Tr(a b) without forming the product matrix.
Complex trace_of_product(const CMat& a, const CMat& b);

/// max_ij |M - M†|
double hermiticity_defect(const CMat& m);

bool is_hermitian(const CMat& m, double tol);

/// Product of a dims vector, validating positivity of every entry.
int dims_order(const std::vector<int>& dims);

}  // namespace mdiw
