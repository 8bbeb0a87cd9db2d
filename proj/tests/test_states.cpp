#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdiw/npt_witness.hpp"
#include "mdiw/states.hpp"
#include "mdiw/tensor.hpp"

using namespace mdiw;

namespace {

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

double pt_min_eig(const DensityMatrix& rho) {
  return hermitian_eigenvalues(partial_transpose(rho.data, rho.dims, 1)).minCoeff();
}

}  // namespace

TEST_CASE("bell_state") {
  const DensityMatrix phi2 = bell_state(2);
  // ⟨00|Φ⟩ amplitude is 1/√2, so the (00,00) matrix entry is 1/2.
  CHECK(phi2.data(0, 0).real() == doctest::Approx(0.5));
  CHECK(phi2.data(0, 3).real() == doctest::Approx(0.5));
  CHECK(max_abs(partial_trace(phi2.data, {2, 2}, 1) - 0.5 * CMat::Identity(2, 2)) < 1e-14);

  const DensityMatrix phi4 = bell_state(4);
  CHECK((phi4.data * phi4.data).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_NOTHROW(DensityMatrix::make(phi4.dims, phi4.data));

  CHECK_THROWS_AS(bell_state(1), ValidationError);
}

TEST_CASE("psi_minus") {
  const DensityMatrix s = psi_minus();
  const BlochForm f = bloch_decompose(s);
  CHECK(f.a.norm() < 1e-14);
  CHECK(f.b.norm() < 1e-14);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(f.c(i, j) == doctest::Approx(i == j ? -1.0 : 0.0).epsilon(1e-13));

  // Orthogonal to |Φ+⟩.
  CHECK(std::abs((s.data * bell_state(2).data).trace()) < 1e-14);
  CHECK(pt_min_eig(s) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("werner_state") {
  CHECK(max_abs(werner_state(0.0).data - CMat::Identity(4, 4) / 4.0) < 1e-15);
  CHECK(max_abs(werner_state(1.0).data - psi_minus().data) < 1e-15);
  CHECK(pt_min_eig(werner_state(1.0 / 3.0)) == doctest::Approx(0.0).epsilon(1e-12));

  const BlochForm f = bloch_decompose(werner_state(0.7));
  for (int i = 0; i < 3; ++i) CHECK(f.c(i, i) == doctest::Approx(-0.7).epsilon(1e-12));

  CHECK_THROWS_AS(werner_state(-0.01), ValidationError);
  CHECK_THROWS_AS(werner_state(1.01), ValidationError);
}

TEST_CASE("werner PPT boundary at p = 1/3") {
  for (double p = 0.0; p <= 1.0 + 1e-12; p += 0.05) {
    const bool ppt = pt_min_eig(werner_state(std::min(p, 1.0))) >= -1e-9;
    CHECK(ppt == (p <= 1.0 / 3.0 + 1e-9));
  }
}

TEST_CASE("timeshift_state") {
  CHECK(max_abs(timeshift_state(0.0).data - psi_minus().data) < 1e-15);
  CHECK(pt_min_eig(timeshift_state(0.5)) == doctest::Approx(0.0).epsilon(1e-12));

  // r = 1: even classical mixture of |00⟩ and |11⟩, separable.
  const DensityMatrix end = timeshift_state(1.0);
  CHECK(end.data(0, 0).real() == doctest::Approx(0.5));
  CHECK(end.data(3, 3).real() == doctest::Approx(0.5));
  CHECK(pt_min_eig(end) >= -1e-12);

  const BlochForm f = bloch_decompose(timeshift_state(0.8));
  CHECK(f.c(0, 0) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(f.c(1, 1) == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(f.c(2, 2) == doctest::Approx(0.6).epsilon(1e-12));

  CHECK_THROWS_AS(timeshift_state(-0.1), ValidationError);

  for (double r = 0.0; r <= 1.0 + 1e-12; r += 0.05) {
    const bool ppt = pt_min_eig(timeshift_state(std::min(r, 1.0))) >= -1e-9;
    CHECK(ppt == (r >= 0.5 - 1e-9));
  }
}

TEST_CASE("table1_ensemble") {
  const InputEnsemble ens = table1_ensemble();
  REQUIRE(ens.size() == 6);
  REQUIRE(ens.bloch.has_value());
  CHECK(ens.labels[0] == "H");
  CHECK((*ens.bloch)[0].isApprox(Eigen::Vector3d(0, 0, 1)));
  CHECK(ens.labels[5] == "R");
  CHECK((*ens.bloch)[5].isApprox(Eigen::Vector3d(0, -1, 0)));
  for (const DensityMatrix& s : ens.states)
    CHECK((s.data * s.data).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_NOTHROW(ens.validate());
}

TEST_CASE("random_density") {
  const DensityMatrix a = random_density(4, 99);
  const DensityMatrix b = random_density(4, 99);
  CHECK(max_abs(a.data - b.data) == 0.0);

  for (std::uint64_t seed = 0; seed < 100; ++seed)
    CHECK_NOTHROW(DensityMatrix::make({3}, random_density(3, seed).data));

  // Monte-Carlo mean concentrates on the maximally mixed state.
  CMat mean = CMat::Zero(2, 2);
  for (std::uint64_t seed = 0; seed < 500; ++seed) mean += random_density(2, seed).data;
  mean /= 500.0;
  CHECK(max_abs(mean - 0.5 * CMat::Identity(2, 2)) < 0.05);

  CHECK_THROWS_AS(random_density(1, 0), ValidationError);
}

TEST_CASE("random_separable") {
  SUBCASE("single term is a product state") {
    const DensityMatrix rho = random_separable(2, 2, 1, 7);
    const CMat ra = partial_trace(rho.data, rho.dims, 1);
    const CMat rb = partial_trace(rho.data, rho.dims, 0);
    CHECK(max_abs(rho.data - kron(ra, rb)) < 1e-12);
    // Product-state PT spectrum is the product of the marginal spectra.
    const RVec ea = hermitian_eigenvalues(ra);
    const RVec eb = hermitian_eigenvalues(rb.transpose().eval());
    RVec products(4);
    int k = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) products[k++] = ea[i] * eb[j];
    std::sort(products.begin(), products.end());
    const RVec pt_eigs = hermitian_eigenvalues(partial_transpose(rho.data, rho.dims, 1));
    for (int i = 0; i < 4; ++i)
      CHECK(pt_eigs[i] == doctest::Approx(products[i]).epsilon(1e-10));
  }

  SUBCASE("always PPT and normalized") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const DensityMatrix rho = random_separable(2, 2, 1 + static_cast<int>(seed % 4), seed);
      CHECK(std::abs(rho.data.trace().real() - 1.0) < 1e-12);
      CHECK(pt_min_eig(rho) >= -1e-10);
      CHECK(npt_verdict(rho).verdict != Verdict::NPT);
    }
  }

  CHECK_THROWS_AS(random_separable(2, 2, 0, 1), ValidationError);
}

TEST_CASE("bloch roundtrip") {
  CHECK(max_abs(bloch_compose(bloch_decompose(werner_state(0.4))).data - werner_state(0.4).data) <
        1e-13);
  const BlochForm zero = bloch_decompose(DensityMatrix::unchecked({2, 2}, CMat::Identity(4, 4) / 4));
  CHECK(zero.a.norm() + zero.b.norm() + zero.c.norm() < 1e-14);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DensityMatrix rho = random_density({2, 2}, 3000 + seed);
    CHECK(max_abs(bloch_compose(bloch_decompose(rho)).data - rho.data) < 1e-12);
  }

  CHECK_THROWS_AS(bloch_decompose(random_density({3, 3}, 1)), ValidationError);
}
