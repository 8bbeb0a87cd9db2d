#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdiw/npt_witness.hpp"
#include "mdiw/states.hpp"

using namespace mdiw;

namespace {

// Independent route: elementary symmetric polynomials straight from the
// partial-transpose spectrum.
RVec eigen_oracle(const DensityMatrix& rho, int upto) {
  const RVec eigs = hermitian_eigenvalues(partial_transpose(rho.data, rho.dims, 1));
  RVec e = RVec::Zero(upto + 1);
  e[0] = 1.0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    for (int k = std::min<int>(upto, static_cast<int>(i) + 1); k >= 1; --k)
      e[k] += eigs[i] * e[k - 1];
  return e;
}

double pt_min_eig(const DensityMatrix& rho) {
  return hermitian_eigenvalues(partial_transpose(rho.data, rho.dims, 1)).minCoeff();
}

}  // namespace

TEST_CASE("witness traces on reference states") {
  // Uniform spectrum: a_k(I/4 ladder) = C(4,k)/4^k.
  const DensityMatrix mixed = DensityMatrix::unchecked({2, 2}, CMat::Identity(4, 4) / 4.0);
  const HermitianOperator w2 = build_witness(2, 2);
  const double a2_mixed = (w2.data * kron_power(mixed.data, 2)).trace().real();
  CHECK(a2_mixed == doctest::Approx(3.0 / 8.0).epsilon(1e-12));

  const HermitianOperator w4 = build_witness(4, 2);
  CHECK(w4.data.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hermiticity_defect(w4.data) < 1e-14);

  const double det_singlet = (w4.data * kron_power(psi_minus().data, 4)).trace().real();
  CHECK(det_singlet == doctest::Approx(-1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("frozen coefficient ladders") {
  SUBCASE("singlet") {
    const CoefficientReport r = coefficients(psi_minus(), CoeffMethod::Eigen, 4);
    const double expected[5] = {1.0, 1.0, 0.0, -0.25, -1.0 / 16.0};
    for (int k = 0; k <= 4; ++k)
      CHECK(r.a[k] == doctest::Approx(expected[k]).epsilon(1e-10));
    CHECK(r.verdict == Verdict::NPT);
    CHECK(r.first_negative == 3);
  }

  SUBCASE("maximally mixed") {
    const DensityMatrix mixed = DensityMatrix::unchecked({2, 2}, CMat::Identity(4, 4) / 4.0);
    const CoefficientReport r = coefficients(mixed, CoeffMethod::PowerSum, 4);
    const double expected[5] = {1.0, 1.0, 3.0 / 8.0, 1.0 / 16.0, 1.0 / 256.0};
    for (int k = 0; k <= 4; ++k)
      CHECK(r.a[k] == doctest::Approx(expected[k]).epsilon(1e-10));
    CHECK(r.verdict == Verdict::PPT);
  }

  SUBCASE("werner boundary") {
    const CoefficientReport r = coefficients(werner_state(1.0 / 3.0), CoeffMethod::Eigen, 4);
    CHECK(std::abs(r.a[4]) < 1e-12);
    CHECK(r.verdict == Verdict::Boundary);
  }
}

TEST_CASE("a0 and a1 are exactly one") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix rho = random_density({2, 2}, 600 + seed);
    for (CoeffMethod m : {CoeffMethod::Eigen, CoeffMethod::PowerSum, CoeffMethod::WitnessTrace}) {
      const CoefficientReport r = coefficients(rho, m, 4);
      CHECK(std::abs(r.a[0] - 1.0) < 1e-10);
      CHECK(std::abs(r.a[1] - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("method agreement") {
  SUBCASE("qubits, all routes up to a_4") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const DensityMatrix rho = random_density({2, 2}, 700 + seed);
      const CoefficientReport eig = coefficients(rho, CoeffMethod::Eigen, 4);
      const CoefficientReport pow = coefficients(rho, CoeffMethod::PowerSum, 4);
      const CoefficientReport wit = coefficients(rho, CoeffMethod::WitnessTrace, 4);
      for (int k = 0; k <= 4; ++k) {
        CHECK(std::abs(eig.a[k] - pow.a[k]) < 1e-8);
        CHECK(std::abs(eig.a[k] - wit.a[k]) < 1e-8);
      }
    }
  }

  SUBCASE("qutrits, witness route up to a_3, spectral routes to a_9") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const DensityMatrix rho = random_density({3, 3}, 800 + seed);
      const CoefficientReport eig = coefficients(rho, CoeffMethod::Eigen, 9);
      const CoefficientReport pow = coefficients(rho, CoeffMethod::PowerSum, 9);
      for (int k = 0; k <= 9; ++k) CHECK(std::abs(eig.a[k] - pow.a[k]) < 1e-8);
      const CoefficientReport wit = coefficients(rho, CoeffMethod::WitnessTrace, 3);
      for (int k = 0; k <= 3; ++k) CHECK(std::abs(eig.a[k] - wit.a[k]) < 1e-8);
    }
  }
}

TEST_CASE("witness route guards") {
  const DensityMatrix rho9 = random_density({3, 3}, 900);
  CHECK_THROWS_AS(coefficients(rho9, CoeffMethod::WitnessTrace, 4), SizeGuardError);
  CHECK_THROWS_AS(coefficients(rho9, CoeffMethod::WitnessTrace, 5), ValidationError);
  CHECK_THROWS_AS(build_witness(4, 3), SizeGuardError);
  CHECK_THROWS_AS(build_witness(5, 2), ValidationError);
  CHECK_THROWS_AS(coefficients(rho9, CoeffMethod::Eigen, 10), ValidationError);
}

TEST_CASE("npt_verdict") {
  const NptResult singlet = npt_verdict(psi_minus());
  CHECK(singlet.verdict == Verdict::NPT);
  CHECK(singlet.first_negative == 3);

  CHECK(npt_verdict(werner_state(0.2)).verdict == Verdict::PPT);
  CHECK(npt_verdict(werner_state(0.9)).verdict == Verdict::NPT);

  SUBCASE("matches the minimum partial-transpose eigenvalue") {
    int compared = 0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
      const DensityMatrix rho = random_density({2, 2}, 1000 + seed);
      const double min_eig = pt_min_eig(rho);
      if (std::abs(min_eig) < 1e-8) continue;
      const NptResult r = npt_verdict(rho);
      if (r.verdict == Verdict::Boundary) continue;  // undecidable at tol, never wrong-signed
      CHECK((r.verdict == Verdict::NPT) == (min_eig < 0.0));
      ++compared;
    }
    CHECK(compared > 250);
  }

  SUBCASE("separable samples never flag NPT") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const NptResult r = npt_verdict(random_separable(2, 2, 2 + static_cast<int>(seed % 3), seed));
      CHECK(r.verdict != Verdict::NPT);
      for (Eigen::Index k = 0; k < r.report.a.size(); ++k) CHECK(r.report.a[k] >= -1e-10);
    }
  }

  SUBCASE("nonnegative ladder implies nonnegative spectrum") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const DensityMatrix rho = random_density({2, 2}, 1500 + seed);
      const NptResult r = npt_verdict(rho);
      if (r.verdict == Verdict::PPT) CHECK(pt_min_eig(rho) > -1e-9);
      if (r.verdict == Verdict::NPT) CHECK(pt_min_eig(rho) < 1e-12);
    }
  }
}

TEST_CASE("universal_det") {
  CHECK(universal_det(DensityMatrix::unchecked({2, 2}, CMat::Identity(4, 4) / 4.0)) ==
        doctest::Approx(1.0 / 256.0).epsilon(1e-12));
  CHECK(universal_det(psi_minus()) == doctest::Approx(-1.0 / 16.0).epsilon(1e-12));

  SUBCASE("werner closed form (1+p)^3 (1-3p) / 256") {
    for (double p = 0.0; p <= 1.0 + 1e-12; p += 0.1) {
      const double pp = std::min(p, 1.0);
      const double expected = std::pow(1.0 + pp, 3) * (1.0 - 3.0 * pp) / 256.0;
      CHECK(universal_det(werner_state(pp)) == doctest::Approx(expected).epsilon(1e-10));
    }
  }

  SUBCASE("sign matches the minimum partial-transpose eigenvalue") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      const DensityMatrix rho = random_density({2, 2}, 2000 + seed);
      const double min_eig = pt_min_eig(rho);
      if (std::abs(min_eig) < 1e-10) continue;
      CHECK((universal_det(rho) < 0.0) == (min_eig < 0.0));
    }
  }

  SUBCASE("agrees with the eigen-oracle determinant") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const DensityMatrix rho = random_density({2, 2}, 2500 + seed);
      const RVec eigs = hermitian_eigenvalues(partial_transpose(rho.data, rho.dims, 1));
      CHECK(std::abs(universal_det(rho) - eigs.prod()) < 1e-9);
    }
  }

  CHECK_THROWS_AS(universal_det(random_density({3, 3}, 1)), ValidationError);
}

TEST_CASE("eigen oracle cross-check of all three methods") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const DensityMatrix rho = random_density({2, 2}, 3000 + seed);
    const RVec oracle = eigen_oracle(rho, 4);
    for (CoeffMethod m : {CoeffMethod::Eigen, CoeffMethod::PowerSum, CoeffMethod::WitnessTrace}) {
      const CoefficientReport r = coefficients(rho, m, 4);
      for (int k = 0; k <= 4; ++k) CHECK(r.a[k] == doctest::Approx(oracle[k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("measurement cost comparison") {
  CHECK(tomography_cost(2) == 15);
  CHECK(tomography_cost(3) == 80);
  CHECK(witness_cost(2) == 1);
  CHECK(witness_cost(3) == 2);
  CHECK(witness_cost(4) == 4);
  CHECK_THROWS_AS(witness_cost(5), ValidationError);
  CHECK_THROWS_AS(tomography_cost(1), ValidationError);
}
