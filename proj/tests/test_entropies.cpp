#include "helpers.hpp"
#include "qcorr/entropies.hpp"

using namespace qcorr;
using namespace qcorr::test;
using Catch::Approx;

namespace {

// Independent H_min oracle: smallest lambda with rho <= lambda (I (x) sigma),
// found by bisection, minimized over a coarse sigma grid. Returns an upper
// estimate of -H_min... each grid sigma gives a feasible -D_max value, so the
// max over the grid lower-bounds H_min.
double hmin_grid_oracle(const DensityOperator& rho, int steps = 9) {
  const int da = rho.dims[0], db = rho.dims[1];
  double best = -1e300;
  for (int a = 1; a < steps; ++a)
    for (int b = 1; b < steps; ++b) {
      RVec diag(db);
      if (db == 2) {
        diag << double(a), double(b);
      } else {
        continue;
      }
      Mat sigma = Mat::Zero(db, db);
      for (int i = 0; i < db; ++i) sigma(i, i) = diag(i) / diag.sum();
      // Bisection on lambda for rho <= lambda (I (x) sigma).
      Mat big = kron(Mat::Identity(da, da), sigma);
      double lo = 1e-6, hi = 1e6;
      for (int it = 0; it < 120; ++it) {
        double mid = std::sqrt(lo * hi);
        HermitianEig eig = herm_eig(mid * big - rho.mat);
        (eig.eigenvalues(eig.eigenvalues.size() - 1) >= -1e-12 ? hi : lo) = mid;
      }
      best = std::max(best, -std::log2(hi));
    }
  return best;
}

}  // namespace

TEST_CASE("von Neumann conditional entropy closed forms") {
  CHECK(cond_entropy(DivergenceKind::vn(), mes_state(2), 1).value ==
        Approx(-1.0).margin(1e-10));

  Mat cc = Mat::Zero(4, 4);
  cc(0, 0) = 0.5;
  cc(3, 3) = 0.5;
  CHECK(cond_entropy(DivergenceKind::vn(), make_density(cc, {2, 2}), 1).value ==
        Approx(0.0).margin(1e-10));

  DensityOperator mm = make_density(Mat::Identity(4, 4) / 4.0, {2, 2});
  CHECK(cond_entropy(DivergenceKind::vn(), mm, 1).value ==
        Approx(1.0).margin(1e-10));
}

TEST_CASE("closed form agrees with the optimizer route") {
  Rng rng(40);
  DensityOperator rho = random_state({2, 2}, 4, rng);
  double closed = cond_entropy(DivergenceKind::vn(), rho, 1).value;
  CondEntropyOptions opts;
  opts.force_search = true;
  opts.multistarts = 6;
  CondEntropyResult searched = cond_entropy(DivergenceKind::vn(), rho, 1, opts);
  CHECK(searched.method == CondEntropyResult::Method::parametrized_search);
  CHECK(searched.value == Approx(closed).margin(1e-6));
}

TEST_CASE("H_min of the maximally entangled state") {
  CondEntropyOptions opts;
  opts.seed = 3;
  CondEntropyResult r =
      cond_entropy(DivergenceKind::dmax(), mes_state(2), 1, opts);
  CHECK(r.value == Approx(-1.0).margin(1e-6));
  // Grid + bisection oracle: a lower bound on H_min that reaches -1 at I/2.
  double oracle = hmin_grid_oracle(mes_state(2));
  CHECK(r.value >= oracle - 1e-9);
  CHECK(oracle == Approx(-1.0).margin(1e-6));
}

TEST_CASE("min and max entropies bracket the von Neumann one") {
  Rng rng(41);
  CondEntropyOptions opts;
  opts.seed = 11;
  for (int t = 0; t < 3; ++t) {
    DensityOperator rho = random_state({2, 2}, 4, rng);
    double h = cond_entropy(DivergenceKind::vn(), rho, 1).value;
    double hmin = cond_entropy(DivergenceKind::dmax(), rho, 1, opts).value;
    double hmax = cond_entropy(DivergenceKind::dfid(), rho, 1, opts).value;
    CHECK(hmin <= h + 1e-5);
    CHECK(h <= hmax + 1e-5);
    CHECK(std::abs(h) <= std::log2(2.0) + 1e-9);
  }
}

TEST_CASE("local unitary invariance") {
  Rng rng(42);
  DensityOperator rho = random_state({2, 2}, 4, rng);
  Mat u = kron(random_unitary(2, rng), random_unitary(2, rng));
  DensityOperator moved{u * rho.mat * u.adjoint(), rho.dims, rho.trace_mode};
  CHECK(cond_entropy(DivergenceKind::vn(), moved, 1).value ==
        Approx(cond_entropy(DivergenceKind::vn(), rho, 1).value).margin(1e-8));
}

TEST_CASE("duality") {
  // GHZ: H(A|B) = -H(A|C) = 0.
  Vec ghz = Vec::Zero(8);
  ghz(0) = 1 / std::sqrt(2.0);
  ghz(7) = 1 / std::sqrt(2.0);
  DensityOperator ghz_state = pure_state(ghz, {2, 2, 2});
  CHECK(dual_entropy_check(DualPair::vn_vn, ghz_state) < 1e-10);

  Rng rng(43);
  DensityOperator psi = random_pure({2, 2, 2}, rng);
  CHECK(dual_entropy_check(DualPair::vn_vn, psi) < 1e-8);

  CondEntropyOptions opts;
  opts.seed = 5;
  CHECK(dual_entropy_check(DualPair::min_max, psi, opts) < 1e-5);

  DensityOperator mixed = random_state({2, 2, 2}, 3, rng);
  CHECK_THROWS_AS(dual_entropy_check(DualPair::vn_vn, mixed), NotPure);
}

TEST_CASE("uncertainty given memory") {
  // Trivial environment: H(Z) of |0> is 0, H(X) is 1.
  DensityOperator ket = pure_state(ket0(2), {2, 1});
  CHECK(uncertainty_given_memory(ket, pauli_pvm('z'), DivergenceKind::vn()) ==
        Approx(0.0).margin(1e-10));
  CHECK(uncertainty_given_memory(ket, pauli_pvm('x'), DivergenceKind::vn()) ==
        Approx(1.0).margin(1e-10));

  // Maximally entangled memory: H(X|E) = 0 for any basis.
  Rng rng(44);
  DensityOperator mes = mes_state(2);
  Pvm random_basis = basis_pvm(random_unitary(2, rng));
  CHECK(uncertainty_given_memory(mes, random_basis, DivergenceKind::vn()) ==
        Approx(0.0).margin(1e-8));
}
