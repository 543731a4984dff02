#include "helpers.hpp"

using namespace qcorr;
using namespace qcorr::test;
using Catch::Approx;

TEST_CASE("purify") {
  // Pure input: trivial purification, appended dimension 1.
  DensityOperator psi = pure_state(ket0(2), {2});
  DensityOperator ppsi = purify(psi);
  CHECK(ppsi.dims == std::vector<int>{2, 1});
  CHECK((ppsi.mat - psi.mat).norm() < 1e-12);

  // I/2 purifies to a maximally entangled pair.
  DensityOperator mixed = make_density(Mat::Identity(2, 2) / 2.0, {2});
  DensityOperator pm = purify(mixed);
  CHECK(pm.dims == std::vector<int>{2, 2});
  CHECK(pm.is_pure());
  CHECK((partial_trace(pm.mat, pm.dims, {0}) - mixed.mat).norm() < 1e-10);

  Rng rng(1);
  DensityOperator rho = random_state({3}, 3, rng);
  DensityOperator pr = purify(rho);
  CHECK(pr.is_pure());
  CHECK((partial_trace(pr.mat, pr.dims, {0}) - rho.mat).norm() < 1e-10);
}

TEST_CASE("random generation determinism and rank") {
  Rng a(99), b(99);
  DensityOperator s1 = random_state({2, 2}, 3, a);
  DensityOperator s2 = random_state({2, 2}, 3, b);
  CHECK((s1.mat - s2.mat).norm() == 0.0);

  Rng c(5);
  CHECK(random_state({2, 2}, 1, c).is_pure());

  Rng d(7);
  Mat u = random_unitary(4, d);
  CHECK((u.adjoint() * u - Mat::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("Hilbert-Schmidt eigenvalue moments") {
  // For the qubit HS ensemble, E[lambda_max] = 7/8 and E[Tr rho^2] = 4/5.
  Rng rng(2024);
  const int n = 10000;
  double sum_lmax = 0.0, sum_purity = 0.0;
  for (int i = 0; i < n; ++i) {
    DensityOperator rho = random_state({2}, 2, rng);
    HermitianEig eig = herm_eig(rho.mat);
    sum_lmax += eig.eigenvalues(0);
    sum_purity += (rho.mat * rho.mat).trace().real();
  }
  CHECK(sum_lmax / n == Approx(7.0 / 8.0).epsilon(0.02));
  CHECK(sum_purity / n == Approx(4.0 / 5.0).epsilon(0.02));
}

namespace {

DensityOperator cc_example() {
  // Eq.-(2)-form state with generic weights.
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 0.4;
  m(1, 1) = 0.1;
  m(2, 2) = 0.2;
  m(3, 3) = 0.3;
  return make_density(m, {2, 2});
}

}  // namespace

TEST_CASE("is_cq") {
  StateClassVerdict ccA = is_cq(cc_example(), Side::A);
  StateClassVerdict ccB = is_cq(cc_example(), Side::B);
  CHECK(ccA.member);
  CHECK(ccB.member);

  // Maximally entangled state: conditional operators do not commute. Oracle:
  // direct commutators of Tr_B[(I (x) F) rho] over the Hermitian basis.
  DensityOperator mes = mes_state(2);
  double oracle_gap = 0.0;
  for (const Mat& f : hermitian_basis(2))
    for (const Mat& g : hermitian_basis(2)) {
      Mat af = partial_trace(kron(Mat::Identity(2, 2), f) * mes.mat, {2, 2}, {0});
      Mat ag = partial_trace(kron(Mat::Identity(2, 2), g) * mes.mat, {2, 2}, {0});
      oracle_gap = std::max(oracle_gap, (af * ag - ag * af).norm());
    }
  StateClassVerdict v = is_cq(mes, Side::A);
  CHECK_FALSE(v.member);
  CHECK(v.gap == Approx(oracle_gap).margin(1e-12));
  CHECK(v.gap > 0.1);

  // Eq.-(3) state: p = (1/2, 1/2), rho_B1 = |+><+|, rho_B2 = I/2.
  Mat plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  Mat m = Mat::Zero(4, 4);
  m.block(0, 0, 2, 2) = 0.5 * plus;
  m.block(2, 2, 2, 2) = 0.25 * Mat::Identity(2, 2);
  StateClassVerdict eq3 = is_cq(make_density(m, {2, 2}), Side::A);
  REQUIRE(eq3.member);
  REQUIRE(eq3.witness_basis.has_value());
  // Witness must be the computational basis up to phases and ordering.
  Mat w = *eq3.witness_basis;
  for (int j = 0; j < 2; ++j) {
    double overlap0 = std::abs(w(0, j));
    CHECK((overlap0 < 1e-8 || overlap0 > 1.0 - 1e-8));
  }
}

TEST_CASE("is_cc") {
  CHECK(is_cc(cc_example()).member);
  CHECK(is_cc(werner(0.0)).member);  // fully mixed

  Mat plus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  Mat zero = Mat::Zero(2, 2);
  zero(0, 0) = 1.0;
  CHECK(is_cc(make_density(kron(plus, zero), {2, 2})).member);  // product pure

  CHECK_FALSE(is_cc(mes_state(2)).member);
}

TEST_CASE("is_separable_small") {
  // Maximally entangled: min partial-transpose eigenvalue is exactly -1/2.
  StateClassVerdict mes = is_separable_small(mes_state(2));
  CHECK(mes.cls == StateClass::Ent);
  CHECK(mes.gap == Approx(-0.5).margin(1e-12));

  CHECK(is_separable_small(cc_example()).cls == StateClass::Sep);

  // Werner PT spectrum: (1+p)/4 triple, (1-3p)/4; boundary at p = 1/3.
  StateClassVerdict boundary = is_separable_small(werner(1.0 / 3.0));
  CHECK(boundary.gap == Approx(0.0).margin(1e-12));
  CHECK(is_separable_small(werner(0.5)).cls == StateClass::Ent);
  CHECK(is_separable_small(werner(0.2)).cls == StateClass::Sep);

  // Beyond 2x2 / 2x3 the PPT-positive verdict is flagged one-sided.
  Rng rng(4);
  StateClassVerdict big = is_separable_small(random_state({3, 3}, 1, rng));
  if (big.cls != StateClass::Ent) CHECK(big.inconclusive);
}

TEST_CASE("is_mq membership") {
  Rng rng(12);

  // Any pure bipartite state is MQ (and MM).
  DensityOperator psi = random_pure({2, 3}, rng);
  CHECK(is_mq(psi).member);

  // Intro example: premeasuring |0> in the X basis.
  PremeasurementState intro =
      premeasure(pure_state(ket0(2), {2}), build_isometry(Mat::Identity(2, 2),
                                                          pauli_pvm('x')));
  StateClassVerdict v = is_mq(intro.state);
  CHECK(v.member);
  REQUIRE(v.mq_witness.has_value());

  // Product of maximally mixed states is not MQ.
  DensityOperator mm = make_density(Mat::Identity(4, 4) / 4.0, {2, 2});
  CHECK_FALSE(is_mq(mm).member);

  // Witness reconstruction round-trip on random premeasurement states.
  for (int trial = 0; trial < 5; ++trial) {
    PremeasurementState pm = random_premeasurement(3, 2, rng);
    StateClassVerdict mq = is_mq(pm.state);
    REQUIRE(mq.member);
    const MqWitness& w = *mq.mq_witness;
    Pvm pvm{w.projectors};
    pvm.validate(1e-8);
    PremeasurementState rebuilt = premeasure(
        DensityOperator{w.sigma, {pm.state.dims[1]}, TraceMode::normalized},
        build_isometry(w.basis_w, pvm));
    CHECK((rebuilt.state.mat - pm.state.mat).norm() < 1e-8);
  }
}

TEST_CASE("class inclusions on random members") {
  Rng rng(21);

  // Random CC states are CQ both ways.
  for (int t = 0; t < 3; ++t) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Mat m = Mat::Zero(6, 6);
    double total = 0.0;
    std::vector<double> p(6);
    for (double& x : p) total += (x = uni(rng));
    for (int i = 0; i < 6; ++i) m(i, i) = p[i] / total;
    DensityOperator cc = make_density(m, {2, 3});
    CHECK(is_cq(cc, Side::A).member);
    CHECK(is_cq(cc, Side::B).member);
  }

  // Random pure states are MM: MQ from both sides.
  for (int t = 0; t < 3; ++t) {
    DensityOperator psi = random_pure({2, 2}, rng);
    CHECK(is_mq(psi).member);
    DensityOperator swapped{permute_subsystems(psi.mat, psi.dims, {1, 0}),
                            {psi.dims[1], psi.dims[0]},
                            psi.trace_mode};
    CHECK(is_mq(swapped).member);
  }

  // Eq. (9) spot check: separable MQ states are CC. A premeasurement with a
  // computational PVM and diagonal sigma is such a state.
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Mat sigma = Mat::Zero(2, 2);
  double w0 = 0.3 + 0.4 * uni(rng);
  sigma(0, 0) = w0;
  sigma(1, 1) = 1.0 - w0;
  PremeasurementState pm =
      premeasure(make_density(sigma, {2}),
                 build_isometry(random_unitary(2, rng), pauli_pvm('z')));
  StateClassVerdict sep = is_separable_small(pm.state);
  REQUIRE(sep.cls == StateClass::Sep);
  CHECK(is_mq(pm.state).member);
  CHECK(is_cc(pm.state).member);
}

TEST_CASE("validation errors") {
  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = -0.5;
  bad(1, 1) = 1.5;
  CHECK_THROWS_AS(make_density(bad, {2}), NotPSD);

  CHECK_THROWS_AS(make_density(2.0 * Mat::Identity(2, 2), {2}), DomainError);
  CHECK_THROWS_AS(make_density(Mat::Identity(4, 4) / 4.0, {2}), DimMismatch);

  // Subnormalized states are accepted in subnormalized mode only.
  CHECK_THROWS_AS(make_density(0.25 * Mat::Identity(2, 2), {2}), DomainError);
  CHECK_NOTHROW(
      make_density(0.25 * Mat::Identity(2, 2), {2}, TraceMode::subnormalized));
}
