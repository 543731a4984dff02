#include "helpers.hpp"

using namespace qcorr;
using namespace qcorr::test;
using Catch::Approx;

TEST_CASE("build_isometry") {
  // Computational basis + Z PVM: the CNOT-column isometry |psi> -> sum |j> X_j|psi>.
  PremeasurementIsometry cnot =
      build_isometry(Mat::Identity(2, 2), pauli_pvm('z'));
  Vec psi(2);
  psi << Cplx(0.6), Cplx(0.0, 0.8);
  Vec expect = Vec::Zero(4);
  expect(0) = 0.6;               // |0>|0>
  expect(3) = Cplx(0.0, 0.8);    // |1>|1>
  CHECK((cnot.v * psi - expect).norm() < 1e-12);

  // Single-projector PVM: no correlation possible.
  Pvm trivial{{Mat::Identity(3, 3)}};
  PremeasurementIsometry vi = build_isometry(Mat::Identity(1, 1), trivial);
  CHECK((vi.v - Mat::Identity(3, 3)).norm() < 1e-12);

  Rng rng(8);
  Pvm qutrit = random_pvm(3, 2, rng);
  PremeasurementIsometry vq = build_isometry(Mat::Identity(2, 2), qutrit);
  CHECK((vq.v.adjoint() * vq.v - Mat::Identity(3, 3)).norm() < 1e-12);

  CHECK_THROWS_AS(build_isometry(Mat::Identity(3, 3), pauli_pvm('z')),
                  SizeMismatch);
  Mat skew(2, 2);
  skew << 1, 1, 0, 1;
  CHECK_THROWS_AS(build_isometry(skew, pauli_pvm('z')), NonOrthonormalBasis);
}

TEST_CASE("premeasure") {
  DensityOperator ket = pure_state(ket0(2), {2});

  // Z measurement of |0>: the state evolves trivially to |0,0>.
  PremeasurementState z =
      premeasure(ket, build_isometry(Mat::Identity(2, 2), pauli_pvm('z')));
  Mat expect_z = Mat::Zero(4, 4);
  expect_z(0, 0) = 1.0;
  CHECK((z.state.mat - expect_z).norm() < 1e-12);

  // X measurement of |0>: maximally entangled output.
  PremeasurementState x =
      premeasure(ket, build_isometry(Mat::Identity(2, 2), pauli_pvm('x')));
  CHECK(x.state.is_pure());
  CHECK((partial_trace(x.state.mat, {2, 2}, {0}) -
         0.5 * Mat::Identity(2, 2)).norm() < 1e-12);
  CHECK((partial_trace(x.state.mat, {2, 2}, {1}) -
         0.5 * Mat::Identity(2, 2)).norm() < 1e-12);

  // Maximally mixed input + Z: the classical perfectly correlated pair.
  PremeasurementState cc =
      premeasure(make_density(Mat::Identity(2, 2) / 2.0, {2}),
                 build_isometry(Mat::Identity(2, 2), pauli_pvm('z')));
  Mat expect_cc = Mat::Zero(4, 4);
  expect_cc(0, 0) = 0.5;
  expect_cc(3, 3) = 0.5;
  CHECK((cc.state.mat - expect_cc).norm() < 1e-12);

  // Block form: block (j,k) equals |W_j><W_k| (x) X_j rho X_k.
  Rng rng(9);
  PremeasurementState pm = random_premeasurement(3, 3, rng);
  const Mat& w = pm.basis_w;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      Mat bj = kron(w.col(j).adjoint(), Mat::Identity(3, 3));
      Mat bk = kron(w.col(k), Mat::Identity(3, 3));
      Mat block = bj * pm.state.mat * bk;
      Mat expect = pm.pvm.projectors[j] * pm.sigma_s * pm.pvm.projectors[k];
      CHECK((block - expect).norm() < 1e-12);
    }
}

TEST_CASE("naimark_extend") {
  // Projective input: identity embedding.
  Povm proj{pauli_pvm('x').projectors};
  NaimarkExtension triv = naimark_extend(proj);
  CHECK(triv.trivial);
  CHECK((triv.embedding - Mat::Identity(2, 2)).norm() == 0.0);

  // Qubit trine POVM.
  Povm trine;
  for (int k = 0; k < 3; ++k) {
    double th = std::numbers::pi * k / 3.0;
    Vec phi(2);
    phi << std::cos(th), std::sin(th);
    trine.elements.push_back((2.0 / 3.0) * (phi * phi.adjoint()));
  }
  NaimarkExtension ext = naimark_extend(trine);
  CHECK_FALSE(ext.trivial);
  ext.pvm.validate(1e-10);
  CHECK((ext.embedding.adjoint() * ext.embedding - Mat::Identity(2, 2)).norm() <
        1e-12);
  for (int j = 0; j < 3; ++j) {
    Mat back = ext.embedding.adjoint() * ext.pvm.projectors[j] * ext.embedding;
    CHECK((back - trine.elements[j]).norm() < 1e-10);
  }

  Povm single{{Mat::Identity(2, 2)}};
  NaimarkExtension s = naimark_extend(single);
  CHECK(s.pvm.outcomes() == 1);
}

TEST_CASE("fourier_basis") {
  Mat f2 = fourier_basis(Mat::Identity(2, 2));
  Mat plus(2, 1), minus(2, 1);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  minus << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
  CHECK((f2.col(0) - plus).norm() < 1e-12);
  CHECK((f2.col(1) - minus).norm() < 1e-12);

  // Double application permutes indices j -> -j mod d.
  Mat w3 = Mat::Identity(3, 3);
  Mat ff = fourier_basis(fourier_basis(w3));
  CHECK((ff.col(0) - w3.col(0)).norm() < 1e-12);
  CHECK((ff.col(1) - w3.col(2)).norm() < 1e-12);
  CHECK((ff.col(2) - w3.col(1)).norm() < 1e-12);

  // Mutual unbiasedness: |<Z_k|W_j>|^2 = 1/d.
  Rng rng(14);
  Mat w = random_unitary(4, rng);
  Mat z = fourier_basis(w);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      CHECK(std::norm((z.col(k).adjoint() * w.col(j))(0, 0)) ==
            Approx(0.25).margin(1e-12));
}

TEST_CASE("petz_map") {
  Mat z2 = Mat::Identity(2, 2);

  // sigma = I/d: the Petz map is the decoherence channel itself.
  PetzMap unif = petz_map(Mat::Identity(2, 2) / 2.0, z2);
  Rng rng(15);
  Mat rho = random_state({2}, 2, rng).mat;
  CHECK((unif.apply(rho) - unif.channel(rho)).norm() < 1e-10);

  // sigma diagonal in Z is a fixed point of petz o channel.
  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  PetzMap pd = petz_map(diag, z2);
  CHECK((pd.apply(pd.channel(diag)) - diag).norm() < 1e-12);

  // Random sigma: petz(E(sigma)) = sigma within 1e-10 (the automatic leg).
  for (int t = 0; t < 10; ++t) {
    Mat sigma = random_state({2}, 2, rng).mat;
    PetzMap map = petz_map(sigma, z2);
    CHECK((map.apply(map.channel(sigma)) - sigma).norm() < 1e-10);
  }

  // Input outside supp(E(sigma)) is rejected.
  Mat proj0 = Mat::Zero(2, 2);
  proj0(0, 0) = 1.0;
  PetzMap rank1 = petz_map(proj0, z2);
  Mat outside = Mat::Zero(2, 2);
  outside(1, 1) = 1.0;
  CHECK_THROWS_AS(rank1.apply(outside), SupportError);
}

TEST_CASE("mus_reconstruct") {
  // The maximally entangled state is a MUS with H(W|B) = 0.
  DensityOperator mes = mes_state(2);
  DensityOperator rec = mus_reconstruct(mes, Mat::Identity(2, 2));
  CHECK((rec.mat - mes.mat).norm() < 1e-10);

  // Premeasured states reconstruct, and the conditional operators match the
  // generator blocks.
  Rng rng(16);
  for (int t = 0; t < 5; ++t) {
    PremeasurementState pm = random_premeasurement(3, 3, rng);
    DensityOperator rebuilt = mus_reconstruct(pm.state, pm.basis_w);
    CHECK((rebuilt.mat - pm.state.mat).norm() < 1e-8);

    std::vector<Mat> taus =
        conditional_operators(pm.state, pm.basis_w, Side::A);
    for (size_t j = 0; j < taus.size(); ++j) {
      Mat expect = pm.pvm.projectors[j] * pm.sigma_s * pm.pvm.projectors[j];
      CHECK((taus[j] - expect).norm() < 1e-10);
    }
  }

  // Generic random states are rejected.
  DensityOperator generic = random_state({2, 2}, 4, rng);
  CHECK_THROWS_AS(mus_reconstruct(generic, Mat::Identity(2, 2)), NotMUS);
}

TEST_CASE("conditional_operators") {
  // CC state: tau_j diagonal with orthogonal ranges.
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 0.6;
  m(3, 3) = 0.4;
  DensityOperator cc = make_density(m, {2, 2});
  std::vector<Mat> taus =
      conditional_operators(cc, Mat::Identity(2, 2), Side::A);
  CHECK((taus[0] * taus[1]).norm() < 1e-12);

  // Product state: all tau_j proportional to rho_B.
  Rng rng(17);
  Mat rho_a = random_state({2}, 2, rng).mat;
  Mat rho_b = random_state({2}, 2, rng).mat;
  DensityOperator prod = make_density(kron(rho_a, rho_b), {2, 2});
  std::vector<Mat> tp = conditional_operators(prod, Mat::Identity(2, 2), Side::A);
  for (int j = 0; j < 2; ++j)
    CHECK((tp[j] - rho_a(j, j).real() * rho_b).norm() < 1e-12);

  // Sum rule: sum_j tau_j = rho_B.
  DensityOperator any = random_state({2, 3}, 6, rng);
  std::vector<Mat> ts = conditional_operators(any, Mat::Identity(2, 2), Side::A);
  Mat sum = Mat::Zero(3, 3);
  for (const Mat& t : ts) sum += t;
  CHECK((sum - partial_trace(any.mat, any.dims, {1})).norm() < 1e-12);
}

TEST_CASE("premeasurement output perfect correlation") {
  // Conditional operators of a premeasurement output are pairwise orthogonal.
  Rng rng(18);
  for (int t = 0; t < 3; ++t) {
    PremeasurementState pm = random_premeasurement(4, 3, rng);
    std::vector<Mat> taus =
        conditional_operators(pm.state, pm.basis_w, Side::A);
    for (size_t j = 0; j < taus.size(); ++j)
      for (size_t k = j + 1; k < taus.size(); ++k)
        CHECK((taus[j] * taus[k]).norm() < 1e-10);
  }
}

TEST_CASE("MQ1 equals MQ2 round trips") {
  Rng rng(19);
  // Premeasurement outputs pass the purification-route test, and the witness
  // regenerates the state.
  for (int t = 0; t < 4; ++t) {
    PremeasurementState pm = random_premeasurement(3, 2, rng);
    StateClassVerdict mq = is_mq(pm.state, 1e-8);
    REQUIRE(mq.member);
    const MqWitness& w = *mq.mq_witness;
    Mat recon = Mat::Zero(6, 6);
    for (int j = 0; j < w.basis_w.cols(); ++j)
      for (int k = 0; k < w.basis_w.cols(); ++k)
        recon += kron(w.basis_w.col(j) * w.basis_w.col(k).adjoint(),
                      w.projectors[j] * w.sigma * w.projectors[k]);
    CHECK((recon - pm.state.mat).norm() < 1e-8);
  }
}
