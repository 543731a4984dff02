#include "helpers.hpp"
#include "qcorr/smooth.hpp"

using namespace qcorr;
using namespace qcorr::test;
using Catch::Approx;

TEST_CASE("purified distance") {
  Rng rng(80);
  Mat rho = random_state({2}, 2, rng).mat;
  CHECK(purified_distance(rho, rho) == Approx(0.0).margin(1e-9));

  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(purified_distance(p0, p1) == Approx(1.0).margin(1e-12));

  // Formula substitution: P(|0><0|, |0><0|/2) with Fbar = sqrt(1/2) + 0.
  double expect = std::sqrt(1.0 - 0.5);
  CHECK(purified_distance(p0, 0.5 * p0) == Approx(expect).margin(1e-12));

  // Symmetry and the triangle inequality on random subnormalized triples.
  std::uniform_real_distribution<double> uni(0.3, 1.0);
  for (int t = 0; t < 10; ++t) {
    Mat a = uni(rng) * random_state({2}, 2, rng).mat;
    Mat b = uni(rng) * random_state({2}, 2, rng).mat;
    Mat c = uni(rng) * random_state({2}, 2, rng).mat;
    CHECK(purified_distance(a, b) == Approx(purified_distance(b, a)).margin(1e-10));
    CHECK(purified_distance(a, c) <=
          purified_distance(a, b) + purified_distance(b, c) + 1e-9);
  }
}

TEST_CASE("purified distance contracts under TNICPMs") {
  Rng rng(81);
  for (int t = 0; t < 5; ++t) {
    Mat a = random_state({2, 2}, 4, rng).mat;
    Mat b = random_state({2, 2}, 4, rng).mat;
    double before = purified_distance(a, b);
    // Partial trace.
    CHECK(purified_distance(partial_trace(a, {2, 2}, {0}),
                            partial_trace(b, {2, 2}, {0})) <= before + 1e-9);
    // Projection (trace-nonincreasing).
    Mat g = ginibre(4, 2, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat frame = Mat(qr.householderQ()).leftCols(2);
    Mat pi = frame * frame.adjoint();
    CHECK(purified_distance(pi * a * pi, pi * b * pi) <= before + 1e-9);
  }
}

TEST_CASE("ball membership") {
  Rng rng(82);
  DensityOperator center = random_state({2, 2}, 4, rng);
  CHECK(ball_membership(center, center, BallSpec::eps(0.0)));
  CHECK(ball_membership(center, center, BallSpec::eps(0.3)));

  DensityOperator other = random_state({2, 2}, 4, rng);
  CHECK_FALSE(ball_membership(center, other, BallSpec::eps(0.0)));

  // A projected member stays a member when the projector holds the support.
  DensityOperator low = random_state({2, 2}, 2, rng);
  Mat pi = support_projector(low.mat);
  DensityOperator near{0.9 * low.mat, low.dims, TraceMode::subnormalized};
  BallSpec spec = BallSpec::restricted(0.5, pi);
  REQUIRE(ball_membership(low, near, BallSpec::eps(0.5)));
  DensityOperator projected{pi * near.mat * pi, low.dims,
                            TraceMode::subnormalized};
  CHECK(ball_membership(low, projected, spec));
}

TEST_CASE("smooth entropies at eps 0 and monotonicity") {
  SmoothOptions opts;
  opts.seed = 83;

  DensityOperator mes = mes_state(2);
  SmoothResult zero =
      smooth_cond_entropy(SmoothWhich::min_entropy, mes, BallSpec::eps(0.0), opts);
  CHECK(zero.certified == SmoothResult::Certified::exact_eps0);
  CondEntropyOptions eopts;
  eopts.seed = opts.seed;
  eopts.multistarts = 4;
  CHECK(zero.value ==
        Approx(cond_entropy(DivergenceKind::dmax(), mes, 1, eopts).value)
            .margin(1e-12));

  // Smooth H_min grows with eps; warm-carrying keeps the grid monotone.
  double prev = zero.value;
  SmoothOptions grid = opts;
  for (double eps : {0.05, 0.1}) {
    SmoothResult r = smooth_cond_entropy(SmoothWhich::min_entropy, mes,
                                         BallSpec::eps(eps), grid);
    CHECK(r.value >= prev - 1e-9);
    CHECK(ball_membership(mes, r.optimal_state, BallSpec::eps(eps)));
    prev = r.value;
    grid.init_state = r.optimal_state.mat;
  }
  CHECK(prev > zero.value + 1e-3);  // eps = 0.1 must actually move

  // Smooth H_max decreases with eps on a classically correlated pair.
  Mat cc = Mat::Zero(4, 4);
  cc(0, 0) = 0.5;
  cc(3, 3) = 0.5;
  DensityOperator classical = make_density(cc, {2, 2});
  double h0 = smooth_cond_entropy(SmoothWhich::max_entropy, classical,
                                  BallSpec::eps(0.0), opts)
                  .value;
  double h5 = smooth_cond_entropy(SmoothWhich::max_entropy, classical,
                                  BallSpec::eps(0.05), opts)
                  .value;
  CHECK(h5 <= h0 + 1e-9);
  CHECK(h5 <= 0.0 + 1e-9);
}

TEST_CASE("smooth measures") {
  SmoothOptions opts;
  opts.seed = 84;

  // eps = 0 reduces to the unsmoothed value.
  Mat cc = Mat::Zero(4, 4);
  cc(0, 0) = 0.6;
  cc(3, 3) = 0.4;
  DensityOperator classical = make_density(cc, {2, 2});
  SmoothResult d0 = smooth_measure(SmoothMeasureKind::delta_2way_max, classical,
                                   BallSpec::eps(0.0), opts);
  CHECK(d0.certified == SmoothResult::Certified::exact_eps0);
  CHECK(d0.value == Approx(0.0).margin(1e-8));

  // CC center: the center itself is feasible at every eps.
  SmoothResult d5 = smooth_measure(SmoothMeasureKind::delta_2way_max, classical,
                                   BallSpec::eps(0.1), opts);
  CHECK(d5.value <= 1e-8);
}

TEST_CASE("theorem-6 style agreement for a premeasurement center") {
  Rng rng(85);
  PremeasurementState pm = random_premeasurement(2, 2, rng);
  SmoothOptions opts;
  opts.seed = 86;
  const double eps = 0.05;

  Mat v = pm.isometry();
  BallSpec ball = BallSpec::restricted(eps, v * v.adjoint());
  SmoothResult hmin =
      smooth_cond_entropy(SmoothWhich::min_entropy, pm.state, ball, opts);
  SmoothResult delta =
      smooth_measure(SmoothMeasureKind::delta_2way_max, pm.state, ball, opts);
  CHECK(delta.value == Approx(-hmin.value).margin(1e-4));
}

TEST_CASE("certify_smooth_collapse") {
  Rng rng(87);
  SmoothOptions opts;
  opts.seed = 88;

  // eps = 0 reproduces the plain certificate.
  PremeasurementState pm = random_premeasurement(2, 2, rng);
  CollapseCertificate plain =
      certify_collapse(pm.state, DivergenceKind::dmax(), 1e-4,
                       CondEntropyOptions{.multistarts = 3, .seed = 88});
  CollapseCertificate smooth0 = certify_smooth_collapse(
      pm, 0.0, 1e-4, SmoothFamily::dmax_family, opts);
  CHECK(smooth0.lower == Approx(plain.lower).margin(1e-7));
  CHECK(smooth0.collapsed);

  // Intro state, min/E_max pair at eps = 0.05.
  PremeasurementState intro = premeasure(
      pure_state(ket0(2), {2}),
      build_isometry(Mat::Identity(2, 2), pauli_pvm('x')));
  CollapseCertificate c1 = certify_smooth_collapse(
      intro, 0.05, 1e-3, SmoothFamily::dmax_family, opts);
  CHECK(c1.collapsed);
  CHECK(std::abs(c1.gap) < 1e-3);
  // Smoothing can only help: the smooth value sits at or below the eps = 0 one.
  CHECK(c1.lower <= 1.0 + 1e-9);

  // Random qubit premeasurement, max/E_fid pair at eps = 0.1.
  PremeasurementState pz = premeasure(
      random_state({2}, 2, rng),
      build_isometry(Mat::Identity(2, 2), pauli_pvm('z')));
  CollapseCertificate c2 = certify_smooth_collapse(
      pz, 0.1, 1e-3, SmoothFamily::dfid_family, opts);
  CHECK(c2.collapsed);
  CHECK(std::abs(c2.gap) < 1e-3);
}

TEST_CASE("lemma 5 orderings at one epsilon") {
  Rng rng(89);
  SmoothOptions opts;
  opts.seed = 90;
  opts.samples = 4;
  DensityOperator rho = random_state({2, 2}, 4, rng);
  const double eps = 0.05;

  SmoothResult hmin = smooth_cond_entropy(SmoothWhich::min_entropy, rho,
                                          BallSpec::eps(eps), opts);
  SmoothResult e_max =
      smooth_measure(SmoothMeasureKind::e_max, rho, BallSpec::eps(eps), opts);
  SmoothResult da_max = smooth_measure(SmoothMeasureKind::delta_arrow_max, rho,
                                       BallSpec::eps(eps), opts);
  SmoothResult d2_max = smooth_measure(SmoothMeasureKind::delta_2way_max, rho,
                                       BallSpec::eps(eps), opts);
  // -H^eps_min <= eps-E_max <= eps-Delta-> <= eps-Delta<-> within search slack.
  CHECK(-hmin.value <= e_max.value + 1e-4);
  CHECK(e_max.bracket_lower <= e_max.value + 1e-4);
  CHECK(e_max.value <= da_max.value + 1e-4);
  CHECK(da_max.value <= d2_max.value + 1e-4);
}

TEST_CASE("smooth duality on pure tripartite states") {
  Rng rng(91);
  DensityOperator psi = random_pure({2, 2, 2}, rng);
  DensityOperator ab = psi.marginal({0, 1});
  DensityOperator ac = psi.marginal({0, 2});
  SmoothOptions opts;
  opts.seed = 92;
  const double eps = 0.05;
  double hmax = smooth_cond_entropy(SmoothWhich::max_entropy, ab,
                                    BallSpec::eps(eps), opts)
                    .value;
  double hmin = smooth_cond_entropy(SmoothWhich::min_entropy, ac,
                                    BallSpec::eps(eps), opts)
                    .value;
  CHECK(hmax == Approx(-hmin).margin(2e-3));
}

TEST_CASE("smooth monotonicity checks") {
  Rng rng(93);
  SmoothOptions opts;
  opts.seed = 94;
  opts.samples = 4;

  MonotoneInstance inst;
  inst.rho = random_state({2, 2}, 2, rng);
  inst.epsilon = 0.05;

  inst.kind = MonotoneInstanceKind::identity_channel;
  CHECK(check_smooth_monotonicity(WhichSmoothEnt::e_max_smooth, inst, opts) ==
        Approx(0.0).margin(1e-12));

  // Local isometry embedding one qubit side into a qutrit.
  inst.kind = MonotoneInstanceKind::local_isometry;
  inst.iso_a = Mat::Identity(2, 2);
  Mat embed = Mat::Zero(3, 2);
  embed(0, 0) = 1.0;
  embed(1, 1) = 1.0;
  inst.iso_b = embed;
  CHECK(check_smooth_monotonicity(WhichSmoothEnt::e_fid_smooth, inst, opts) >=
        -2e-4);

  inst.kind = MonotoneInstanceKind::appended_ancilla_trace;
  inst.ancilla_dim = 2;
  CHECK(check_smooth_monotonicity(WhichSmoothEnt::e_max_smooth, inst, opts) >=
        -2e-4);
}
