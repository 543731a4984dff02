#include "qcorr/smooth.hpp"

#include <cmath>

namespace qcorr {

double purified_distance(const Mat& rho, const Mat& sigma) {
  double tr = rho.trace().real();
  double ts = sigma.trace().real();
  if (tr > 1.0 + 1e-8 || ts > 1.0 + 1e-8)
    throw DomainError("purified_distance: inputs must be subnormalized");
  double f = fidelity(rho, sigma);
  double fbar =
      f + std::sqrt(std::max(1.0 - tr, 0.0) * std::max(1.0 - ts, 0.0));
  fbar = std::min(fbar, 1.0);
  return std::sqrt(std::max(1.0 - fbar * fbar, 0.0));
}

bool ball_membership(const DensityOperator& center,
                     const DensityOperator& candidate, const BallSpec& spec) {
  if (purified_distance(center.mat, candidate.mat) > spec.epsilon + 1e-9)
    return false;
  using R = BallSpec::Restriction;
  if (spec.restriction == R::support_projector ||
      spec.restriction == R::pure_and_projector) {
    const Mat& pi = spec.projector;
    if ((pi * candidate.mat * pi - candidate.mat).norm() > 1e-10) return false;
  }
  if (spec.restriction == R::pure_only ||
      spec.restriction == R::pure_and_projector) {
    if (!candidate.is_pure(kSupportCutoff)) return false;
  }
  return true;
}

namespace {

double pure_distance(const Vec& u, const Vec& v) {
  double nu = u.squaredNorm(), nv = v.squaredNorm();
  double f = std::abs((u.adjoint() * v)(0, 0));
  double fbar =
      f + std::sqrt(std::max(1.0 - nu, 0.0) * std::max(1.0 - nv, 0.0));
  fbar = std::min(fbar, 1.0);
  return std::sqrt(std::max(1.0 - fbar * fbar, 0.0));
}

// Purified distance between operators expressed in a common r x r frame.
double block_distance(const Mat& a, const Mat& b) {
  double f = fidelity(a, b);
  double fbar = f + std::sqrt(std::max(1.0 - a.trace().real(), 0.0) *
                              std::max(1.0 - b.trace().real(), 0.0));
  fbar = std::min(fbar, 1.0);
  return std::sqrt(std::max(1.0 - fbar * fbar, 0.0));
}

// Keeps candidates strictly inside the ball: the fidelity evaluations behind
// the membership predicate carry ~1e-7 noise near rank boundaries.
double target_eps(double eps) { return std::max(eps - 1e-6 * eps - 1e-9, 0.0); }

// Pulls g toward the center block until it enters the ball.
Mat feasible_block(Mat g, const Mat& g_center, double eps) {
  eps = target_eps(eps);
  double tr = g.trace().real();
  if (tr > 1.0) g /= tr;
  if (block_distance(g_center, g) <= eps) return g;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    Mat gm = (1.0 - mid) * g + mid * g_center;
    if (block_distance(g_center, gm) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  return (1.0 - hi) * g + hi * g_center;
}

Vec feasible_amplitude(Vec v, const Vec& u, double eps) {
  eps = target_eps(eps);
  double n = v.norm();
  if (n > 1.0) v /= n;
  if (pure_distance(u, v) <= eps) return v;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    Vec vm = (1.0 - mid) * v + mid * u;
    if (vm.norm() > 1.0) vm /= vm.norm();
    if (pure_distance(u, vm) <= eps)
      hi = mid;
    else
      lo = mid;
  }
  Vec out = (1.0 - hi) * v + hi * u;
  if (out.norm() > 1.0) out /= out.norm();
  return out;
}

Vec amplitude_from_params(const RVec& theta, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = Cplx(theta(2 * i), theta(2 * i + 1));
  return v;
}

RVec params_from_amplitude(const Vec& v) {
  RVec theta(2 * v.size());
  for (int i = 0; i < v.size(); ++i) {
    theta(2 * i) = v(i).real();
    theta(2 * i + 1) = v(i).imag();
  }
  return theta;
}

// Purification amplitude with a full-dimension purifier (the Lemma-9 regime,
// purifier at least as large as the system).
Vec center_amplitude(const DensityOperator& rho) {
  HermitianEig eig = herm_eig(rho.mat);
  const int d = rho.dim();
  Vec u = Vec::Zero(d * d);
  for (int i = 0; i < d; ++i) {
    double lam = std::max(eig.eigenvalues(i), 0.0);
    for (int r = 0; r < d; ++r)
      u(r * d + i) = std::sqrt(lam) * eig.eigenvectors(r, i);
  }
  return u;
}

// Amplitude columns of a PSD block: g = amp amp^dag.
Mat amplitude_of_block(const Mat& g) {
  HermitianEig eig = herm_eig(g);
  const int r = static_cast<int>(g.rows());
  Mat amp = Mat::Zero(r, r);
  for (int i = 0; i < r; ++i) {
    double lam = std::max(eig.eigenvalues(i), 0.0);
    amp.col(i) = std::sqrt(lam) * eig.eigenvectors.col(i);
  }
  return amp;
}

// A (x) C marginal of the pure state |amp> on A (x) B (x) C, where amp is the
// (da*db) x k amplitude matrix with the purifier as column index.
Mat ac_marginal(const Mat& amp, int da, int db) {
  const int k = static_cast<int>(amp.cols());
  Mat out = Mat::Zero(da * k, da * k);
  for (int a = 0; a < da; ++a)
    for (int ap = 0; ap < da; ++ap)
      for (int c = 0; c < k; ++c)
        for (int cp = 0; cp < k; ++cp) {
          Cplx s = 0.0;
          for (int b = 0; b < db; ++b)
            s += amp(a * db + b, c) * std::conj(amp(ap * db + b, cp));
          out(a * k + c, ap * k + cp) = s;
        }
  return out;
}

// Parametrized feasible ball member, carrying a purification amplitude so the
// dual (single-layer) max-entropy route can trace out B.
struct BallParam {
  bool restricted = false;
  double eps = 0.0;
  std::vector<int> dims;
  // restricted
  Mat psi;       // d x r isometry onto range(projector)
  Mat g_center;  // psi^dag rho psi
  // full
  Vec u;
  int d = 0;

  struct Candidate {
    DensityOperator state;
    Mat amp;  // d x k with state = amp amp^dag
  };

  int param_count() const {
    return restricted ? cholesky_param_count(static_cast<int>(psi.cols()))
                      : 2 * d * d;
  }
  int purifier_dim() const {
    return restricted ? static_cast<int>(psi.cols()) : d;
  }

  RVec center_params() const {
    return restricted ? params_from_psd(g_center) : params_from_amplitude(u);
  }

  RVec params_for(const Mat& state) const {
    if (restricted) return params_from_psd(psi.adjoint() * state * psi);
    DensityOperator tmp{state, dims, TraceMode::subnormalized};
    return params_from_amplitude(center_amplitude(tmp));
  }

  Candidate candidate(const RVec& theta) const {
    Candidate cand;
    if (restricted) {
      const int r = static_cast<int>(psi.cols());
      Mat l = cholesky_factor_from_params(theta, r);
      Mat g = feasible_block(l * l.adjoint(), g_center, eps);
      cand.amp = psi * amplitude_of_block(g);
    } else {
      Vec v = feasible_amplitude(amplitude_from_params(theta, d * d), u, eps);
      cand.amp = Mat(d, d);
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) cand.amp(i, k) = v(i * d + k);
    }
    Mat sigma = cand.amp * cand.amp.adjoint();
    cand.state = DensityOperator{0.5 * (sigma + sigma.adjoint()), dims,
                                 TraceMode::subnormalized};
    return cand;
  }
};

BallParam make_ball_param(const DensityOperator& rho, const BallSpec& spec) {
  BallParam bp;
  bp.eps = spec.epsilon;
  bp.dims = rho.dims;
  using R = BallSpec::Restriction;
  if (spec.restriction == R::support_projector ||
      spec.restriction == R::pure_and_projector) {
    bp.restricted = true;
    HermitianEig eig = herm_eig(spec.projector);
    int r = 0;
    for (int i = 0; i < eig.eigenvalues.size(); ++i)
      if (eig.eigenvalues(i) > 0.5) ++r;
    bp.psi = eig.eigenvectors.leftCols(r);
    bp.g_center = bp.psi.adjoint() * rho.mat * bp.psi;
  } else {
    bp.d = rho.dim();
    bp.u = center_amplitude(rho);
  }
  return bp;
}

// Joint single-layer search shared by both entropy directions: for min, the
// objective is D_max(sigma || I (x) sigma_B); for max, duality turns
// H_max(A|B) into a minimization of D_max over sigma_C on the A (x) C
// marginal of the candidate's purification, so the same joint scheme applies.
struct JointSearchResult {
  double fval = 0.0;
  RVec ball_params;
  OptimDiag diag;
};

JointSearchResult joint_ball_entropy_search(
    SmoothWhich which, const BallParam& bp, const DensityOperator& rho,
    const Mat& center_sigma_b, const SmoothOptions& opts) {
  const int nb = bp.param_count();
  const int da = rho.dims[0], db = rho.dims[1];
  const int k = bp.purifier_dim();
  const int inner_dim = which == SmoothWhich::min_entropy ? db : k;
  const int ns = cholesky_param_count(inner_dim);
  const Mat id_a = Mat::Identity(da, da);
  const DivergenceKind dmax = DivergenceKind::dmax();

  auto obj = [&](const RVec& theta) {
    BallParam::Candidate cand = bp.candidate(theta.head(nb));
    if (cand.state.trace() <= 1e-14) return kInfObjective;
    Mat l = cholesky_factor_from_params(theta.tail(ns), inner_dim);
    Mat s = l * l.adjoint();
    double tr = s.trace().real();
    if (tr <= 1e-14) return kInfObjective;
    s /= tr;
    if (which == SmoothWhich::min_entropy)
      return div(dmax, cand.state.mat, kron(id_a, s)).as_objective();
    Mat rho_ac = ac_marginal(cand.amp, da, db);
    return div(dmax, rho_ac, kron(id_a, s)).as_objective();
  };

  // Inner warm start: the center's own optimizer (for the dual route, the
  // H_min optimizer of the center purification's A (x) C marginal).
  Mat inner_warm;
  if (which == SmoothWhich::min_entropy) {
    inner_warm = center_sigma_b;
  } else {
    BallParam::Candidate c0 = bp.candidate(bp.center_params());
    DensityOperator ac{ac_marginal(c0.amp, da, db),
                       {da, k},
                       TraceMode::subnormalized};
    CondEntropyOptions dual_opts;
    dual_opts.seed = opts.seed;
    dual_opts.multistarts = 4;
    inner_warm = cond_entropy(dmax, ac, 1, dual_opts).optimal_sigma_b;
  }

  std::vector<RVec> warm;
  auto add_warm = [&](const RVec& ball_part) {
    RVec x(nb + ns);
    x.head(nb) = ball_part;
    x.tail(ns) = params_from_psd(inner_warm);
    warm.push_back(x);
  };
  add_warm(bp.center_params());
  if (opts.init_state.size() > 0) add_warm(bp.params_for(opts.init_state));

  MultistartOptions mopts;
  mopts.starts = std::max(opts.outer_starts, static_cast<int>(warm.size()));
  mopts.seed = opts.seed;
  mopts.start_spread = 0.5 * bp.eps + 0.05;
  mopts.nm.diameter_tol = opts.simplex_tol;
  mopts.nm.max_iters =
      opts.outer_iters > 0 ? opts.outer_iters : 130 * (nb + ns);
  MultistartResult best = multistart_minimize(obj, warm, nb + ns, mopts);

  JointSearchResult res;
  res.fval = best.fval;
  res.ball_params = best.x.head(nb);
  res.diag.iterations = best.total_iters;
  res.diag.restarts = best.restarts;
  res.diag.converged_starts = best.converged_starts;
  return res;
}

DivergenceKind entropy_kind(SmoothWhich which) {
  return which == SmoothWhich::min_entropy ? DivergenceKind::dmax()
                                           : DivergenceKind::dfid();
}

}  // namespace

SmoothResult smooth_cond_entropy(SmoothWhich which, const DensityOperator& rho,
                                 const BallSpec& spec,
                                 const SmoothOptions& opts) {
  if (rho.dims.size() != 2)
    throw DimMismatch("smooth_cond_entropy: state not bipartite");
  if (spec.epsilon >= 1.0) throw RangeError("smooth_cond_entropy: eps >= 1");

  const DivergenceKind kind = entropy_kind(which);
  CondEntropyOptions inner;
  inner.seed = opts.seed;
  inner.multistarts = 4;
  CondEntropyResult center = cond_entropy(kind, rho, 1, inner);

  SmoothResult res;
  res.ball_used = spec;
  res.value = center.value;
  res.optimal_state = rho;
  if (spec.epsilon == 0.0) {
    res.certified = SmoothResult::Certified::exact_eps0;
    return res;
  }

  BallParam bp = make_ball_param(rho, spec);
  JointSearchResult search = joint_ball_entropy_search(
      which, bp, rho, center.optimal_sigma_b, opts);
  res.diag = search.diag;

  DensityOperator best_state = bp.candidate(search.ball_params).state;
  if (which == SmoothWhich::min_entropy) {
    // Objective value is D_max = -H_min of the candidate.
    if (-search.fval > res.value) {
      res.value = -search.fval;
      res.optimal_state = best_state;
    }
  } else {
    // Re-evaluate H_max at the found state through the primal route so the
    // reported value matches the unsmoothed functional there.
    CondEntropyOptions refine = inner;
    refine.extra_starts = {center.optimal_sigma_b};
    CondEntropyResult primal = cond_entropy(kind, best_state, 1, refine);
    if (primal.value < res.value) {
      res.value = primal.value;
      res.optimal_state = best_state;
    }
  }
  return res;
}

namespace {

DivergenceKind measure_kind(SmoothMeasureKind which) {
  switch (which) {
    case SmoothMeasureKind::e_max:
    case SmoothMeasureKind::delta_arrow_max:
    case SmoothMeasureKind::delta_2way_max:
      return DivergenceKind::dmax();
    default:
      return DivergenceKind::dfid();
  }
}

bool is_fid_family(SmoothMeasureKind which) {
  return which == SmoothMeasureKind::e_fid ||
         which == SmoothMeasureKind::delta_arrow_fid ||
         which == SmoothMeasureKind::delta_2way_fid;
}

// Unsmoothed inner value at one candidate, upper-bound flavored.
double inner_measure(SmoothMeasureKind which, const DensityOperator& sigma,
                     const SearchOptions& sopts, double* bracket_lower) {
  DivergenceKind kind = measure_kind(which);
  switch (which) {
    case SmoothMeasureKind::delta_arrow_max:
    case SmoothMeasureKind::delta_arrow_fid:
      return delta_one_way(kind, sigma, Side::A, sopts).upper;
    case SmoothMeasureKind::delta_2way_max:
    case SmoothMeasureKind::delta_2way_fid:
      return delta_two_way(kind, sigma, sopts).upper;
    case SmoothMeasureKind::e_max:
    case SmoothMeasureKind::e_fid: {
      CondEntropyOptions eopts;
      eopts.seed = sopts.seed;
      eopts.multistarts = 3;
      if (bracket_lower)
        *bracket_lower = -cond_entropy(kind, sigma, 1, eopts).value;
      return delta_one_way(kind, sigma, Side::A, sopts).upper;
    }
  }
  return 0.0;
}

}  // namespace

SmoothResult smooth_measure(SmoothMeasureKind which, const DensityOperator& rho,
                            const BallSpec& spec, const SmoothOptions& opts) {
  if (spec.epsilon >= 1.0) throw RangeError("smooth_measure: eps >= 1");
  const bool fid = is_fid_family(which);

  SearchOptions sopts;
  sopts.seed = opts.seed;
  sopts.multistarts = 3;
  sopts.simplex_tol = 1e-7;
  StateClassVerdict mq = is_mq(rho, kClassTol);
  if (mq.member && mq.witness_basis) {
    sopts.warm_bases_a.push_back(*mq.witness_basis);
    sopts.warm_bases_b.push_back(
        herm_eig(partial_trace(rho.mat, rho.dims, {1})).eigenvectors);
  }

  SmoothResult res;
  res.ball_used = spec;
  double center_lower = 0.0;
  double center_val = inner_measure(which, rho, sopts, &center_lower);
  res.value = center_val;
  res.bracket_lower = center_lower;
  res.has_bracket =
      which == SmoothMeasureKind::e_max || which == SmoothMeasureKind::e_fid;
  res.optimal_state = rho;
  if (spec.epsilon == 0.0) {
    res.certified = SmoothResult::Certified::exact_eps0;
    return res;
  }

  // Candidate set: center, warm state, seeded ball samples, and the smooth
  // conditional-entropy optimizer's state (the collapse-side candidate).
  BallSpec ball = spec;
  if (mq.member && spec.restriction == BallSpec::Restriction::full) {
    // For MQ centers the restricted ball suffices (the premeasurement-support
    // regime) and keeps the candidates inside MQ.
    const MqWitness& w = *mq.mq_witness;
    Mat pi = Mat::Zero(rho.dim(), rho.dim());
    for (size_t j = 0; j < w.projectors.size(); ++j) {
      Mat wj = w.basis_w.col(static_cast<int>(j)) *
               w.basis_w.col(static_cast<int>(j)).adjoint();
      pi += kron(wj, w.projectors[j]);
    }
    ball = BallSpec::restricted(spec.epsilon, pi);
  }
  BallParam bp = make_ball_param(rho, ball);

  std::vector<DensityOperator> candidates;
  if (opts.init_state.size() > 0)
    candidates.push_back(bp.candidate(bp.params_for(opts.init_state)).state);
  Rng rng(opts.seed ^ 0x5a11ba11ULL);
  RVec c0 = bp.center_params();
  for (int s = 0; s < opts.samples; ++s) {
    RVec theta =
        c0 + random_params(static_cast<int>(c0.size()),
                           0.4 * spec.epsilon + 0.02, rng);
    candidates.push_back(bp.candidate(theta).state);
  }
  {
    SmoothOptions h_opts = opts;
    h_opts.outer_starts = 2;
    SmoothResult h = smooth_cond_entropy(
        fid ? SmoothWhich::max_entropy : SmoothWhich::min_entropy, rho, ball,
        h_opts);
    candidates.push_back(h.optimal_state);
  }

  for (const DensityOperator& sigma : candidates) {
    if (sigma.trace() <= 1e-12) continue;
    double lower = 0.0;
    double val = inner_measure(which, sigma, sopts, &lower);
    bool better = fid ? (val > res.value) : (val < res.value);
    if (better) {
      res.value = val;
      res.optimal_state = sigma;
    }
    if (res.has_bracket) {
      if (fid)
        res.bracket_lower = std::max(res.bracket_lower, lower);
      else
        res.bracket_lower = std::min(res.bracket_lower, lower);
    }
  }
  res.diag.restarts = static_cast<int>(candidates.size()) + 1;
  return res;
}

CollapseCertificate certify_smooth_collapse(const PremeasurementState& pm,
                                            double epsilon, double tol,
                                            SmoothFamily family,
                                            const SmoothOptions& opts) {
  const DensityOperator& rho = pm.state;
  const Mat v = pm.isometry();
  const int ds = pm.pvm.dim();
  const int m = static_cast<int>(pm.basis_w.cols());
  const Mat id_m = Mat::Identity(m, m);
  const DivergenceKind kind = family == SmoothFamily::dmax_family
                                  ? DivergenceKind::dmax()
                                  : DivergenceKind::dfid();

  CollapseCertificate cert;
  cert.kind = kind;
  cert.tol = tol;
  cert.state_id = "premeasurement";

  // The restricted ball around V sigma V^dag is V tau V^dag with tau ranging
  // over the S-space ball around the generator state.
  BallSpec ball = BallSpec::restricted(epsilon, v * v.adjoint());
  auto lift_dims = rho.dims;
  auto lift = [&](const Mat& tau) {
    Mat s = v * tau * v.adjoint();
    return DensityOperator{0.5 * (s + s.adjoint()), lift_dims,
                           TraceMode::subnormalized};
  };

  CondEntropyOptions inner;
  inner.seed = opts.seed;
  inner.multistarts = epsilon == 0.0 ? 6 : 3;

  // Pick the ball member: the center at eps = 0, otherwise the joint search
  // optimum (compared against the center).
  DensityOperator opt_state = rho;
  if (epsilon > 0.0) {
    BallParam bp = make_ball_param(rho, ball);
    CondEntropyResult center = cond_entropy(kind, rho, 1, inner);
    SmoothWhich which = family == SmoothFamily::dmax_family
                            ? SmoothWhich::min_entropy
                            : SmoothWhich::max_entropy;
    JointSearchResult search = joint_ball_entropy_search(
        which, bp, rho, center.optimal_sigma_b, opts);
    DensityOperator found = bp.candidate(search.ball_params).state;
    // Smaller -H_min / smaller H_max wins (the smoothing direction).
    CondEntropyOptions probe = inner;
    probe.extra_starts = {center.optimal_sigma_b};
    CondEntropyResult at_found = cond_entropy(kind, found, 1, probe);
    bool improved = family == SmoothFamily::dmax_family
                        ? (-at_found.value < -center.value)
                        : (-at_found.value > -center.value);
    if (improved) opt_state = found;
  }

  // Primal evaluation at the chosen state, with the PVM-blocking twirl (every
  // ball member shares the generator PVM, so pinching sigma_B never hurts and
  // aligns the lower side with the projected candidate).
  CondEntropyResult ce = cond_entropy(kind, opt_state, 1, inner);
  Mat best_sb = ce.optimal_sigma_b;
  double lower = -ce.value;
  {
    Mat blocked = Mat::Zero(ds, ds);
    for (const Mat& x : pm.pvm.projectors) blocked += x * best_sb * x;
    double tr = blocked.trace().real();
    if (tr > 1e-14) {
      blocked /= tr;
      DivValue d = div(kind, opt_state.mat, kron(id_m, blocked));
      if (!d.infinite && d.bits < lower) {
        lower = d.bits;
        best_sb = blocked;
      }
    }
  }

  // Projected CC candidate at the ball optimum.
  auto cc_candidate = [&](const Mat& sb) {
    Mat cand = Mat::Zero(rho.dim(), rho.dim());
    for (size_t j = 0; j < pm.pvm.projectors.size(); ++j) {
      Mat wj = pm.basis_w.col(static_cast<int>(j)) *
               pm.basis_w.col(static_cast<int>(j)).adjoint();
      cand += kron(wj, pm.pvm.projectors[j] * sb * pm.pvm.projectors[j]);
    }
    return cand;
  };
  DivValue up = div(kind, opt_state.mat, cc_candidate(best_sb));
  if (up.infinite) {
    Mat fixed = (1.0 - 1e-9) * best_sb + (1e-9 / ds) * Mat::Identity(ds, ds);
    up = div(kind, opt_state.mat, cc_candidate(fixed));
  }
  cert.lower = lower;
  cert.upper = up.infinite ? kInfObjective : up.bits;
  cert.gap = cert.upper - cert.lower;
  cert.collapsed = std::abs(cert.gap) <= tol;
  cert.collapsed_measures = {
      "-H^eps_" + std::string(family == SmoothFamily::dmax_family ? "min"
                                                                  : "max"),
      "eps_E_" + kind.name(), "eps_Delta_arrow_Mx|S", "eps_Delta_arrow_S|Mx",
      "eps_Delta_2way"};
  return cert;
}

double check_smooth_monotonicity(WhichSmoothEnt which,
                                 const MonotoneInstance& inst,
                                 const SmoothOptions& opts) {
  SmoothMeasureKind kind = which == WhichSmoothEnt::e_max_smooth
                               ? SmoothMeasureKind::e_max
                               : SmoothMeasureKind::e_fid;
  auto proxy = [&](const DensityOperator& rho) {
    return smooth_measure(kind, rho, BallSpec::eps(inst.epsilon), opts).value;
  };

  switch (inst.kind) {
    case MonotoneInstanceKind::identity_channel: {
      double a = proxy(inst.rho);
      double b = proxy(inst.rho);
      return -std::abs(a - b);
    }
    case MonotoneInstanceKind::local_isometry: {
      Mat big = kron(inst.iso_a, inst.iso_b);
      Mat moved = big * inst.rho.mat * big.adjoint();
      DensityOperator rho2{0.5 * (moved + moved.adjoint()),
                           {static_cast<int>(inst.iso_a.rows()),
                            static_cast<int>(inst.iso_b.rows())},
                           inst.rho.trace_mode};
      return -std::abs(proxy(inst.rho) - proxy(rho2));
    }
    case MonotoneInstanceKind::appended_ancilla_trace: {
      const int k = inst.ancilla_dim;
      Mat anc = Mat::Zero(k, k);
      anc(0, 0) = 1.0;
      Mat ext = kron(inst.rho.mat, anc);
      DensityOperator rho_ext{
          ext, {inst.rho.dims[0], inst.rho.dims[1] * k}, inst.rho.trace_mode};
      return proxy(rho_ext) - proxy(inst.rho);
    }
  }
  return 0.0;
}

}  // namespace qcorr
