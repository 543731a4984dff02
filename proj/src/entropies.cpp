#include "qcorr/entropies.hpp"

#include <cmath>

namespace qcorr {

namespace {

// rho with the conditioned factor second: dims [dA, dB], conditioning on B.
DensityOperator normal_order(const DensityOperator& rho, int conditioned_on) {
  if (rho.dims.size() != 2) throw DimMismatch("cond_entropy: not bipartite");
  if (conditioned_on == 1) return rho;
  DensityOperator out = rho;
  out.mat = permute_subsystems(rho.mat, rho.dims, {1, 0});
  out.dims = {rho.dims[1], rho.dims[0]};
  return out;
}

}  // namespace

CondEntropyResult cond_entropy(const DivergenceKind& kind,
                               const DensityOperator& rho, int conditioned_on,
                               const CondEntropyOptions& opts) {
  DensityOperator ab = normal_order(rho, conditioned_on);
  const int da = ab.dims[0], db = ab.dims[1];
  Mat rho_b = partial_trace(ab.mat, ab.dims, {1});

  if (kind.tag == DivergenceKind::Tag::von_neumann && !opts.force_search) {
    CondEntropyResult res;
    double tr_b = rho_b.trace().real();
    Mat sigma = rho_b / tr_b;
    DivValue d = div(kind, ab.mat, kron(Mat::Identity(da, da), sigma));
    res.value = d.infinite ? -kInfObjective : -d.bits;
    res.optimal_sigma_b = sigma;
    res.method = CondEntropyResult::Method::closed_form;
    return res;
  }

  const int n = cholesky_param_count(db);
  const Mat id_a = Mat::Identity(da, da);
  auto objective = [&](const RVec& theta) {
    Mat l = cholesky_factor_from_params(theta, db);
    Mat sigma = l * l.adjoint();
    double tr = sigma.trace().real();
    if (tr <= 1e-14) return kInfObjective;
    sigma /= tr;
    return div(kind, ab.mat, kron(id_a, sigma)).as_objective();
  };

  std::vector<RVec> warm;
  for (const Mat& s : opts.extra_starts)
    warm.push_back(params_from_psd(s / s.trace().real()));
  warm.push_back(params_from_psd(rho_b / rho_b.trace().real()));
  if (!opts.lean) warm.push_back(params_from_psd(Mat::Identity(db, db) / db));

  MultistartOptions mopts;
  mopts.starts = opts.lean ? static_cast<int>(warm.size())
                           : std::max(opts.multistarts,
                                      static_cast<int>(warm.size()));
  mopts.polish = !opts.lean;
  mopts.seed = opts.seed;
  mopts.nm.diameter_tol = opts.simplex_tol;
  mopts.nm.max_iters = opts.max_iters > 0 ? opts.max_iters : 250 * n;
  MultistartResult best = multistart_minimize(objective, warm, n, mopts);

  CondEntropyResult res;
  Mat l = cholesky_factor_from_params(best.x, db);
  Mat sigma = l * l.adjoint();
  sigma /= sigma.trace().real();
  res.value = -best.fval;
  res.optimal_sigma_b = sigma;
  res.method = CondEntropyResult::Method::parametrized_search;
  res.diag.iterations = best.total_iters;
  res.diag.restarts = best.restarts;
  res.diag.converged_starts = best.converged_starts;
  res.diag.best_start = best.best_start;
  res.diag.converged = best.converged_starts > 0;
  return res;
}

double dual_entropy_check(DualPair pair, const DensityOperator& rho_abc,
                          const CondEntropyOptions& opts) {
  if (rho_abc.dims.size() != 3)
    throw DimMismatch("dual_entropy_check: need three factors");
  if (!rho_abc.is_pure(1e-10)) throw NotPure("dual_entropy_check: state mixed");

  DensityOperator ab = rho_abc.marginal({0, 1});
  DensityOperator ac = rho_abc.marginal({0, 2});
  double lhs, rhs;
  if (pair == DualPair::vn_vn) {
    lhs = cond_entropy(DivergenceKind::vn(), ab, 1).value;
    rhs = cond_entropy(DivergenceKind::vn(), ac, 1).value;
  } else {
    lhs = cond_entropy(DivergenceKind::dmax(), ab, 1, opts).value;
    rhs = cond_entropy(DivergenceKind::dfid(), ac, 1, opts).value;
  }
  return std::abs(lhs + rhs);
}

DensityOperator premeasured_register_env(const DensityOperator& rho_se,
                                         const Pvm& x) {
  if (rho_se.dims.size() != 2)
    throw DimMismatch("premeasured_register_env: need dims [dS, dE]");
  const int ds = rho_se.dims[0], de = rho_se.dims[1];
  if (x.dim() != ds) throw DimMismatch("premeasured_register_env: PVM dim");
  const int m = x.outcomes();
  Mat w = Mat::Identity(m, m);
  PremeasurementIsometry v = build_isometry(w, x);
  Mat big = kron(v.v, Mat::Identity(de, de));
  Mat out = big * rho_se.mat * big.adjoint();
  out = 0.5 * (out + out.adjoint());
  DensityOperator tilde{out, {m, ds, de}, rho_se.trace_mode};
  return tilde.marginal({0, 2});
}

double uncertainty_given_memory(const DensityOperator& rho_se, const Pvm& x,
                                const DivergenceKind& kind,
                                const CondEntropyOptions& opts) {
  DensityOperator me = premeasured_register_env(rho_se, x);
  return cond_entropy(kind, me, 1, opts).value;
}

}  // namespace qcorr
