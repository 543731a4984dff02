#include "qcorr/uncertainty_game.hpp"

#include <cmath>

namespace qcorr {

namespace {

double largest_singular(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace

double overlap_c(const Povm& x, const Povm& z) {
  if (x.dim() != z.dim()) throw DimMismatch("overlap_c: spaces differ");
  double c = 0.0;
  for (const Mat& zk : z.elements) {
    Mat rz = pinv_pow(zk, 0.5);
    for (const Mat& xj : x.elements) {
      Mat rx = pinv_pow(xj, 0.5);
      double s = largest_singular(rz * rx);
      c = std::max(c, s * s);
    }
  }
  return c;
}

double overlap_c(const Pvm& x, const Pvm& z) {
  Povm px{x.projectors}, pz{z.projectors};
  return overlap_c(px, pz);
}

namespace {

Povm to_povm(const Pvm& pvm) { return Povm{pvm.projectors}; }

// Embeds rho (dims [dS, dE1, dE2]) through a Naimark extension of the POVM,
// premeasures the extended system factor, and keeps the register together
// with one environment factor (keep_env in {1, 2}).
DensityOperator premeasure_keep(const DensityOperator& rho, const Povm& x,
                                int keep_env) {
  if (rho.dims.size() != 3)
    throw DimMismatch("premeasure_keep: need dims [dS, dE1, dE2]");
  NaimarkExtension ext = naimark_extend(x);
  const int de1 = rho.dims[1], de2 = rho.dims[2];
  Mat embed = kron(ext.embedding, Mat::Identity(de1 * de2, de1 * de2));
  Mat big = embed * rho.mat * embed.adjoint();
  const int ds_ext = ext.pvm.dim();

  Pvm pvm = ext.pvm;
  const int m = pvm.outcomes();
  PremeasurementIsometry v = build_isometry(Mat::Identity(m, m), pvm);
  Mat lift = kron(v.v, Mat::Identity(de1 * de2, de1 * de2));
  Mat out = lift * big * lift.adjoint();
  out = 0.5 * (out + out.adjoint());
  DensityOperator tilde{out, {m, ds_ext, de1, de2}, rho.trace_mode};
  return tilde.marginal({0, keep_env + 1});
}

// Premeasured state on M_X (x) (S_ext E_keep), used for the entanglement side.
DensityOperator premeasure_join(const DensityOperator& rho, const Povm& x,
                                int keep_env, Mat* projector) {
  if (rho.dims.size() != 3)
    throw DimMismatch("premeasure_join: need dims [dS, dE1, dE2]");
  NaimarkExtension ext = naimark_extend(x);
  const int de1 = rho.dims[1], de2 = rho.dims[2];
  Mat embed = kron(ext.embedding, Mat::Identity(de1 * de2, de1 * de2));
  Mat big = embed * rho.mat * embed.adjoint();
  const int ds_ext = ext.pvm.dim();
  DensityOperator embedded{0.5 * (big + big.adjoint()),
                           {ds_ext, de1, de2},
                           rho.trace_mode};
  // Trace out the dropped environment, then premeasure S_ext (x) E_keep with
  // the lifted PVM {X_j (x) I}.
  DensityOperator skeep = embedded.marginal({0, keep_env});
  const int de_keep = skeep.dims[1];
  Pvm lifted;
  for (const Mat& p : ext.pvm.projectors)
    lifted.projectors.push_back(kron(p, Mat::Identity(de_keep, de_keep)));
  const int m = lifted.outcomes();
  PremeasurementIsometry v =
      build_isometry(Mat::Identity(m, m), lifted);
  DensityOperator grouped = skeep.group_bipartite(1);
  grouped.dims = {ds_ext * de_keep};
  PremeasurementState pm = premeasure(grouped, v);
  if (projector) *projector = v.v * v.v.adjoint();
  return pm.state;
}

double shannon_of_outcomes(const DensityOperator& rho, const Pvm& pvm) {
  double h = 0.0;
  for (const Mat& p : pvm.projectors) {
    double prob = (p * rho.mat).trace().real();
    if (prob > 1e-15) h -= prob * std::log2(prob);
  }
  return h;
}

bool is_qubit_mub_triple(const std::vector<Povm>& povms) {
  if (povms.size() != 3) return false;
  for (const Povm& p : povms) {
    if (p.dim() != 2 || p.outcomes() != 2) return false;
    for (const Mat& e : p.elements)
      if ((e * e - e).norm() > 1e-9) return false;
  }
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = i + 1; j < 3; ++j)
      if (std::abs(overlap_c(povms[i], povms[j]) - 0.5) > 1e-9) return false;
  return true;
}

}  // namespace

EurCheck check_eur(EurRelation relation, const EurInstance& inst,
                   const SmoothOptions& opts) {
  EurCheck check;
  CondEntropyOptions eopts;
  eopts.seed = opts.seed;
  eopts.multistarts = 5;

  switch (relation) {
    case EurRelation::berta_eq64: {
      check.relation = "berta_eq64";
      check.tol = 1e-9;
      if (inst.rho.dims.size() != 2)
        throw DimMismatch("eq64: need a bipartite state");
      const Mat& w = inst.basis_w;
      if (w.cols() != inst.rho.dims[0])
        throw DimMismatch("eq64: basis does not match dim A");
      Mat z = fourier_basis(w);
      DensityOperator mw = premeasured_register_env(inst.rho, basis_pvm(w));
      DensityOperator mz = premeasured_register_env(inst.rho, basis_pvm(z));
      double hw = cond_entropy(DivergenceKind::vn(), mw, 1).value;
      double hz = cond_entropy(DivergenceKind::vn(), mz, 1).value;
      double hab = cond_entropy(DivergenceKind::vn(), inst.rho, 1).value;
      check.lhs = hw + hz;
      check.rhs = std::log2(double(inst.rho.dims[0])) + hab;
      break;
    }
    case EurRelation::tomren_eq56: {
      check.relation = "tomren_eq56";
      check.tol = 1e-4;
      if (inst.povms.size() != 2)
        throw HypothesisViolated("eq56: need POVMs X and Z");
      DensityOperator mx_e1 = premeasure_keep(inst.rho, inst.povms[0], 1);
      DensityOperator mz_e2 = premeasure_keep(inst.rho, inst.povms[1], 2);
      double hmin = cond_entropy(DivergenceKind::dmax(), mx_e1, 1, eopts).value;
      double hmax = cond_entropy(DivergenceKind::dfid(), mz_e2, 1, eopts).value;
      check.lhs = hmin + hmax;
      check.rhs = std::log2(1.0 / overlap_c(inst.povms[0], inst.povms[1]));
      break;
    }
    case EurRelation::tomren_smooth_eq58: {
      check.relation = "tomren_smooth_eq58";
      check.tol = 1e-3;
      if (inst.povms.size() != 2)
        throw HypothesisViolated("eq58: need POVMs X and Z");
      DensityOperator mx_e1 = premeasure_keep(inst.rho, inst.povms[0], 1);
      DensityOperator mz_e2 = premeasure_keep(inst.rho, inst.povms[1], 2);
      SmoothResult hmin = smooth_cond_entropy(
          SmoothWhich::min_entropy, mx_e1, BallSpec::eps(inst.epsilon), opts);
      SmoothResult hmax = smooth_cond_entropy(
          SmoothWhich::max_entropy, mz_e2, BallSpec::eps(inst.epsilon), opts);
      check.lhs = hmin.value + hmax.value;
      check.rhs = std::log2(1.0 / overlap_c(inst.povms[0], inst.povms[1]));
      break;
    }
    case EurRelation::sanchez_triple: {
      check.relation = "sanchez_triple";
      check.tol = 1e-9;
      if (inst.rho.dim() != 2)
        throw HypothesisViolated("sanchez_triple: qubit input required");
      if (!is_qubit_mub_triple(inst.povms))
        throw HypothesisViolated("sanchez_triple: PVMs are not a MUB triple");
      check.lhs = 0.0;
      for (const Povm& p : inst.povms)
        check.lhs += shannon_of_outcomes(inst.rho, Pvm{p.elements});
      check.rhs = 2.0;
      break;
    }
  }
  check.slack = check.lhs - check.rhs;
  check.pass = check.slack >= -check.tol;
  return check;
}

EurCheck ecr_view(EcrRelation relation, const DensityOperator& rho_se1e2,
                  const Povm& x, const Povm& z, double epsilon,
                  const SmoothOptions& opts) {
  if (rho_se1e2.dims.size() != 3)
    throw DimMismatch("ecr_view: need dims [dS, dE1, dE2]");
  if (!rho_se1e2.is_pure(1e-10)) throw NotPure("ecr_view: state not pure");

  CondEntropyOptions eopts;
  eopts.seed = opts.seed;
  eopts.multistarts = 5;

  EurCheck check;
  check.relation = relation == EcrRelation::eq57 ? "ecr_eq57" : "ecr_eq59";
  check.tol = relation == EcrRelation::eq57 ? 1e-4 : 1e-3;

  // E_fid(M_X | S E2): premeasure X, keep E2 alongside the system.
  Mat pi_x, pi_z;
  DensityOperator mx = premeasure_join(rho_se1e2, x, 2, &pi_x);
  DensityOperator mz = premeasure_join(rho_se1e2, z, 1, &pi_z);

  double e_fid, e_max;
  if (relation == EcrRelation::eq57 || epsilon == 0.0) {
    e_fid = -cond_entropy(DivergenceKind::dfid(), mx, 1, eopts).value;
    e_max = -cond_entropy(DivergenceKind::dmax(), mz, 1, eopts).value;
  } else {
    SmoothResult hx = smooth_cond_entropy(SmoothWhich::max_entropy, mx,
                                          BallSpec::restricted(epsilon, pi_x),
                                          opts);
    SmoothResult hz = smooth_cond_entropy(SmoothWhich::min_entropy, mz,
                                          BallSpec::restricted(epsilon, pi_z),
                                          opts);
    e_fid = -hx.value;
    e_max = -hz.value;
  }
  check.lhs = e_fid + e_max;
  check.rhs = std::log2(1.0 / overlap_c(x, z));
  check.slack = check.lhs - check.rhs;
  check.pass = check.slack >= -check.tol;
  return check;
}

GameRecord play_game(const DensityOperator& rho, GameLayout layout,
                     const std::vector<Pvm>& strategy, int rounds_per_pvm) {
  GameRecord rec;
  rec.layout = layout;
  rec.rounds_per_pvm = rounds_per_pvm;

  for (const Pvm& pvm : strategy) pvm.validate();
  switch (layout) {
    case GameLayout::pure_system: {
      if (rho.dims.size() != 1)
        throw HypothesisViolated("play_game: pure_system wants dims [dS]");
      if (!rho.is_pure(1e-10))
        throw HypothesisViolated("play_game: system state must be pure");
      for (const Pvm& pvm : strategy)
        rec.per_round_yield.push_back(shannon_of_outcomes(rho, pvm));
      rec.bound = 2.0 * rounds_per_pvm;
      rec.bound_kind = "pure_2";
      rec.bound_applicable = true;
      rec.hypothesis_verified = true;
      break;
    }
    case GameLayout::with_memory_split: {
      if (rho.dims.size() != 3)
        throw HypothesisViolated("play_game: memory split wants [dS,dE1,dE2]");
      // Alice's access to E1 moves it into her register side; the per-round
      // yield H(X_i|E2) conditions on what Eve keeps.
      DensityOperator se2 = rho.marginal({0, 2});
      StateClassVerdict sep = is_separable_small(se2, kClassTol);
      rec.hypothesis_verified =
          sep.cls == StateClass::Sep && sep.member && !sep.inconclusive;
      for (const Pvm& pvm : strategy)
        rec.per_round_yield.push_back(
            uncertainty_given_memory(se2, pvm, DivergenceKind::vn()));
      rec.bound = 1.5 * rounds_per_pvm;
      rec.bound_kind = "memory_3half";
      rec.bound_applicable = rec.hypothesis_verified;
      rec.notes = rec.hypothesis_verified
                      ? "rho_SE2 PPT-certified separable"
                      : "unverified-hypothesis: rho_SE2 separability unknown";
      break;
    }
    case GameLayout::adversarial_env: {
      if (rho.dims.size() != 2)
        throw HypothesisViolated("play_game: adversarial env wants [dS,dE]");
      for (const Pvm& pvm : strategy)
        rec.per_round_yield.push_back(
            uncertainty_given_memory(rho, pvm, DivergenceKind::vn()));
      rec.bound = 0.0;
      rec.bound_kind = "none";
      rec.bound_applicable = false;
      rec.notes = "no access to the environment: the bound hypothesis fails";
      break;
    }
  }
  double sum = 0.0;
  for (double y : rec.per_round_yield) sum += y;
  rec.total_yield = rounds_per_pvm * sum;
  return rec;
}

double check_additivity(const std::vector<DensityOperator>& states) {
  if (states.empty()) throw DimMismatch("check_additivity: no states");
  long total = 1;
  for (const DensityOperator& s : states) {
    if (s.dims.size() != 2)
      throw DimMismatch("check_additivity: states must be bipartite");
    total *= s.dim();
    if (total > 4096) throw DimTooLarge("check_additivity: product too large");
    StateClassVerdict mq = is_mq(s, kClassTol);
    if (!mq.member) throw NotMQ("check_additivity: input not MQ");
  }

  double sum = 0.0;
  for (const DensityOperator& s : states)
    sum += cond_entropy(DivergenceKind::vn(), s, 1).value;

  // Tensor everything, then group the A factors ahead of the B factors.
  Mat big = states[0].mat;
  std::vector<int> dims = states[0].dims;
  for (size_t i = 1; i < states.size(); ++i) {
    big = kron(big, states[i].mat);
    dims.push_back(states[i].dims[0]);
    dims.push_back(states[i].dims[1]);
  }
  const int n = static_cast<int>(states.size());
  std::vector<int> perm;
  for (int i = 0; i < n; ++i) perm.push_back(2 * i);      // A_i
  for (int i = 0; i < n; ++i) perm.push_back(2 * i + 1);  // B_i
  Mat grouped = permute_subsystems(big, dims, perm);
  int da = 1, db = 1;
  for (int i = 0; i < n; ++i) {
    da *= states[i].dims[0];
    db *= states[i].dims[1];
  }
  DensityOperator joint{grouped, {da, db}, states[0].trace_mode};
  double h_joint = cond_entropy(DivergenceKind::vn(), joint, 1).value;
  return std::abs(h_joint - sum);
}

}  // namespace qcorr
