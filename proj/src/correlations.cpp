#include "qcorr/correlations.hpp"

#include <cmath>
#include <numbers>

namespace qcorr {

double mutual_information(const DensityOperator& rho) {
  if (rho.dims.size() != 2)
    throw DimMismatch("mutual_information: state not bipartite");
  double ha = entropy_bits(partial_trace(rho.mat, rho.dims, {0}));
  double hb = entropy_bits(partial_trace(rho.mat, rho.dims, {1}));
  return ha + hb - entropy_bits(rho.mat);
}

Mat pinch_side(const Mat& m, const std::vector<int>& dims, int sys,
               const Mat& basis) {
  const int other = 1 - sys;
  const Mat id = Mat::Identity(dims[other], dims[other]);
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (int j = 0; j < basis.cols(); ++j) {
    Mat pj = basis.col(j) * basis.col(j).adjoint();
    Mat big = sys == 0 ? kron(pj, id) : kron(id, pj);
    out += big * m * big;
  }
  return out;
}

namespace {

struct StartList {
  std::vector<Mat> bases_a;
  std::vector<Mat> bases_b;  // empty for one-sided searches
};

// Deterministic list of base unitaries: caller-provided warm bases first,
// then marginal eigenbases and the identity, then seeded Haar unitaries.
std::vector<Mat> make_base_unitaries(const DensityOperator& rho, int sys,
                                     const std::vector<Mat>& warm, int count,
                                     std::uint64_t seed) {
  std::vector<Mat> bases = warm;
  const int d = rho.dims[sys];
  Mat marg = partial_trace(rho.mat, rho.dims, {sys});
  bases.push_back(herm_eig(marg).eigenvectors);
  bases.push_back(Mat::Identity(d, d));
  Rng rng(seed ^ 0xb10c5eedULL);
  while (static_cast<int>(bases.size()) < count)
    bases.push_back(random_unitary(d, rng));
  return bases;
}

struct BasisSearch {
  double value = 0.0;
  Mat basis_a, basis_b;
  RVec aux;  // best inner parameters (blocks / distribution), if any
  OptimDiag diag;
};

// Multi-start Nelder-Mead over theta around each start's base unitary
// (basis = U0 exp(i H(theta))), optionally with a second side and auxiliary
// inner parameters appended to theta.
BasisSearch run_basis_search(
    const DensityOperator& rho, const SearchOptions& opts, bool two_sided,
    int sys_a, int aux_dim,
    const std::function<RVec(const Mat& u0a, const Mat& u0b)>& aux_init,
    const std::function<double(const Mat& ba, const Mat& bb, const RVec& aux)>&
        eval) {
  const int da = rho.dims[sys_a];
  const int db = two_sided ? rho.dims[1 - sys_a] : 0;
  const int na = unitary_param_count(da);
  const int nb = two_sided ? unitary_param_count(db) : 0;
  const int n = na + nb + aux_dim;

  int count = std::max(opts.multistarts, 2);
  std::vector<Mat> starts_a = make_base_unitaries(
      rho, sys_a, sys_a == 0 ? opts.warm_bases_a : opts.warm_bases_b, count,
      opts.seed);
  std::vector<Mat> starts_b;
  if (two_sided)
    starts_b = make_base_unitaries(
        rho, 1 - sys_a, sys_a == 0 ? opts.warm_bases_b : opts.warm_bases_a,
        count, opts.seed + 1);
  count = static_cast<int>(starts_a.size());

  NmOptions nm;
  nm.diameter_tol = opts.simplex_tol;
  nm.max_iters = opts.max_iters > 0 ? opts.max_iters : 220 * n;
  nm.init_step = 0.2;

  BasisSearch best;
  best.value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < count; ++s) {
    const Mat& u0a = starts_a[s];
    const Mat u0b = two_sided ? starts_b[s % starts_b.size()] : Mat();
    auto obj = [&](const RVec& theta) {
      Mat ba = u0a * unitary_from_params(theta.head(na), da);
      Mat bb = two_sided
                   ? Mat(u0b * unitary_from_params(theta.segment(na, nb), db))
                   : Mat();
      return eval(ba, bb, theta.tail(aux_dim));
    };
    RVec x0 = RVec::Zero(n);
    if (aux_dim > 0) x0.tail(aux_dim) = aux_init(u0a, u0b);
    NmResult r = nelder_mead(obj, x0, nm);
    best.diag.iterations += r.iters;
    if (r.converged) ++best.diag.converged_starts;
    if (r.fval < best.value) {
      best.value = r.fval;
      best.basis_a = u0a * unitary_from_params(r.x.head(na), da);
      if (two_sided)
        best.basis_b = u0b * unitary_from_params(r.x.segment(na, nb), db);
      best.aux = r.x.tail(aux_dim);
      best.diag.best_start = s;
    }
  }
  best.diag.restarts = count;
  best.diag.converged = best.diag.converged_starts > 0;
  return best;
}

// CQ state from a basis on the classical side and Cholesky block parameters.
Mat cq_state_from_params(const Mat& basis, const RVec& aux, int d_cl,
                         int d_other, int classical_sys) {
  const int bp = cholesky_param_count(d_other);
  Mat sigma = Mat::Zero(d_cl * d_other, d_cl * d_other);
  double total = 0.0;
  std::vector<Mat> blocks(d_cl);
  for (int j = 0; j < d_cl; ++j) {
    Mat l = cholesky_factor_from_params(aux.segment(j * bp, bp), d_other);
    blocks[j] = l * l.adjoint();
    total += blocks[j].trace().real();
  }
  if (total <= 1e-14) return sigma;
  for (int j = 0; j < d_cl; ++j) {
    Mat pj = basis.col(j) * basis.col(j).adjoint();
    Mat term = classical_sys == 0 ? kron(pj, blocks[j] / total)
                                  : kron(blocks[j] / total, pj);
    sigma += term;
  }
  return sigma;
}

double base_anchor(const DivergenceKind& kind, const DensityOperator& rho,
                   const CondEntropyOptions& eopts) {
  return -cond_entropy(kind, rho, 1, eopts).value;
}

// For an MQ state the phase twirl sum_j e^{i theta_j} |W_j><W_j| (x) X_j fixes
// the state and pinches sigma into the PVM blocks, so data processing says a
// blocked sigma is at least as good. Applied after the generic search.
CondEntropyResult refine_sigma_for_mq(const DivergenceKind& kind,
                                      const DensityOperator& rho,
                                      const MqWitness& w,
                                      CondEntropyResult base) {
  const int da = rho.dims[0];
  Mat blocked = Mat::Zero(rho.dims[1], rho.dims[1]);
  for (const Mat& x : w.projectors) blocked += x * base.optimal_sigma_b * x;
  double tr = blocked.trace().real();
  if (tr <= 1e-14) return base;
  blocked /= tr;
  DivValue d =
      div(kind, rho.mat, kron(Mat::Identity(da, da), blocked));
  if (!d.infinite && -d.bits > base.value) {
    base.value = -d.bits;
    base.optimal_sigma_b = blocked;
  }
  return base;
}

CondEntropyOptions entropy_opts_from(const SearchOptions& opts) {
  CondEntropyOptions e;
  e.seed = opts.seed;
  e.multistarts = std::min(opts.multistarts, 6);
  return e;
}

}  // namespace

MeasureReport delta_one_way(const DivergenceKind& kind,
                            const DensityOperator& rho, Side side,
                            const SearchOptions& opts) {
  if (rho.dims.size() != 2)
    throw DimMismatch("delta_one_way: state not bipartite");
  const int sys = side == Side::A ? 0 : 1;
  const int other = 1 - sys;
  const int d_cl = rho.dims[sys], d_other = rho.dims[other];

  MeasureReport rep;
  rep.name = side == Side::A ? "Delta_arrow_A|B" : "Delta_arrow_B|A";
  rep.provenance = "search_upper_bound";

  if (kind.tag == DivergenceKind::Tag::von_neumann) {
    const double h_rho = entropy_bits(rho.mat);
    BasisSearch s = run_basis_search(
        rho, opts, /*two_sided=*/false, sys, 0, {},
        [&](const Mat& ba, const Mat&, const RVec&) {
          return entropy_bits(pinch_side(rho.mat, rho.dims, sys, ba)) - h_rho;
        });
    rep.upper = std::max(s.value, 0.0);
    rep.diag = s.diag;
  } else {
    const int bp = cholesky_param_count(d_other);
    const int aux_dim = d_cl * bp;
    auto aux_init = [&](const Mat& u0, const Mat&) {
      RVec aux(aux_dim);
      // Conditional blocks of rho in the start basis.
      for (int j = 0; j < d_cl; ++j) {
        Mat pj = u0.col(j) * u0.col(j).adjoint();
        Mat big = sys == 0 ? kron(pj, Mat::Identity(d_other, d_other))
                           : kron(Mat::Identity(d_other, d_other), pj);
        Mat tau = partial_trace(big * rho.mat * big, rho.dims, {other});
        tau = 0.5 * (tau + tau.adjoint()) +
              1e-6 * Mat::Identity(d_other, d_other);
        aux.segment(j * bp, bp) = params_from_psd(tau);
      }
      return aux;
    };
    BasisSearch s = run_basis_search(
        rho, opts, /*two_sided=*/false, sys, aux_dim, aux_init,
        [&](const Mat& ba, const Mat&, const RVec& aux) {
          Mat sigma = cq_state_from_params(ba, aux, d_cl, d_other, sys);
          if (sigma.trace().real() <= 1e-14) return kInfObjective;
          return div(kind, rho.mat, sigma).as_objective();
        });
    rep.upper = std::max(s.value, 0.0);
    rep.diag = s.diag;
  }
  rep.lower = 0.0;
  rep.nonconvergence = !rep.diag.converged;
  return rep;
}

MeasureReport delta_two_way(const DivergenceKind& kind,
                            const DensityOperator& rho,
                            const SearchOptions& opts) {
  if (rho.dims.size() != 2)
    throw DimMismatch("delta_two_way: state not bipartite");
  const int da = rho.dims[0], db = rho.dims[1];

  MeasureReport rep;
  rep.name = "Delta_2way";
  rep.provenance = "search_upper_bound";

  if (kind.tag == DivergenceKind::Tag::von_neumann) {
    const double h_rho = entropy_bits(rho.mat);
    BasisSearch s = run_basis_search(
        rho, opts, /*two_sided=*/true, 0, 0, {},
        [&](const Mat& ba, const Mat& bb, const RVec&) {
          Mat pinched = pinch_side(rho.mat, rho.dims, 0, ba);
          pinched = pinch_side(pinched, rho.dims, 1, bb);
          return entropy_bits(pinched) - h_rho;
        });
    rep.upper = std::max(s.value, 0.0);
    rep.diag = s.diag;
  } else {
    // Joint distribution over the product basis, softmax-parametrized.
    const int aux_dim = da * db;
    auto aux_init = [&](const Mat& u0a, const Mat& u0b) {
      RVec aux(aux_dim);
      for (int j = 0; j < da; ++j)
        for (int k = 0; k < db; ++k) {
          Vec ket = kron(u0a.col(j), u0b.col(k));
          double p = std::max((ket.adjoint() * rho.mat * ket)(0, 0).real(),
                              1e-8);
          aux(j * db + k) = std::log(p);
        }
      return aux;
    };
    BasisSearch s = run_basis_search(
        rho, opts, /*two_sided=*/true, 0, aux_dim, aux_init,
        [&](const Mat& ba, const Mat& bb, const RVec& aux) {
          RVec q = simplex_from_params(aux);
          Mat sigma = Mat::Zero(rho.dim(), rho.dim());
          for (int j = 0; j < da; ++j)
            for (int k = 0; k < db; ++k) {
              Vec ket = kron(ba.col(j), bb.col(k));
              sigma += q(j * db + k) * (ket * ket.adjoint());
            }
          return div(kind, rho.mat, sigma).as_objective();
        });
    rep.upper = std::max(s.value, 0.0);
    rep.diag = s.diag;
  }
  rep.lower = 0.0;
  rep.nonconvergence = !rep.diag.converged;
  return rep;
}

MeasureReport entanglement_bracket(const DivergenceKind& kind,
                                   const DensityOperator& rho,
                                   const SearchOptions& opts) {
  MeasureReport rep;
  rep.name = "E_" + kind.name();
  CondEntropyOptions eopts = entropy_opts_from(opts);

  StateClassVerdict mq = is_mq(rho, kClassTol);
  if (mq.member) {
    CondEntropyResult ce = refine_sigma_for_mq(
        kind, rho, *mq.mq_witness, cond_entropy(kind, rho, 1, eopts));
    rep.lower = rep.upper = -ce.value;
    rep.exact = true;
    rep.provenance = "collapse_exact";
    return rep;
  }
  double neg_h = base_anchor(kind, rho, eopts);
  StateClassVerdict sep = is_separable_small(rho, kClassTol);
  if (sep.cls == StateClass::Sep && sep.member && !sep.inconclusive) {
    rep.lower = rep.upper = 0.0;
    rep.exact = true;
    rep.provenance = "sep_certified";
    return rep;
  }
  MeasureReport da = delta_one_way(kind, rho, Side::A, opts);
  MeasureReport db = delta_one_way(kind, rho, Side::B, opts);
  rep.lower = std::max(neg_h, 0.0);
  rep.upper = std::min(da.upper, db.upper);
  rep.exact = false;
  rep.provenance = "search_upper_bound";
  rep.diag = da.diag;
  return rep;
}

namespace {

double shannon_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 1e-15) h -= x * std::log2(x);
  return h;
}

// delta objective for a one-sided rank-one measurement given by `elements`
// (projectors or POVM elements) on `sys`.
double discord_objective_one_way(const DensityOperator& rho, int sys,
                                 const std::vector<Mat>& elements,
                                 double h_meas_side, double h_rho) {
  const int other = 1 - sys;
  const Mat id = Mat::Identity(rho.dims[other], rho.dims[other]);
  std::vector<double> probs;
  double h_joint = 0.0;
  for (const Mat& e : elements) {
    Mat big = sys == 0 ? kron(e, id) : kron(id, e);
    Mat tau = partial_trace(big * rho.mat, rho.dims, {other});
    tau = 0.5 * (tau + tau.adjoint());
    probs.push_back(std::max(tau.trace().real(), 0.0));
    h_joint += entropy_bits(tau);
  }
  // I(rho) - I(measured) with the untouched marginal cancelling.
  return h_meas_side - h_rho - shannon_bits(probs) + h_joint;
}

std::vector<Mat> rank1_projectors(const Mat& basis) {
  std::vector<Mat> out;
  for (int j = 0; j < basis.cols(); ++j)
    out.push_back(basis.col(j) * basis.col(j).adjoint());
  return out;
}

// Rank-one POVM with n outcomes from an n x d isometry (rows -> elements).
std::vector<Mat> rank1_povm_from_params(const RVec& theta, int n, int d) {
  Mat m(n, d);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) {
      m(i, j) = Cplx(theta(k), theta(k + 1));
      k += 2;
    }
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = Mat(qr.householderQ()).leftCols(d);
  std::vector<Mat> out;
  for (int i = 0; i < n; ++i)
    out.push_back(q.row(i).adjoint() * q.row(i));
  return out;
}

}  // namespace

MeasureReport discord_delta(const DensityOperator& rho, DiscordScope scope,
                            PovmMode mode, const SearchOptions& opts) {
  if (rho.dims.size() != 2)
    throw DimMismatch("discord_delta: state not bipartite");
  MeasureReport rep;
  rep.provenance = "search_upper_bound";
  const double h_rho = entropy_bits(rho.mat);
  const double h_a = entropy_bits(partial_trace(rho.mat, rho.dims, {0}));
  const double h_b = entropy_bits(partial_trace(rho.mat, rho.dims, {1}));

  if (scope == DiscordScope::two_way) {
    rep.name = "delta_2way";
    const double i_rho = h_a + h_b - h_rho;
    BasisSearch s = run_basis_search(
        rho, opts, /*two_sided=*/true, 0, 0, {},
        [&](const Mat& ba, const Mat& bb, const RVec&) {
          const int da = rho.dims[0], db = rho.dims[1];
          std::vector<double> pj(da, 0.0), qk(db, 0.0), joint(da * db, 0.0);
          for (int j = 0; j < da; ++j)
            for (int k = 0; k < db; ++k) {
              Vec ket = kron(ba.col(j), bb.col(k));
              double p = std::max(
                  (ket.adjoint() * rho.mat * ket)(0, 0).real(), 0.0);
              joint[j * db + k] = p;
              pj[j] += p;
              qk[k] += p;
            }
          double i_meas =
              shannon_bits(pj) + shannon_bits(qk) - shannon_bits(joint);
          return i_rho - i_meas;
        });
    rep.upper = std::max(s.value, 0.0);
    rep.diag = s.diag;
  } else {
    const int sys = scope == DiscordScope::one_way_a ? 0 : 1;
    rep.name = sys == 0 ? "delta_arrow_A|B" : "delta_arrow_B|A";
    const double h_side = sys == 0 ? h_a : h_b;
    if (mode == PovmMode::projective_rank1) {
      BasisSearch s = run_basis_search(
          rho, opts, /*two_sided=*/false, sys, 0, {},
          [&](const Mat& ba, const Mat&, const RVec&) {
            return discord_objective_one_way(rho, sys, rank1_projectors(ba),
                                             h_side, h_rho);
          });
      rep.upper = std::max(s.value, 0.0);
      rep.diag = s.diag;
    } else {
      const int d = rho.dims[sys];
      const int n = d * d;  // outcome cap
      const int dim = 2 * n * d;
      auto obj = [&](const RVec& theta) {
        return discord_objective_one_way(
            rho, sys, rank1_povm_from_params(theta, n, d), h_side, h_rho);
      };
      std::vector<RVec> warm;
      // Projective start: identity isometry rows.
      RVec w0 = RVec::Zero(dim);
      for (int i = 0; i < d; ++i) w0(2 * (i * d + i)) = 1.0;
      warm.push_back(w0);
      MultistartOptions mopts;
      mopts.starts = std::max(opts.multistarts, 2);
      mopts.seed = opts.seed;
      mopts.nm.diameter_tol = opts.simplex_tol;
      mopts.nm.max_iters = opts.max_iters > 0 ? opts.max_iters : 220 * dim;
      MultistartResult best = multistart_minimize(obj, warm, dim, mopts);
      rep.upper = std::max(best.fval, 0.0);
      rep.diag.iterations = best.total_iters;
      rep.diag.restarts = best.restarts;
      rep.diag.converged_starts = best.converged_starts;
      rep.diag.converged = best.converged_starts > 0;
    }
  }
  rep.lower = 0.0;
  rep.nonconvergence = !rep.diag.converged;
  return rep;
}

namespace {

MeasureReport bracketed_entry(const std::string& name, double lower,
                              double upper) {
  MeasureReport rep;
  rep.name = name;
  rep.lower = lower;
  rep.upper = upper;
  rep.computable = false;
  rep.provenance = "bracketed_by_theorem";
  return rep;
}

void clamp_upper(MeasureReport& rep, double bound) {
  if (bound < rep.upper) rep.upper = bound;
}

}  // namespace

std::vector<MeasureReport> hierarchy_table(const DensityOperator& rho,
                                           const DivergenceKind& kind,
                                           const SearchOptions& opts) {
  CondEntropyOptions eopts = entropy_opts_from(opts);
  CondEntropyResult ce = cond_entropy(kind, rho, 1, eopts);
  const bool vn = kind.tag == DivergenceKind::Tag::von_neumann;

  SearchOptions o = opts;
  StateClassVerdict mq = is_mq(rho, kClassTol);
  if (mq.member && mq.mq_witness)
    ce = refine_sigma_for_mq(kind, rho, *mq.mq_witness, ce);
  const double neg_h = -ce.value;
  if (mq.member && mq.witness_basis) {
    o.warm_bases_a.push_back(*mq.witness_basis);
    Mat rho_b = partial_trace(rho.mat, rho.dims, {1});
    o.warm_bases_b.push_back(herm_eig(rho_b).eigenvectors);
  }

  MeasureReport bottom;
  bottom.name = vn ? "Ic" : "-H_" + kind.name();
  bottom.lower = bottom.upper = neg_h;
  bottom.exact = ce.method == CondEntropyResult::Method::closed_form;
  bottom.provenance = bottom.exact ? "closed_form" : "search_upper_bound";
  bottom.diag = ce.diag;

  MeasureReport d2 = delta_two_way(kind, rho, o);
  MeasureReport d1a = delta_one_way(kind, rho, Side::A, o);
  MeasureReport d1b = delta_one_way(kind, rho, Side::B, o);
  // A CC feasible point is CQ/QC feasible, so the two-way upper bound is a
  // legitimate one-way upper bound; the chain anchors every entry from below.
  clamp_upper(d1a, d2.upper);
  clamp_upper(d1b, d2.upper);
  d2.lower = d1a.lower = d1b.lower = std::max(neg_h, 0.0);

  MeasureReport ent;
  ent.name = "E_" + kind.name();
  if (mq.member) {
    ent.lower = ent.upper = neg_h;
    ent.exact = true;
    ent.provenance = "collapse_exact";
  } else {
    StateClassVerdict sep = is_separable_small(rho, kClassTol);
    if (sep.cls == StateClass::Sep && sep.member && !sep.inconclusive) {
      ent.lower = ent.upper = 0.0;
      ent.exact = true;
      ent.provenance = "sep_certified";
    } else {
      ent.lower = std::max(neg_h, 0.0);
      ent.upper = std::min(d1a.upper, d1b.upper);
      ent.provenance = "search_upper_bound";
    }
  }

  std::vector<MeasureReport> table;
  table.push_back(bottom);
  const double anchor = std::max(neg_h, 0.0);
  if (vn) {
    table.push_back(bracketed_entry("E_D", anchor, ent.upper));
    table.push_back(bracketed_entry("K_D", anchor, ent.upper));
    table.push_back(bracketed_entry("E_R_inf", anchor, ent.upper));
  }
  table.push_back(ent);
  if (vn) {
    MeasureReport dda = discord_delta(rho, DiscordScope::one_way_a,
                                      PovmMode::projective_rank1, o);
    MeasureReport ddb = discord_delta(rho, DiscordScope::one_way_b,
                                      PovmMode::projective_rank1, o);
    MeasureReport dd2 =
        discord_delta(rho, DiscordScope::two_way, PovmMode::projective_rank1, o);
    clamp_upper(dd2, d2.upper);
    clamp_upper(dda, dd2.upper);
    clamp_upper(ddb, dd2.upper);
    dda.lower = ddb.lower = dd2.lower = anchor;
    table.push_back(bracketed_entry("delta_inf_arrow_A|B", anchor, dda.upper));
    table.push_back(bracketed_entry("delta_inf_arrow_B|A", anchor, ddb.upper));
    table.push_back(dda);
    table.push_back(ddb);
    table.push_back(d1a);
    table.push_back(d1b);
    table.push_back(bracketed_entry("delta_inf_2way", anchor, dd2.upper));
    table.push_back(bracketed_entry("Delta_inf_2way", anchor, d2.upper));
    table.push_back(dd2);
  } else {
    table.push_back(d1a);
    table.push_back(d1b);
  }
  table.push_back(d2);
  return table;
}

CollapseCertificate certify_collapse(const DensityOperator& rho,
                                     const DivergenceKind& kind, double tol,
                                     const CondEntropyOptions& eopts,
                                     const std::string& state_id) {
  CollapseCertificate cert;
  cert.state_id = state_id;
  cert.kind = kind;
  cert.tol = tol;

  StateClassVerdict mq = is_mq(rho, kClassTol);
  if (!mq.member) {
    cert.applicable = false;
    cert.collapsed = false;
    UniquenessReport u = uniqueness_gap(rho);
    cert.lower = u.ic;
    cert.upper = u.delta_ab;
    cert.gap = u.delta_ab - u.ic;
    cert.delta_ac_gap = u.gap;
    return cert;
  }

  const MqWitness& w = *mq.mq_witness;
  CondEntropyResult ce =
      refine_sigma_for_mq(kind, rho, w, cond_entropy(kind, rho, 1, eopts));
  cert.lower = -ce.value;

  auto candidate = [&](const Mat& sigma) {
    Mat cand = Mat::Zero(rho.dim(), rho.dim());
    for (size_t j = 0; j < w.projectors.size(); ++j) {
      Mat wj = w.basis_w.col(static_cast<int>(j)) *
               w.basis_w.col(static_cast<int>(j)).adjoint();
      cand += kron(wj, w.projectors[j] * sigma * w.projectors[j]);
    }
    return cand;
  };

  DivValue up = div(kind, rho.mat, candidate(ce.optimal_sigma_b));
  if (up.infinite) {
    // The searched sigma lost rank; a vanishing admixture restores support
    // without moving the value.
    const int db = rho.dims[1];
    Mat fixed = (1.0 - 1e-9) * ce.optimal_sigma_b +
                (1e-9 / db) * Mat::Identity(db, db);
    up = div(kind, rho.mat, candidate(fixed));
  }
  cert.upper = up.infinite ? kInfObjective : up.bits;
  cert.gap = cert.upper - cert.lower;
  cert.collapsed = std::abs(cert.gap) <= tol;

  cert.collapsed_measures = {"-H_" + kind.name(), "E_" + kind.name(),
                             "Delta_arrow_Mx|S", "Delta_arrow_S|Mx",
                             "Delta_2way"};
  if (kind.tag == DivergenceKind::Tag::von_neumann)
    cert.collapsed_measures = {
        "Ic",
        "E_D",
        "K_D",
        "E_R_inf",
        "E_R",
        "delta_inf_arrow_Mx|S",
        "delta_inf_arrow_S|Mx",
        "delta_arrow_Mx|S",
        "delta_arrow_S|Mx",
        "Delta_arrow_Mx|S",
        "Delta_arrow_S|Mx",
        "delta_inf_2way",
        "Delta_inf_2way",
        "delta_2way",
        "Delta_2way"};
  return cert;
}

namespace {

// Deterministic spread of rank-one qubit bases (Fibonacci sphere).
std::vector<Mat> bloch_grid_bases(int n) {
  std::vector<Mat> bases;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double theta = std::acos(std::clamp(z, -1.0, 1.0));
    double phi = golden * i;
    Mat u(2, 2);
    double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    u(0, 0) = c;
    u(1, 0) = std::exp(Cplx(0, phi)) * s;
    u(0, 1) = -std::exp(Cplx(0, -phi)) * s;
    u(1, 1) = c;
    bases.push_back(u);
  }
  return bases;
}

}  // namespace

UniquenessReport uniqueness_gap(const DensityOperator& rho,
                                const SearchOptions& opts) {
  if (rho.dims.size() != 2)
    throw DimMismatch("uniqueness_gap: state not bipartite");
  UniquenessReport rep;
  rep.ic = -cond_entropy(DivergenceKind::vn(), rho, 1).value;

  DensityOperator abc = purify(rho);
  DensityOperator ac = abc.marginal({0, 2});

  SearchOptions o = opts;
  if (rho.dims[0] == 2) {
    o.warm_bases_a = bloch_grid_bases(std::max(opts.multistarts, 24));
    o.multistarts = static_cast<int>(o.warm_bases_a.size());
  }
  rep.delta_ab = discord_delta(rho, DiscordScope::one_way_a,
                               PovmMode::projective_rank1, o)
                     .upper;
  rep.delta_ac = discord_delta(ac, DiscordScope::one_way_a,
                               PovmMode::projective_rank1, o)
                     .upper;
  rep.identity_residual = std::abs(rep.ic - (rep.delta_ab - rep.delta_ac));
  rep.gap = rep.delta_ac;
  return rep;
}

MeasureReport generalized_discord(const DensityOperator& rho,
                                  const std::string& q_measure,
                                  const SearchOptions& opts) {
  if (rho.dims.size() != 2)
    throw DimMismatch("generalized_discord: state not bipartite");
  if (q_measure != "Delta2" && q_measure != "delta2" && q_measure != "ebracket")
    throw DomainError("generalized_discord: unsupported Q measure " + q_measure);

  // Q collapses on the premeasured split M_W | AB, so the inner value is
  // -H(M_W|AB) = H(pinched rho) - H(rho) for every supported Q.
  const double h_rho = entropy_bits(rho.mat);
  BasisSearch s = run_basis_search(
      rho, opts, /*two_sided=*/false, 0, 0, {},
      [&](const Mat& ba, const Mat&, const RVec&) {
        return entropy_bits(pinch_side(rho.mat, rho.dims, 0, ba)) - h_rho;
      });
  MeasureReport rep;
  rep.name = "gen_discord:" + q_measure;
  rep.lower = 0.0;
  rep.upper = std::max(s.value, 0.0);
  rep.provenance = "search_upper_bound";
  rep.diag = s.diag;
  rep.nonconvergence = !s.diag.converged;
  return rep;
}

BuresCheck bures_cc_dominance(const DensityOperator& rho, int n_samples,
                              std::uint64_t seed) {
  StateClassVerdict mq = is_mq(rho, kClassTol);
  if (!mq.member) throw NotMQ("bures_cc_dominance: state not MQ");
  const MqWitness& w = *mq.mq_witness;
  const int da = rho.dims[0], db = rho.dims[1];

  Rng rng(seed);
  std::uniform_int_distribution<int> n_terms(1, 4);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  BuresCheck check;
  check.worst_margin = std::numeric_limits<double>::infinity();
  check.samples = n_samples;
  for (int i = 0; i < n_samples; ++i) {
    int k = n_terms(rng);
    Mat sigma = Mat::Zero(rho.dim(), rho.dim());
    std::vector<double> weights(k);
    double total = 0.0;
    for (int t = 0; t < k; ++t) {
      weights[t] = -std::log(std::max(uni(rng), 1e-300));
      total += weights[t];
    }
    for (int t = 0; t < k; ++t) {
      Vec a = ginibre(da, 1, rng);
      Vec b = ginibre(db, 1, rng);
      a.normalize();
      b.normalize();
      Vec prod = kron(a, b);
      sigma += (weights[t] / total) * (prod * prod.adjoint());
    }
    Mat sigma_s = partial_trace(sigma, rho.dims, {1});
    Mat alpha = Mat::Zero(rho.dim(), rho.dim());
    for (size_t j = 0; j < w.projectors.size(); ++j) {
      Mat wj = w.basis_w.col(static_cast<int>(j)) *
               w.basis_w.col(static_cast<int>(j)).adjoint();
      alpha += kron(wj, w.projectors[j] * sigma_s * w.projectors[j]);
    }
    double margin = fidelity(rho.mat, alpha) - fidelity(rho.mat, sigma);
    check.worst_margin = std::min(check.worst_margin, margin);
  }
  check.pass = check.worst_margin >= -1e-9;
  return check;
}

}  // namespace qcorr
