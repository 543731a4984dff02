#include "qcorr/states.hpp"

#include <cmath>

namespace qcorr {

DensityOperator DensityOperator::marginal(const std::vector<int>& keep) const {
  DensityOperator out;
  out.mat = partial_trace(mat, dims, keep);
  for (int k : keep) out.dims.push_back(dims[k]);
  out.trace_mode = trace_mode;
  return out;
}

DensityOperator DensityOperator::group_bipartite(int split) const {
  if (split <= 0 || split >= static_cast<int>(dims.size()))
    throw DimMismatch("group_bipartite: split out of range");
  int da = 1, db = 1;
  for (int i = 0; i < split; ++i) da *= dims[i];
  for (int i = split; i < static_cast<int>(dims.size()); ++i) db *= dims[i];
  DensityOperator out;
  out.mat = mat;
  out.dims = {da, db};
  out.trace_mode = trace_mode;
  return out;
}

bool DensityOperator::is_pure(double tol) const {
  HermitianEig eig = herm_eig(mat);
  if (eig.eigenvalues.size() < 2) return true;
  return eig.eigenvalues(1) <= tol * std::max(eig.eigenvalues(0), 1.0);
}

void DensityOperator::validate() const {
  if (!mat.allFinite()) throw DomainError("DensityOperator: non-finite entries");
  if (mat.rows() != mat.cols() || mat.rows() != product(dims))
    throw DimMismatch("DensityOperator: dims inconsistent with matrix");
  HermitianEig eig = herm_eig(mat);
  double lmin = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (lmin < -1e-10)
    throw NotPSD("DensityOperator: min eigenvalue " + std::to_string(lmin));
  double tr = trace();
  if (trace_mode == TraceMode::normalized) {
    if (std::abs(tr - 1.0) > 1e-10)
      throw DomainError("DensityOperator: trace " + std::to_string(tr) +
                        " not 1");
  } else if (tr > 1.0 + 1e-10) {
    throw DomainError("DensityOperator: trace " + std::to_string(tr) +
                      " exceeds 1");
  }
}

DensityOperator make_density(Mat m, std::vector<int> dims, TraceMode mode) {
  DensityOperator rho{std::move(m), std::move(dims), mode};
  rho.validate();
  return rho;
}

DensityOperator pure_state(const Vec& ket, std::vector<int> dims,
                           TraceMode mode) {
  return make_density(ket * ket.adjoint(), std::move(dims), mode);
}

DensityOperator purify(const DensityOperator& rho) {
  HermitianEig eig = herm_eig(rho.mat);
  double lmax = eig.eigenvalues(0);
  int rank = 0;
  for (int i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > kSupportCutoff * std::max(lmax, 0.0)) ++rank;
  rank = std::max(rank, 1);
  const int d = rho.dim();
  Vec ket = Vec::Zero(d * rank);
  for (int i = 0; i < rank; ++i) {
    double lam = std::max(eig.eigenvalues(i), 0.0);
    // |psi> = sum_i sqrt(lam_i) |v_i>|i>
    for (int r = 0; r < d; ++r)
      ket(r * rank + i) = std::sqrt(lam) * eig.eigenvectors(r, i);
  }
  std::vector<int> dims = rho.dims;
  dims.push_back(rank);
  return pure_state(ket, dims,
                    rho.trace_mode == TraceMode::normalized
                        ? TraceMode::normalized
                        : TraceMode::subnormalized);
}

Mat ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
  return g;
}

Mat random_unitary(int d, Rng& rng) {
  Mat g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Phase fix makes the distribution Haar.
  for (int i = 0; i < d; ++i) {
    Cplx rii = r(i, i);
    double a = std::abs(rii);
    q.col(i) *= (a > 0) ? rii / a : Cplx(1.0, 0.0);
  }
  return q;
}

DensityOperator random_state(const std::vector<int>& dims, int rank, Rng& rng) {
  const int d = product(dims);
  if (rank < 1 || rank > d) throw DimMismatch("random_state: bad rank");
  Mat g = ginibre(d, rank, rng);
  Mat m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint());
  return make_density(m, dims);
}

DensityOperator random_pure(const std::vector<int>& dims, Rng& rng) {
  return random_state(dims, 1, rng);
}

std::vector<Mat> hermitian_basis(int d) {
  std::vector<Mat> basis;
  basis.reserve(d * d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    Mat e = Mat::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Mat s = Mat::Zero(d, d);
      s(i, j) = inv_sqrt2;
      s(j, i) = inv_sqrt2;
      basis.push_back(s);
      Mat a = Mat::Zero(d, d);
      a(i, j) = Cplx(0.0, inv_sqrt2);
      a(j, i) = Cplx(0.0, -inv_sqrt2);
      basis.push_back(a);
    }
  return basis;
}

namespace {

// Recursively diagonalizes a commuting family within the subspace spanned by
// the columns of `frame`.
void refine_eigenbasis(const std::vector<Mat>& ops, const Mat& frame,
                       int op_index, double tol, Rng& rng, Mat& out, int& col,
                       bool* degenerate_flag) {
  const int sub = static_cast<int>(frame.cols());
  if (sub == 1) {
    out.col(col++) = frame;
    return;
  }
  if (op_index >= static_cast<int>(ops.size()) * 2) {
    // Commuting family constant on this subspace: any orthonormal frame works.
    if (degenerate_flag) *degenerate_flag = true;
    for (int i = 0; i < sub; ++i) out.col(col++) = frame.col(i);
    return;
  }
  // Generic combination, projected into the subspace.
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g = Mat::Zero(sub, sub);
  for (const Mat& op : ops) g += gauss(rng) * (frame.adjoint() * op * frame);
  g = 0.5 * (g + g.adjoint());
  HermitianEig eig = herm_eig(g);
  double scale = std::max(std::abs(eig.eigenvalues(0)),
                          std::abs(eig.eigenvalues(sub - 1)));
  double group_tol = std::max(1e-7 * std::max(scale, 1.0), tol);
  int i = 0;
  while (i < sub) {
    int j = i + 1;
    while (j < sub && eig.eigenvalues(i) - eig.eigenvalues(j) < group_tol) ++j;
    Mat block = frame * eig.eigenvectors.middleCols(i, j - i);
    if (j - i == 1) {
      out.col(col++) = block;
    } else {
      if (degenerate_flag) *degenerate_flag = true;
      refine_eigenbasis(ops, block, op_index + 1, tol, rng, out, col,
                        degenerate_flag);
    }
    i = j;
  }
}

}  // namespace

Mat joint_eigenbasis(const std::vector<Mat>& ops, double tol,
                     bool* degenerate_flag) {
  if (ops.empty()) throw DimMismatch("joint_eigenbasis: empty family");
  const int d = static_cast<int>(ops[0].rows());
  Mat out(d, d);
  int col = 0;
  Rng rng(0x5ba7ca11dULL);
  refine_eigenbasis(ops, Mat::Identity(d, d), 0, tol, rng, out, col,
                    degenerate_flag);
  return out;
}

StateClassVerdict is_cq(const DensityOperator& rho, Side which, double tol) {
  if (rho.dims.size() != 2) throw DimMismatch("is_cq: state not bipartite");
  const int classical_sys = which == Side::A ? 0 : 1;
  const int other_sys = 1 - classical_sys;

  StateClassVerdict v;
  v.cls = which == Side::A ? StateClass::CQ : StateClass::QC;
  v.tolerance_used = tol;

  // Conditional operators on the classical side probed by a Hermitian operator
  // basis on the other side.
  std::vector<Mat> probes = hermitian_basis(rho.dims[other_sys]);
  std::vector<Mat> conditionals;
  conditionals.reserve(probes.size());
  const Mat id_cl = Mat::Identity(rho.dims[classical_sys], rho.dims[classical_sys]);
  for (const Mat& f : probes) {
    Mat big = classical_sys == 0 ? kron(id_cl, f) : kron(f, id_cl);
    Mat weighted = big * rho.mat;
    conditionals.push_back(
        partial_trace(weighted, rho.dims, {classical_sys}));
  }

  double max_comm = 0.0;
  for (size_t m = 0; m < conditionals.size(); ++m)
    for (size_t n = m + 1; n < conditionals.size(); ++n) {
      Mat comm = conditionals[m] * conditionals[n] -
                 conditionals[n] * conditionals[m];
      max_comm = std::max(max_comm, comm.norm());
    }
  v.gap = max_comm;
  v.member = max_comm <= tol;
  if (!v.member) return v;

  std::vector<Mat> herm_conditionals;
  for (const Mat& c : conditionals) {
    herm_conditionals.push_back(0.5 * (c + c.adjoint()));
    Mat anti = Cplx(0.0, -0.5) * (c - c.adjoint());
    if (anti.norm() > tol) herm_conditionals.push_back(anti);
  }
  bool degenerate = false;
  Mat basis = joint_eigenbasis(herm_conditionals, tol, &degenerate);

  // Verify the witness: dephasing in the witness basis must reproduce rho.
  Mat dephased = Mat::Zero(rho.dim(), rho.dim());
  const Mat id_other = Mat::Identity(rho.dims[other_sys], rho.dims[other_sys]);
  for (int j = 0; j < basis.cols(); ++j) {
    Mat pj = basis.col(j) * basis.col(j).adjoint();
    Mat big = classical_sys == 0 ? kron(pj, id_other) : kron(id_other, pj);
    dephased += big * rho.mat * big;
  }
  if ((dephased - rho.mat).norm() > 10.0 * tol) degenerate = true;
  v.degenerate_warning = degenerate;
  v.witness_basis = basis;
  return v;
}

StateClassVerdict is_cc(const DensityOperator& rho, double tol) {
  StateClassVerdict a = is_cq(rho, Side::A, tol);
  StateClassVerdict b = is_cq(rho, Side::B, tol);
  StateClassVerdict v;
  v.cls = StateClass::CC;
  v.tolerance_used = tol;
  v.member = a.member && b.member;
  v.gap = std::max(a.gap, b.gap);
  v.degenerate_warning = a.degenerate_warning || b.degenerate_warning;
  if (a.member) v.witness_basis = a.witness_basis;
  return v;
}

Mat partial_transpose(const Mat& m, const std::vector<int>& dims, int sys) {
  if (dims.size() != 2) throw DimMismatch("partial_transpose: need 2 factors");
  const int da = dims[0], db = dims[1];
  Mat out(m.rows(), m.cols());
  for (int a = 0; a < da; ++a)
    for (int ap = 0; ap < da; ++ap)
      for (int b = 0; b < db; ++b)
        for (int bp = 0; bp < db; ++bp) {
          int r = a * db + b, c = ap * db + bp;
          int rt = sys == 0 ? ap * db + b : a * db + bp;
          int ct = sys == 0 ? a * db + bp : ap * db + b;
          out(rt, ct) = m(r, c);
        }
  return out;
}

StateClassVerdict is_separable_small(const DensityOperator& rho, double tol) {
  if (rho.dims.size() != 2)
    throw DimMismatch("is_separable_small: state not bipartite");
  StateClassVerdict v;
  v.tolerance_used = tol;
  Mat pt = partial_transpose(rho.mat, rho.dims, 1);
  HermitianEig eig = herm_eig(pt);
  double min_eig = eig.eigenvalues(eig.eigenvalues.size() - 1);
  v.gap = min_eig;
  bool ppt = min_eig >= -tol;
  const int da = rho.dims[0], db = rho.dims[1];
  bool exact = (da == 2 && db == 2) || (da == 2 && db == 3) ||
               (da == 3 && db == 2);
  if (!ppt) {
    v.cls = StateClass::Ent;
    v.member = true;  // certainly entangled
  } else if (exact) {
    v.cls = StateClass::Sep;
    v.member = true;
  } else {
    v.cls = StateClass::Sep;
    v.member = false;
    v.inconclusive = true;  // PPT-positive but dims beyond the exact range
  }
  return v;
}

namespace {

// Support projectors of the diagonal blocks, padded so they sum to the
// identity (the kernel of rho_B is absorbed into the first projector).
std::vector<Mat> block_support_pvm(const std::vector<Mat>& taus, int db) {
  std::vector<Mat> projectors;
  Mat accum = Mat::Zero(db, db);
  for (const Mat& tau : taus) {
    if (tau.norm() < 1e-13) continue;
    Mat p = support_projector(tau);
    // Orthogonalize against previously accepted supports to keep the PVM
    // exactly orthogonal under roundoff.
    Mat q = (Mat::Identity(db, db) - accum) * p * (Mat::Identity(db, db) - accum);
    if (q.norm() < 1e-12) continue;
    Mat sp = support_projector(q);
    projectors.push_back(sp);
    accum += sp;
  }
  if (projectors.empty()) projectors.push_back(Mat::Identity(db, db));
  Mat leftover = Mat::Identity(db, db) - accum;
  if (leftover.norm() > 1e-9)
    projectors.front() += support_projector(leftover);
  return projectors;
}

}  // namespace

StateClassVerdict is_mq(const DensityOperator& rho, double tol) {
  if (rho.dims.size() != 2) throw DimMismatch("is_mq: state not bipartite");
  StateClassVerdict v;
  v.cls = StateClass::MQ;
  v.tolerance_used = tol;

  DensityOperator abc = purify(rho);
  DensityOperator ac = abc.marginal({0, 2});
  StateClassVerdict cq = is_cq(ac, Side::A, tol);
  v.gap = cq.gap;
  v.degenerate_warning = cq.degenerate_warning;
  if (!cq.member) return v;

  // Read the block structure of rho_AB in the witness basis W.
  const Mat& w_full = *cq.witness_basis;
  const int da = rho.dims[0], db = rho.dims[1];
  std::vector<Mat> blocks(da * da);
  std::vector<Mat> taus(da);
  for (int j = 0; j < da; ++j)
    for (int k = 0; k < da; ++k) {
      Mat bj = kron(w_full.col(j).adjoint(), Mat::Identity(db, db));
      Mat bk = kron(w_full.col(k), Mat::Identity(db, db));
      blocks[j * da + k] = bj * rho.mat * bk;
    }
  for (int j = 0; j < da; ++j) taus[j] = blocks[j * da + j];

  // Drop register kets whose diagonal block vanishes.
  std::vector<int> kept;
  double tr_scale = std::max(rho.trace(), 1e-30);
  for (int j = 0; j < da; ++j)
    if (taus[j].trace().real() > 1e-12 * tr_scale) kept.push_back(j);

  std::vector<Mat> kept_taus;
  for (int j : kept) kept_taus.push_back(taus[j]);
  std::vector<Mat> projectors = block_support_pvm(kept_taus, db);
  if (projectors.size() != kept.size()) {
    // Supports were not mutually orthogonal: numerical degeneracy.
    throw InconsistentWitness("is_mq: block supports are not orthogonal");
  }

  Mat sigma = Mat::Zero(db, db);
  for (int j : kept)
    for (int k : kept) sigma += blocks[j * da + k];
  sigma = 0.5 * (sigma + sigma.adjoint());

  // MQ_1 reconstruction cross-check.
  Mat recon = Mat::Zero(rho.dim(), rho.dim());
  for (size_t j = 0; j < kept.size(); ++j)
    for (size_t k = 0; k < kept.size(); ++k) {
      Mat wjk = w_full.col(kept[j]) * w_full.col(kept[k]).adjoint();
      recon += kron(wjk, projectors[j] * sigma * projectors[k]);
    }
  double residual = (recon - rho.mat).norm();
  if (residual > 10.0 * tol)
    throw InconsistentWitness("is_mq: MQ1 reconstruction residual " +
                              std::to_string(residual));

  v.member = true;
  Mat w_kept(da, static_cast<int>(kept.size()));
  for (size_t j = 0; j < kept.size(); ++j) w_kept.col(j) = w_full.col(kept[j]);
  v.mq_witness = MqWitness{w_kept, projectors, sigma};
  v.witness_basis = w_full;
  return v;
}

}  // namespace qcorr
