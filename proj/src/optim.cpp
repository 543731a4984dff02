#include "qcorr/optim.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/linalg.hpp"

namespace qcorr {

NmResult nelder_mead(const Objective& f, const RVec& x0, const NmOptions& opts) {
  const int n = static_cast<int>(x0.size());
  NmResult res;
  if (n == 0) {
    res.x = x0;
    res.fval = f(x0);
    res.converged = true;
    return res;
  }

  std::vector<RVec> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1](i) += opts.init_step;
  for (int i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return vals[a] < vals[b]; });
    std::vector<RVec> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = vals[idx[i]];
    }
    pts.swap(p2);
    vals.swap(v2);
  };

  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    order();
    double diameter = 0.0;
    for (int i = 1; i <= n; ++i)
      diameter = std::max(diameter, (pts[i] - pts[0]).lpNorm<Eigen::Infinity>());
    if (diameter < opts.diameter_tol) {
      res.converged = true;
      break;
    }

    RVec centroid = RVec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= n;

    RVec xr = centroid + (centroid - pts[n]);
    double fr = f(xr);
    if (fr < vals[0]) {
      RVec xe = centroid + 2.0 * (centroid - pts[n]);
      double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      bool outside = fr < vals[n];
      RVec xc = outside ? RVec(centroid + 0.5 * (xr - centroid))
                        : RVec(centroid - 0.5 * (centroid - pts[n]));
      double fc = f(xc);
      if (fc < std::min(fr, vals[n])) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  order();
  res.x = pts[0];
  res.fval = vals[0];
  res.iters = iter;
  return res;
}

MultistartResult multistart_minimize(const Objective& f,
                                     const std::vector<RVec>& warm_starts,
                                     int dim, const MultistartOptions& opts) {
  MultistartResult best;
  best.fval = std::numeric_limits<double>::infinity();
  int n_starts = std::max<int>(opts.starts, static_cast<int>(warm_starts.size()));
  for (int s = 0; s < n_starts; ++s) {
    Rng rng(opts.seed ^ (0x9e3779b97f4a7c15ULL * (s + 1)));
    RVec x0;
    if (s < static_cast<int>(warm_starts.size())) {
      x0 = warm_starts[s];
    } else if (!warm_starts.empty()) {
      x0 = warm_starts[s % warm_starts.size()] +
           random_params(dim, opts.start_spread, rng);
    } else {
      x0 = random_params(dim, opts.start_spread, rng);
    }
    NmResult r = nelder_mead(f, x0, opts.nm);
    best.total_iters += r.iters;
    if (r.converged) ++best.converged_starts;
    if (r.fval < best.fval) {
      best.fval = r.fval;
      best.x = r.x;
      best.best_start = s;
    }
  }
  best.restarts = n_starts;
  if (!opts.polish) return best;
  // Polish: fresh shrinking simplexes at the winner escape premature collapse
  // (the objectives here can have eigenvalue-crossing kinks near the optimum).
  for (double step : {2e-3, 5e-5, 1e-6}) {
    NmOptions polish = opts.nm;
    polish.init_step = step;
    polish.max_iters = std::max(opts.nm.max_iters / 2, 200);
    NmResult r = nelder_mead(f, best.x, polish);
    best.total_iters += r.iters;
    if (r.fval < best.fval) {
      best.fval = r.fval;
      best.x = r.x;
    }
  }
  return best;
}

int unitary_param_count(int d) { return d * d; }

Mat unitary_from_params(const RVec& theta, int d) {
  if (theta.size() != d * d)
    throw DimMismatch("unitary_from_params: wrong parameter count");
  Mat h = Mat::Zero(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) h(i, i) = theta(k++);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Cplx v(theta(k), theta(k + 1));
      k += 2;
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  HermitianEig eig = herm_eig(h);
  Vec phases(d);
  for (int i = 0; i < d; ++i)
    phases(i) = std::exp(Cplx(0.0, eig.eigenvalues(i)));
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

int cholesky_param_count(int d) { return d * d; }

Mat cholesky_factor_from_params(const RVec& theta, int d) {
  if (theta.size() != d * d)
    throw DimMismatch("cholesky_factor_from_params: wrong parameter count");
  Mat l = Mat::Zero(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) l(i, i) = theta(k++);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j) {
      l(i, j) = Cplx(theta(k), theta(k + 1));
      k += 2;
    }
  return l;
}

RVec params_from_psd(const Mat& psd) {
  const int d = static_cast<int>(psd.rows());
  Mat ridge = psd + 1e-12 * psd.trace().real() * Mat::Identity(d, d) +
              1e-14 * Mat::Identity(d, d);
  Eigen::LLT<Mat> llt(ridge);
  Mat l = llt.matrixL();
  RVec theta(d * d);
  int k = 0;
  for (int i = 0; i < d; ++i) theta(k++) = l(i, i).real();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j) {
      theta(k++) = l(i, j).real();
      theta(k++) = l(i, j).imag();
    }
  return theta;
}

RVec simplex_from_params(const RVec& theta) {
  const int n = static_cast<int>(theta.size());
  double m = theta.maxCoeff();
  RVec p(n);
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    p(i) = std::exp(theta(i) - m);
    z += p(i);
  }
  return p / z;
}

RVec random_params(int dim, double scale, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, scale);
  RVec x(dim);
  for (int i = 0; i < dim; ++i) x(i) = gauss(rng);
  return x;
}

}  // namespace qcorr
