#include "qcorr/linalg.hpp"

#include <cmath>

namespace qcorr {

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  double scale = m.norm();
  if (scale == 0.0) return true;
  return (m - m.adjoint()).norm() <= tol * scale;
}

HermitianEig herm_eig(const Mat& m) {
  if (m.rows() != m.cols()) throw DimMismatch("herm_eig: matrix not square");
  if (!m.allFinite()) throw DomainError("herm_eig: non-finite entries");
  double scale = m.norm();
  if (scale > 0.0 && (m - m.adjoint()).norm() > 1e-8 * scale)
    throw NonHermitian("herm_eig: matrix is not Hermitian");
  Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  if (solver.info() != Eigen::Success)
    throw DomainError("herm_eig: eigensolver failed");
  const int n = static_cast<int>(h.rows());
  HermitianEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i)
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  return out;
}

Mat mat_func(const Mat& m, const std::function<double(double)>& f,
             bool support_only) {
  HermitianEig eig = herm_eig(m);
  const int n = static_cast<int>(eig.eigenvalues.size());
  double lmax = 0.0;
  for (int i = 0; i < n; ++i)
    lmax = std::max(lmax, std::abs(eig.eigenvalues(i)));
  RVec mapped(n);
  for (int i = 0; i < n; ++i) {
    double lam = eig.eigenvalues(i);
    if (support_only && std::abs(lam) <= kSupportCutoff * lmax) {
      mapped(i) = 0.0;
      continue;
    }
    double y = f(lam);
    if (!std::isfinite(y))
      throw DomainError("mat_func: f undefined on retained eigenvalue " +
                        std::to_string(lam));
    mapped(i) = y;
  }
  return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

std::vector<int> make_strides(const std::vector<int>& dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    strides[i] = strides[i + 1] * dims[i + 1];
  return strides;
}

}  // namespace

Mat partial_trace(const Mat& m, const std::vector<int>& dims,
                  const std::vector<int>& keep) {
  const int total = product(dims);
  if (m.rows() != total || m.cols() != total)
    throw DimMismatch("partial_trace: dims do not match matrix size");
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimMismatch("partial_trace: bad keep index");
    kept[k] = true;
  }
  std::vector<int> traced;
  for (int i = 0; i < n; ++i)
    if (!kept[i]) traced.push_back(i);

  std::vector<int> strides = make_strides(dims);
  int keep_dim = 1;
  for (int k : keep) keep_dim *= dims[k];
  int trace_dim = 1;
  for (int t : traced) trace_dim *= dims[t];

  // Row-major offset of a (keep-multi-index, traced-multi-index) pair.
  auto offset = [&](int keep_lin, int trace_lin) {
    int off = 0;
    for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
      off += (keep_lin % dims[keep[i]]) * strides[keep[i]];
      keep_lin /= dims[keep[i]];
    }
    for (int i = static_cast<int>(traced.size()) - 1; i >= 0; --i) {
      off += (trace_lin % dims[traced[i]]) * strides[traced[i]];
      trace_lin /= dims[traced[i]];
    }
    return off;
  };

  Mat out = Mat::Zero(keep_dim, keep_dim);
  for (int r = 0; r < keep_dim; ++r)
    for (int c = 0; c < keep_dim; ++c) {
      Cplx sum = 0.0;
      for (int t = 0; t < trace_dim; ++t) sum += m(offset(r, t), offset(c, t));
      out(r, c) = sum;
    }
  return out;
}

Mat permute_subsystems(const Mat& m, const std::vector<int>& dims,
                       const std::vector<int>& perm) {
  const int total = product(dims);
  if (m.rows() != total || m.cols() != total)
    throw DimMismatch("permute_subsystems: dims do not match matrix size");
  if (perm.size() != dims.size())
    throw DimMismatch("permute_subsystems: perm size mismatch");
  const int n = static_cast<int>(dims.size());
  std::vector<int> old_strides = make_strides(dims);
  std::vector<int> new_dims(n);
  for (int i = 0; i < n; ++i) new_dims[i] = dims[perm[i]];
  std::vector<int> new_strides = make_strides(new_dims);

  // new linear index -> old linear index
  std::vector<int> map(total);
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx, old_idx = 0;
    for (int i = 0; i < n; ++i) {
      int digit = rem / new_strides[i];
      rem %= new_strides[i];
      old_idx += digit * old_strides[perm[i]];
    }
    map[idx] = old_idx;
  }
  Mat out(total, total);
  for (int r = 0; r < total; ++r)
    for (int c = 0; c < total; ++c) out(r, c) = m(map[r], map[c]);
  return out;
}

Mat support_projector(const Mat& psd) {
  HermitianEig eig = herm_eig(psd);
  double lmax = eig.eigenvalues.size() ? std::abs(eig.eigenvalues(0)) : 0.0;
  Mat proj = Mat::Zero(psd.rows(), psd.cols());
  for (int i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > kSupportCutoff * lmax && eig.eigenvalues(i) > 0)
      proj += eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
  return proj;
}

Mat pinv_pow(const Mat& psd, double exponent) {
  return mat_func(
      psd, [exponent](double x) { return std::pow(std::max(x, 0.0), exponent); },
      /*support_only=*/true);
}

double fidelity(const Mat& p, const Mat& q) {
  Mat sp = pinv_pow(p, 0.5);
  HermitianEig eig = herm_eig(sp * q * sp);
  double f = 0.0;
  for (int i = 0; i < eig.eigenvalues.size(); ++i)
    f += std::sqrt(std::max(eig.eigenvalues(i), 0.0));
  return f;
}

double entropy_bits(const Mat& rho) {
  HermitianEig eig = herm_eig(rho);
  double lmax = eig.eigenvalues.size() ? std::abs(eig.eigenvalues(0)) : 0.0;
  double h = 0.0;
  for (int i = 0; i < eig.eigenvalues.size(); ++i) {
    double lam = eig.eigenvalues(i);
    if (lam > kSupportCutoff * lmax) h -= lam * std::log2(lam);
  }
  return h;
}

double fro_norm(const Mat& m) { return m.norm(); }

double lambda_max(const Mat& m) {
  HermitianEig eig = herm_eig(m);
  return eig.eigenvalues(0);
}

double support_leak(const Mat& p, const Mat& q) {
  double tp = p.trace().real();
  if (tp <= 0.0) return 0.0;
  Mat pi_q = support_projector(q);
  Mat off = p - pi_q * p * pi_q;
  double leak = off.trace().real();
  return std::max(leak, 0.0) / tp;
}

}  // namespace qcorr
