#include "qcorr/premeasurement.hpp"

#include <cmath>
#include <numbers>

namespace qcorr {

void Pvm::validate(double tol) const {
  if (projectors.empty()) throw DimMismatch("Pvm: empty");
  const int d = dim();
  Mat sum = Mat::Zero(d, d);
  for (size_t j = 0; j < projectors.size(); ++j) {
    const Mat& x = projectors[j];
    if (x.rows() != d || x.cols() != d) throw DimMismatch("Pvm: ragged dims");
    if ((x * x - x).norm() > tol) throw DomainError("Pvm: not a projector");
    for (size_t k = j + 1; k < projectors.size(); ++k)
      if ((x * projectors[k]).norm() > tol)
        throw DomainError("Pvm: projectors not orthogonal");
    sum += x;
  }
  if ((sum - Mat::Identity(d, d)).norm() > tol)
    throw DomainError("Pvm: projectors do not sum to identity");
}

void Povm::validate(double tol) const {
  if (elements.empty()) throw DimMismatch("Povm: empty");
  const int d = dim();
  Mat sum = Mat::Zero(d, d);
  for (const Mat& e : elements) {
    if (e.rows() != d || e.cols() != d) throw DimMismatch("Povm: ragged dims");
    HermitianEig eig = herm_eig(e);
    if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -tol)
      throw NotPSD("Povm: element not PSD");
    sum += e;
  }
  if ((sum - Mat::Identity(d, d)).norm() > tol)
    throw DomainError("Povm: elements do not sum to identity");
}

Mat PremeasurementState::isometry() const {
  const int m = static_cast<int>(basis_w.cols());
  const int ds = pvm.dim();
  const int dm = static_cast<int>(basis_w.rows());
  Mat v = Mat::Zero(dm * ds, ds);
  for (int j = 0; j < m; ++j) v += kron(basis_w.col(j), pvm.projectors[j]);
  return v;
}

PremeasurementIsometry build_isometry(const Mat& w, const Pvm& x) {
  if (static_cast<int>(w.cols()) != x.outcomes())
    throw SizeMismatch("build_isometry: |w| != |x|");
  if ((w.adjoint() * w - Mat::Identity(w.cols(), w.cols())).norm() > 1e-10)
    throw NonOrthonormalBasis("build_isometry: w not orthonormal");
  x.validate();
  const int m = static_cast<int>(w.cols());
  const int dm = static_cast<int>(w.rows());
  const int ds = x.dim();
  Mat v = Mat::Zero(dm * ds, ds);
  for (int j = 0; j < m; ++j) v += kron(w.col(j), x.projectors[j]);
  if ((v.adjoint() * v - Mat::Identity(ds, ds)).norm() > 1e-10)
    throw DomainError("build_isometry: V^dag V != I");
  return PremeasurementIsometry{v, w, x};
}

PremeasurementState premeasure(const DensityOperator& rho_s,
                               const PremeasurementIsometry& v) {
  if (rho_s.dim() != v.system_dim())
    throw DimMismatch("premeasure: system dimension mismatch");
  Mat out = v.v * rho_s.mat * v.v.adjoint();
  out = 0.5 * (out + out.adjoint());
  DensityOperator state{
      out,
      {static_cast<int>(v.basis_w.rows()), v.system_dim()},
      rho_s.trace_mode};
  state.validate();
  return PremeasurementState{state, v.basis_w, v.pvm, rho_s.mat};
}

NaimarkExtension naimark_extend(const Povm& povm) {
  povm.validate();
  const int d = povm.dim();
  const int n = povm.outcomes();

  // Already projective and orthogonal: nothing to extend.
  bool projective = true;
  for (const Mat& e : povm.elements)
    if ((e * e - e).norm() > 1e-10) projective = false;
  if (projective) {
    for (int j = 0; j < n && projective; ++j)
      for (int k = j + 1; k < n && projective; ++k)
        if ((povm.elements[j] * povm.elements[k]).norm() > 1e-10)
          projective = false;
  }
  if (projective)
    return NaimarkExtension{Pvm{povm.elements}, Mat::Identity(d, d), true};

  Mat iota = Mat::Zero(d * n, d);
  for (int j = 0; j < n; ++j) {
    Mat root = pinv_pow(povm.elements[j], 0.5);
    Vec ej = Vec::Zero(n);
    ej(j) = 1.0;
    iota += kron(root, ej);  // |psi> -> sum_j sqrt(E_j)|psi> (x) |j>
  }
  Pvm extended;
  for (int j = 0; j < n; ++j) {
    Mat pj = Mat::Zero(n, n);
    pj(j, j) = 1.0;
    extended.projectors.push_back(kron(Mat::Identity(d, d), pj));
  }
  return NaimarkExtension{extended, iota, false};
}

Mat fourier_basis(const Mat& w) {
  const int d = static_cast<int>(w.cols());
  Mat f(d, d);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      f(j, k) = std::exp(Cplx(0.0, two_pi * j * k / d)) / std::sqrt(double(d));
  return w * f;
}

Mat PetzMap::channel(const Mat& rho) const {
  const int d = static_cast<int>(z_basis.cols());
  Mat out = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    Mat pk = z_basis.col(k) * z_basis.col(k).adjoint();
    out += pk * rho * pk;
  }
  return out;
}

Mat PetzMap::apply(const Mat& rho) const {
  double tr = rho.trace().real();
  if (tr > 0.0) {
    Mat off = rho - support * rho * support;
    if (off.trace().real() / tr > 1e-8)
      throw SupportError("PetzMap: input outside supp(E(sigma))");
  }
  Mat inner = einv_sqrt * rho * einv_sqrt;
  return sqrt_sigma * channel(inner) * sqrt_sigma;
}

PetzMap petz_map(const Mat& sigma, const Mat& z_basis) {
  HermitianEig eig = herm_eig(sigma);
  if (eig.eigenvalues(eig.eigenvalues.size() - 1) < -1e-10)
    throw NotPSD("petz_map: sigma not PSD");
  PetzMap map;
  map.z_basis = z_basis;
  map.sqrt_sigma = pinv_pow(sigma, 0.5);
  Mat esigma = map.channel(sigma);
  map.einv_sqrt = pinv_pow(esigma, -0.5);
  map.support = support_projector(esigma);
  return map;
}

std::vector<Mat> conditional_operators(const DensityOperator& rho,
                                       const Mat& basis, Side side) {
  Pvm pvm;
  for (int j = 0; j < basis.cols(); ++j)
    pvm.projectors.push_back(basis.col(j) * basis.col(j).adjoint());
  return conditional_operators(rho, pvm, side);
}

std::vector<Mat> conditional_operators(const DensityOperator& rho,
                                       const Pvm& pvm, Side side) {
  if (rho.dims.size() != 2)
    throw DimMismatch("conditional_operators: state not bipartite");
  const int measured = side == Side::A ? 0 : 1;
  const int other = 1 - measured;
  std::vector<Mat> taus;
  const Mat id_other = Mat::Identity(rho.dims[other], rho.dims[other]);
  for (const Mat& proj : pvm.projectors) {
    Mat big = measured == 0 ? kron(proj, id_other) : kron(id_other, proj);
    taus.push_back(partial_trace(big * rho.mat, rho.dims, {other}));
  }
  return taus;
}

DensityOperator mus_reconstruct(const DensityOperator& rho_ab, const Mat& w,
                                double tol) {
  if (rho_ab.dims.size() != 2)
    throw DimMismatch("mus_reconstruct: state not bipartite");
  const int da = rho_ab.dims[0], db = rho_ab.dims[1];
  if (static_cast<int>(w.cols()) != da)
    throw DimMismatch("mus_reconstruct: |w| != dim A");

  Mat z = fourier_basis(w);
  std::vector<Mat> tau_w = conditional_operators(rho_ab, w, Side::A);
  std::vector<Mat> tau_z = conditional_operators(rho_ab, z, Side::A);
  Mat rho_b = partial_trace(rho_ab.mat, rho_ab.dims, {1});
  Mat rb_inv_sqrt = pinv_pow(rho_b, -0.5);

  std::vector<Mat> roots(da);
  for (int j = 0; j < da; ++j) roots[j] = pinv_pow(tau_w[j], 0.5);

  // The k-sum carries weight 1, not 1/d: the diagonal blocks must come back
  // as tau^W_j via sum_k tau^Z_k = rho_B, which fixes the normalization.
  const double two_pi = 2.0 * std::numbers::pi;
  Mat recon = Mat::Zero(rho_ab.dim(), rho_ab.dim());
  for (int j = 0; j < da; ++j)
    for (int jp = 0; jp < da; ++jp) {
      Mat mid = Mat::Zero(db, db);
      for (int k = 0; k < da; ++k) {
        Cplx phase = std::exp(Cplx(0.0, two_pi * (j - jp) * k / da));
        mid += phase * tau_z[k];
      }
      Mat block = roots[j] * rb_inv_sqrt * mid * rb_inv_sqrt * roots[jp];
      recon += kron(w.col(j) * w.col(jp).adjoint(), block);
    }
  recon = 0.5 * (recon + recon.adjoint());

  double residual = (recon - rho_ab.mat).norm();
  if (residual > tol)
    throw NotMUS("mus_reconstruct: residual " + std::to_string(residual));
  DensityOperator out{recon, rho_ab.dims, rho_ab.trace_mode};
  return out;
}

Pvm basis_pvm(const Mat& basis) {
  Pvm pvm;
  for (int j = 0; j < basis.cols(); ++j)
    pvm.projectors.push_back(basis.col(j) * basis.col(j).adjoint());
  return pvm;
}

Pvm pauli_pvm(char axis) {
  Mat basis(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  switch (axis) {
    case 'z':
      basis << 1, 0, 0, 1;
      break;
    case 'x':
      basis << s, s, s, -s;
      break;
    case 'y':
      basis << s, s, Cplx(0, s), Cplx(0, -s);
      break;
    default:
      throw DomainError("pauli_pvm: axis must be x, y, or z");
  }
  return basis_pvm(basis);
}

}  // namespace qcorr
