#pragma once

#include <functional>

#include "qcorr/types.hpp"

namespace qcorr {

// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order,
// eigenvectors as unitary columns. Reconstruction residual is bounded by
// 1e-10 * ||m||_F.
struct HermitianEig {
  RVec eigenvalues;
  Mat eigenvectors;

  Mat reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
  }
};

// Throws NonHermitian if ||m - m^dag||_F > 1e-8 * ||m||_F; the input is
// symmetrized before decomposition.
HermitianEig herm_eig(const Mat& m);

// f applied to the eigenvalues of a Hermitian m. With support_only, eigenvalues
// at or below kSupportCutoff * lambda_max map to 0 without passing through f
// (pseudo-function on the support). Throws DomainError if f is not finite on a
// retained eigenvalue.
Mat mat_func(const Mat& m, const std::function<double(double)>& f,
             bool support_only = false);

Mat kron(const Mat& a, const Mat& b);

// Traces out every subsystem not listed in keep; keep preserves its order.
Mat partial_trace(const Mat& m, const std::vector<int>& dims,
                  const std::vector<int>& keep);

// Reorders tensor factors: entry perm[i] gives the old position of the factor
// now at slot i.
Mat permute_subsystems(const Mat& m, const std::vector<int>& dims,
                       const std::vector<int>& perm);

// Projector onto the eigenspaces of a PSD matrix above the support cutoff.
Mat support_projector(const Mat& psd);

// Pseudo-power on the support: eigenvalues below cutoff map to 0.
Mat pinv_pow(const Mat& psd, double exponent);

// Uhlmann fidelity Tr[(sqrt(p) q sqrt(p))^{1/2}] for PSD p, q.
double fidelity(const Mat& p, const Mat& q);

// -sum lambda log2 lambda over eigenvalues above the support cutoff.
double entropy_bits(const Mat& rho);

double fro_norm(const Mat& m);

// Largest eigenvalue of a Hermitian matrix.
double lambda_max(const Mat& m);

bool is_hermitian(const Mat& m, double tol = 1e-8);

// Weight of p lying outside supp(q), relative to Tr(p).
double support_leak(const Mat& p, const Mat& q);

}  // namespace qcorr
