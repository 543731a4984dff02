#pragma once

#include "qcorr/states.hpp"

namespace qcorr {

// Projective measurement: orthogonal projectors summing to the identity.
struct Pvm {
  std::vector<Mat> projectors;

  int dim() const { return projectors.empty() ? 0 : static_cast<int>(projectors[0].rows()); }
  int outcomes() const { return static_cast<int>(projectors.size()); }
  void validate(double tol = 1e-10) const;
};

// General measurement: PSD elements summing to the identity.
struct Povm {
  std::vector<Mat> elements;

  int dim() const { return elements.empty() ? 0 : static_cast<int>(elements[0].rows()); }
  int outcomes() const { return static_cast<int>(elements.size()); }
  void validate(double tol = 1e-10) const;
};

// V = sum_j |W_j> (x) X_j, an isometry H_S -> H_M (x) H_S.
struct PremeasurementIsometry {
  Mat v;        // (m * d_S) x d_S
  Mat basis_w;  // d_M x m columns, orthonormal
  Pvm pvm;

  int register_dim() const { return static_cast<int>(basis_w.cols()); }
  int system_dim() const { return pvm.dim(); }
};

// An MQ state carried with its generating triple.
struct PremeasurementState {
  DensityOperator state;  // on M_X (x) S
  Mat basis_w;
  Pvm pvm;
  Mat sigma_s;

  Mat isometry() const;
};

// Builds the controlled-shift isometry from a register basis (columns of w)
// and a PVM with matching outcome count.
PremeasurementIsometry build_isometry(const Mat& w, const Pvm& x);

// V rho_S V^dag with the generating triple attached.
PremeasurementState premeasure(const DensityOperator& rho_s,
                               const PremeasurementIsometry& v);

// Minimal Naimark dilation: an ancilla of dimension = outcome count, the
// embedding isometry iota|psi> = sum_j sqrt(E_j)|psi> (x) |j>, and the ancilla
// PVM {I (x) |j><j|}; iota^dag P_j iota = E_j. Already-projective POVMs come
// back unchanged with an identity embedding.
struct NaimarkExtension {
  Pvm pvm;       // on the extended space
  Mat embedding; // isometry H -> H_ext
  bool trivial = false;
};
NaimarkExtension naimark_extend(const Povm& povm);

// |Z_k> = sum_j omega^{jk}/sqrt(d) |W_j>, omega = exp(2 pi i / d).
Mat fourier_basis(const Mat& w);

// Petz recovery map for the dephasing channel E_Z(.) = sum_k P_k . P_k in the
// z basis, built for a fixed sigma. apply() throws SupportError when the input
// has weight outside supp(E_Z(sigma)).
struct PetzMap {
  Mat z_basis;
  Mat sqrt_sigma;
  Mat einv_sqrt;       // E_Z(sigma)^{-1/2} on its support
  Mat support;         // projector onto supp(E_Z(sigma))

  Mat channel(const Mat& rho) const;  // E_Z
  Mat apply(const Mat& rho) const;    // recovery
};
PetzMap petz_map(const Mat& sigma, const Mat& z_basis);

// Eq.-(68)-style minimum-uncertainty-state reconstruction from the W and
// Fourier-conjugate conditional operators. Throws NotMUS when the rebuilt
// operator differs from the input beyond tol.
DensityOperator mus_reconstruct(const DensityOperator& rho_ab, const Mat& w,
                                double tol = 1e-6);

// tau_{B,j} = Tr_A[(|W_j><W_j| (x) I) rho] (side = A) or the mirrored version.
std::vector<Mat> conditional_operators(const DensityOperator& rho,
                                       const Mat& basis, Side side);
std::vector<Mat> conditional_operators(const DensityOperator& rho,
                                       const Pvm& pvm, Side side);

// Convenience PVMs.
Pvm basis_pvm(const Mat& basis);
Pvm pauli_pvm(char axis);  // 'x', 'y', or 'z' on a qubit

}  // namespace qcorr
