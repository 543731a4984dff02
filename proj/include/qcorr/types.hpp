#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Eigenvalues at or below kSupportCutoff * lambda_max are treated as zero
// everywhere (support projectors, pseudo-inverses, 0*log 0 filtering).
inline constexpr double kSupportCutoff = 1e-10;

// Relative weight of p outside supp(q) above which supp(p) is not considered
// contained in supp(q).
inline constexpr double kSupportLeakTol = 1e-9;

// Objective value standing in for +infinity inside derivative-free searches.
inline constexpr double kInfObjective = 1e12;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define QCORR_ERROR(name)                       \
  struct name : Error {                         \
    using Error::Error;                         \
  }

QCORR_ERROR(NonHermitian);
QCORR_ERROR(DomainError);
QCORR_ERROR(DimMismatch);
QCORR_ERROR(NotPSD);
QCORR_ERROR(ZeroOperator);
QCORR_ERROR(SizeMismatch);
QCORR_ERROR(NonOrthonormalBasis);
QCORR_ERROR(NotPure);
QCORR_ERROR(NotMQ);
QCORR_ERROR(NotMUS);
QCORR_ERROR(SupportError);
QCORR_ERROR(InconsistentWitness);
QCORR_ERROR(HypothesisViolated);
QCORR_ERROR(DimTooLarge);
QCORR_ERROR(RangeError);

#undef QCORR_ERROR

inline int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

}  // namespace qcorr
