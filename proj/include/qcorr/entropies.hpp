#pragma once

#include "qcorr/divergences.hpp"
#include "qcorr/premeasurement.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

struct OptimDiag {
  int iterations = 0;
  int restarts = 0;
  int converged_starts = 0;
  int best_start = -1;
  bool converged = true;
};

struct CondEntropyResult {
  double value = 0.0;  // bits
  Mat optimal_sigma_b;
  enum class Method { closed_form, parametrized_search } method =
      Method::closed_form;
  OptimDiag diag;
};

struct CondEntropyOptions {
  bool force_search = false;  // run the optimizer even for the von Neumann kind
  int multistarts = 8;
  int max_iters = 0;          // 0: scale with parameter count
  double simplex_tol = 1e-9;
  std::uint64_t seed = 0;
  std::vector<Mat> extra_starts;  // additional sigma_B warm starts
  bool lean = false;  // warm starts only (carried sigma_B plus the marginal)
};

// H_K(A|B) = max_sigma_B [-D_K(rho_AB || I (x) sigma_B)] over normalized
// sigma_B, Eq.-style. conditioned_on selects which factor plays B. The von
// Neumann kind uses the closed form H(AB) - H(B); the rest run a multi-start
// Nelder-Mead over a Cholesky parametrization of sigma_B.
CondEntropyResult cond_entropy(const DivergenceKind& kind,
                               const DensityOperator& rho, int conditioned_on,
                               const CondEntropyOptions& opts = {});

enum class DualPair { vn_vn, min_max };

// |H_K(A|B) + H_Khat(A|C)| on a pure tripartite state; throws NotPure.
double dual_entropy_check(DualPair pair, const DensityOperator& rho_abc,
                          const CondEntropyOptions& opts = {});

// H(X|E): premeasure the S factor of rho_SE with x, trace out S, condition on
// E. rho must have dims [dS, dE]; a trivial E (dE = 1) gives the unconditioned
// uncertainty.
double uncertainty_given_memory(const DensityOperator& rho_se, const Pvm& x,
                                const DivergenceKind& kind,
                                const CondEntropyOptions& opts = {});

// State on M_X (x) E after premeasuring S and discarding it.
DensityOperator premeasured_register_env(const DensityOperator& rho_se,
                                         const Pvm& x);

}  // namespace qcorr
