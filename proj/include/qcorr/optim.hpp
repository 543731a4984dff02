#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "qcorr/types.hpp"

namespace qcorr {

using Rng = std::mt19937_64;

using Objective = std::function<double(const RVec&)>;

struct NmOptions {
  int max_iters = 4000;
  double diameter_tol = 1e-9;  // convergence: simplex diameter below this
  double init_step = 0.25;
};

struct NmResult {
  RVec x;
  double fval = 0.0;
  int iters = 0;
  bool converged = false;
};

// Derivative-free Nelder-Mead simplex minimization.
NmResult nelder_mead(const Objective& f, const RVec& x0, const NmOptions& opts = {});

struct MultistartOptions {
  int starts = 8;
  std::uint64_t seed = 0;
  double start_spread = 0.7;  // scale of random perturbations around warm starts
  bool polish = true;         // shrinking-simplex restarts at the winner
  NmOptions nm;
};

struct MultistartResult {
  RVec x;
  double fval = 0.0;
  int total_iters = 0;
  int converged_starts = 0;
  int best_start = -1;
  int restarts = 0;
};

// Runs Nelder-Mead from each warm start plus seeded random perturbations.
// Deterministic for a fixed seed: each start owns a derived seed and ties are
// broken by lowest start index.
MultistartResult multistart_minimize(const Objective& f,
                                     const std::vector<RVec>& warm_starts,
                                     int dim, const MultistartOptions& opts);

// d x d unitary exp(i H(theta)), theta holding d real diagonal entries followed
// by Re/Im pairs for the strict upper triangle (d^2 parameters total).
Mat unitary_from_params(const RVec& theta, int d);
int unitary_param_count(int d);

// Lower-triangular complex factor from d^2 real parameters: positive... the
// diagonal entries are real, strict lower triangle Re/Im pairs. LL^dag is PSD.
Mat cholesky_factor_from_params(const RVec& theta, int d);
int cholesky_param_count(int d);

// Parameters reproducing (approximately) a given PSD matrix via its Cholesky
// factor; usable as a warm start. A small ridge keeps the factorization stable.
RVec params_from_psd(const Mat& psd);

// Probability vector from unconstrained parameters (softmax).
RVec simplex_from_params(const RVec& theta);

RVec random_params(int dim, double scale, Rng& rng);

}  // namespace qcorr
