#pragma once

#include "qcorr/correlations.hpp"

namespace qcorr {

// Epsilon-ball in purified distance, optionally restricted to a support
// projector and/or pure candidates.
struct BallSpec {
  double epsilon = 0.0;
  enum class Restriction {
    full,
    support_projector,
    pure_only,
    pure_and_projector
  } restriction = Restriction::full;
  Mat projector;  // required for projector restrictions

  static BallSpec eps(double e) { return BallSpec{e, Restriction::full, {}}; }
  static BallSpec restricted(double e, Mat pi) {
    return BallSpec{e, Restriction::support_projector, std::move(pi)};
  }
};

// P(rho, sigma) = sqrt(1 - Fbar^2) with the generalized fidelity
// Fbar = F + sqrt((1 - Tr rho)(1 - Tr sigma)), on subnormalized PSD inputs.
double purified_distance(const Mat& rho, const Mat& sigma);

bool ball_membership(const DensityOperator& center,
                     const DensityOperator& candidate, const BallSpec& spec);

struct SmoothOptions {
  int outer_starts = 2;
  int outer_iters = 0;  // 0: scale with parameter count
  int samples = 8;      // sampled ball candidates for measure evaluation
  std::uint64_t seed = 0;
  double simplex_tol = 1e-7;
  Mat init_state;  // optional warm candidate (previous grid point's optimum)
};

struct SmoothResult {
  double value = 0.0;
  DensityOperator optimal_state;
  BallSpec ball_used;
  enum class Certified { exact_eps0, local_optimum } certified =
      Certified::local_optimum;
  OptimDiag diag;
  double bracket_lower = 0.0;  // used by the entanglement measures
  bool has_bracket = false;
};

enum class SmoothWhich { min_entropy, max_entropy };

// Smooth min-/max-entropy of A conditioned on the second factor: H_min is
// maximized and H_max minimized over the ball. Candidates come from the
// restricted-projector parametrization when the spec carries a projector,
// otherwise from a purification perturbation. The center is always a
// candidate, so the eps = 0 value is never missed.
SmoothResult smooth_cond_entropy(SmoothWhich which, const DensityOperator& rho,
                                 const BallSpec& spec,
                                 const SmoothOptions& opts = {});

enum class SmoothMeasureKind {
  e_max,
  delta_arrow_max,
  delta_2way_max,
  e_fid,
  delta_arrow_fid,
  delta_2way_fid
};

// Smooth correlation measures: the max family is minimized over the ball, the
// fid family maximized. Entanglement entries carry the hierarchy bracket
// (-H_min side) instead of a direct Sep minimization.
SmoothResult smooth_measure(SmoothMeasureKind which, const DensityOperator& rho,
                            const BallSpec& spec,
                            const SmoothOptions& opts = {});

enum class SmoothFamily { dmax_family, dfid_family };

// Theorem-6 certification over the restricted ball of a premeasurement state:
// lower = -(smooth conditional entropy), upper = divergence to the projected
// CC candidate at the ball optimum. Collapsed iff |gap| <= tol.
CollapseCertificate certify_smooth_collapse(const PremeasurementState& pm,
                                            double epsilon, double tol,
                                            SmoothFamily family,
                                            const SmoothOptions& opts = {});

enum class MonotoneInstanceKind {
  identity_channel,
  local_isometry,
  appended_ancilla_trace
};

struct MonotoneInstance {
  DensityOperator rho;  // bipartite state the claim is evaluated on
  MonotoneInstanceKind kind = MonotoneInstanceKind::identity_channel;
  Mat iso_a, iso_b;     // local isometries (local_isometry)
  int ancilla_dim = 2;  // appended to the B side (appended_ancilla_trace)
  double epsilon = 0.05;
};

enum class WhichSmoothEnt { e_max_smooth, e_fid_smooth };

// Slack of the claimed monotonicity/invariance at the evaluated points, with
// the same search budget on both sides. Positive slack = inequality satisfied;
// equalities report -|difference|.
double check_smooth_monotonicity(WhichSmoothEnt which,
                                 const MonotoneInstance& inst,
                                 const SmoothOptions& opts = {});

}  // namespace qcorr
