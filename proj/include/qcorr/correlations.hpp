#pragma once

#include "qcorr/entropies.hpp"

namespace qcorr {

// Per-measure value or bracket, in bits. Search-based entries are best-found
// upper bounds with a hierarchy lower anchor; exact entries have lower ==
// upper.
struct MeasureReport {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  bool computable = true;  // false: asymptotic entry bracketed by its neighbors
  std::string provenance;  // closed_form | search_upper_bound | collapse_exact |
                           // sep_certified | bracketed_by_theorem
  OptimDiag diag;
  bool nonconvergence = false;

  double value() const { return upper; }
  double width() const { return upper - lower; }
};

struct CollapseCertificate {
  std::string state_id;
  DivergenceKind kind;
  bool applicable = true;  // is_mq verdict held
  double lower = 0.0;      // -H_K(M_X|S)
  double upper = 0.0;      // D_K against the candidate CC state
  double gap = 0.0;        // upper - lower
  bool collapsed = false;
  double tol = 0.0;
  std::vector<std::string> collapsed_measures;
  // Filled when not applicable: the Eq.-(40)-style strictness report.
  double delta_ac_gap = 0.0;
};

// Options for the basis-manifold searches. Bases are parametrized as
// U0 * exp(i H(theta)) around each start's base unitary.
struct SearchOptions {
  int multistarts = 8;
  std::uint64_t seed = 0;
  int max_iters = 0;  // 0: scale with parameter count
  double simplex_tol = 1e-8;
  std::vector<Mat> warm_bases_a;  // extra base unitaries for the A side
  std::vector<Mat> warm_bases_b;
};

// Eq.-(24)-style one-way quantumness: divergence distance to CQ (side = A) or
// QC (side = B), minimized over the classical basis (and, for non-von-Neumann
// kinds, jointly over the conditional blocks).
MeasureReport delta_one_way(const DivergenceKind& kind,
                            const DensityOperator& rho, Side side,
                            const SearchOptions& opts = {});

// Eq.-(25)-style two-way quantumness: distance to CC.
MeasureReport delta_two_way(const DivergenceKind& kind,
                            const DensityOperator& rho,
                            const SearchOptions& opts = {});

// Eq.-(22) entanglement, reported as a bracket (never a direct Sep
// minimization): exact via the hierarchy collapse for MQ states, [0,0] for
// PPT-certified separable states in exact dimensions, otherwise
// [max(-H_K, 0), one-way upper].
MeasureReport entanglement_bracket(const DivergenceKind& kind,
                                   const DensityOperator& rho,
                                   const SearchOptions& opts = {});

enum class DiscordScope { one_way_a, one_way_b, two_way };
enum class PovmMode { projective_rank1, general_rank1_capped };

// Eq.-(32) discord: minimal loss of mutual information under measurement of
// one or both sides. Rank-one projective by default; the POVM mode searches
// rank-one POVMs with up to d^2 outcomes via an isometry parametrization.
MeasureReport discord_delta(const DensityOperator& rho, DiscordScope scope,
                            PovmMode mode = PovmMode::projective_rank1,
                            const SearchOptions& opts = {});

// The Lemma-1 / Lemma-3 chain evaluated on one state, ordered bottom-up, with
// asymptotic members emitted as theorem-bracketed entries. Search-based
// entries are cross-seeded so the reported brackets respect the chain.
std::vector<MeasureReport> hierarchy_table(const DensityOperator& rho,
                                           const DivergenceKind& kind,
                                           const SearchOptions& opts = {});

// Two-sided Theorem-2 certification: lower = -H_K(M_X|S), upper = divergence
// to the CC state built from the witness PVM applied to the optimal sigma.
// Collapsed iff |gap| <= tol. For non-MQ inputs the certificate is marked not
// applicable and carries the uniqueness-gap report instead.
CollapseCertificate certify_collapse(const DensityOperator& rho,
                                     const DivergenceKind& kind,
                                     double tol = 1e-6,
                                     const CondEntropyOptions& eopts = {},
                                     const std::string& state_id = "");

struct UniquenessReport {
  double ic = 0.0;        // coherent information I_c(A>B)
  double delta_ab = 0.0;  // one-way discord toward B
  double delta_ac = 0.0;  // one-way discord toward the purifier
  double identity_residual = 0.0;  // |I_c - (delta_ab - delta_ac)|
  double gap = 0.0;                // delta_ac, the Eq.-(40) strictness gap
};

UniquenessReport uniqueness_gap(const DensityOperator& rho,
                                const SearchOptions& opts = {});

// Eq.-(60) general one-way discord: minimum over premeasurement bases W on A
// of a correlation measure Q of the premeasured split M_W | AB. Every
// supported Q collapses on that split, so the inner value is the conditional
// entropy closed form.
MeasureReport generalized_discord(const DensityOperator& rho,
                                  const std::string& q_measure,
                                  const SearchOptions& opts = {});

struct BuresCheck {
  bool pass = false;
  double worst_margin = 0.0;  // min over samples of F(rho,alpha) - F(rho,sigma)
  int samples = 0;
};

// Appendix-B check: no sampled separable state is closer to the MQ state (in
// fidelity, hence Bures distance) than its induced CC candidate.
BuresCheck bures_cc_dominance(const DensityOperator& rho, int n_samples,
                              std::uint64_t seed);

// Mutual information H(A) + H(B) - H(AB) in bits.
double mutual_information(const DensityOperator& rho);

// Dephases the chosen side(s) in the given bases (columns).
Mat pinch_side(const Mat& m, const std::vector<int>& dims, int sys,
               const Mat& basis);

}  // namespace qcorr
