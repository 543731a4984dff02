#pragma once

#include "qcorr/smooth.hpp"

namespace qcorr {

// Incompatibility constant c(X,Z) = max_{j,k} ||sqrt(Z_k) sqrt(X_j)||_inf^2.
double overlap_c(const Povm& x, const Povm& z);
double overlap_c(const Pvm& x, const Pvm& z);

enum class EurRelation {
  berta_eq64,        // H(W|B) + H(Z|B) >= log d + H(A|B), Fourier pair
  tomren_eq56,       // H_min(X|E1) + H_max(Z|E2) >= log 1/c
  tomren_smooth_eq58,
  sanchez_triple     // H(X)+H(Y)+H(Z) >= 2 for a qubit MUB triple
};

struct EurCheck {
  std::string relation;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs
  bool pass = false;
  double tol = 0.0;
};

struct EurInstance {
  DensityOperator rho;     // berta: [dA,dB]; tomren: [dS,dE1,dE2]; sanchez: [dS]
  Mat basis_w;             // berta: the W basis on A
  std::vector<Povm> povms; // tomren: {X, Z}; sanchez: three qubit PVMs
  double epsilon = 0.0;    // eq58 only
};

EurCheck check_eur(EurRelation relation, const EurInstance& inst,
                   const SmoothOptions& opts = {});

enum class EcrRelation { eq57, eq59 };

// Entanglement-complementarity view: the same bound evaluated through the
// collapsed entanglement measures of the premeasured states,
// E_fid(M_X | S E2) + E_max(M_Z | S E1) >= log 1/c. Requires a pure tripartite
// input; POVMs are Naimark-extended first.
EurCheck ecr_view(EcrRelation relation, const DensityOperator& rho_se1e2,
                  const Povm& x, const Povm& z, double epsilon = 0.0,
                  const SmoothOptions& opts = {});

enum class GameLayout {
  pure_system,       // dims [dS]; yields H(X_i), bound 2 per round-triple
  with_memory_split, // dims [dS,dE1,dE2]; yields H(X_i|E2), bound 3/2
  adversarial_env    // dims [dS,dE]; yields H(X_i|E), no bound applies
};

struct GameRecord {
  GameLayout layout;
  std::vector<double> per_round_yield;  // bits, one per strategy PVM
  double total_yield = 0.0;             // rounds * sum of yields
  int rounds_per_pvm = 0;
  double bound = 0.0;
  std::string bound_kind;  // "pure_2" | "memory_3half" | "none"
  bool bound_applicable = false;
  bool hypothesis_verified = false;  // memory variant: rho_SE2 PPT-separable
  std::string notes;
};

// The distillation game: per-PVM yield identity H(X_i|E) = distillable
// entanglement of the premeasured state, summed over the strategy.
GameRecord play_game(const DensityOperator& rho, GameLayout layout,
                     const std::vector<Pvm>& strategy, int rounds_per_pvm);

// |H(A_1..A_n|B_1..B_n) - sum_i H(A_i|B_i)| for a tensor product of MQ
// states; certifies distillable-entanglement additivity through the collapse.
double check_additivity(const std::vector<DensityOperator>& states);

}  // namespace qcorr
