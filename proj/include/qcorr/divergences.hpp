#pragma once

#include <functional>
#include <optional>

#include "qcorr/linalg.hpp"

namespace qcorr {

// One of the four relative entropies: von Neumann, Renyi (alpha in (0,2],
// alpha != 1), D_max, or D_fid. All values in bits.
struct DivergenceKind {
  enum class Tag { von_neumann, renyi, dmax, dfid };
  Tag tag = Tag::von_neumann;
  double alpha = 0.0;

  static DivergenceKind vn() { return {Tag::von_neumann, 0.0}; }
  static DivergenceKind renyi(double alpha);
  static DivergenceKind dmax() { return {Tag::dmax, 0.0}; }
  static DivergenceKind dfid() { return {Tag::dfid, 0.0}; }

  std::string name() const;
};

// Extended-real divergence value. Support violations are structural, so
// infinity is carried symbolically, never as a large float.
struct DivValue {
  double bits = 0.0;
  bool infinite = false;
  // Renyi at alpha < 1 with supp(p) not inside supp(q): the trace functional
  // was evaluated over the support intersection.
  bool support_flag = false;

  double as_objective() const { return infinite ? kInfObjective : bits; }
};

DivValue div(const DivergenceKind& kind, const Mat& p, const Mat& q);

enum class DivProperty {
  a_dataprocessing,
  b_nullsubspace,
  eq27_monotone_in_q,
  eq28_projection,
  eq78,
  eq79,
  eq80,
  eq81,
};

// Operators the property quantifies over. Fields irrelevant to the chosen
// property are ignored.
struct PropertyInstance {
  Mat p, q;
  std::function<Mat(const Mat&)> channel;  // (a): CPTP map
  Mat q_tilde;                             // eq27: requires q_tilde >= q
  Mat projector;                           // eq28 (contains supp p), eq81 (any)
  Mat p_prime;                             // eq78/eq79: requires p_prime >= p
  Mat q_pad;                               // (b): the Q' direct-sum block
};

struct PropertyResult {
  bool pass = false;
  double slack = 0.0;  // >= -1e-9 passes; equalities report -|difference|
};

PropertyResult check_property(const DivergenceKind& kind, DivProperty property,
                              const PropertyInstance& instance);

}  // namespace qcorr
