#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "qcorr/premeasurement.hpp"
#include "qcorr/states.hpp"

namespace qcorr::test {

inline Mat random_hermitian(int d, Rng& rng) {
  Mat g = ginibre(d, d, rng);
  return 0.5 * (g + g.adjoint());
}

inline Mat pauli(char axis) {
  Mat m(2, 2);
  switch (axis) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, Cplx(0, -1), Cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Vec mes_ket(int d) {
  Vec ket = Vec::Zero(d * d);
  for (int i = 0; i < d; ++i) ket(i * d + i) = 1.0 / std::sqrt(double(d));
  return ket;
}

inline DensityOperator mes_state(int d) {
  return pure_state(mes_ket(d), {d, d});
}

inline Vec ket0(int d = 2) {
  Vec v = Vec::Zero(d);
  v(0) = 1.0;
  return v;
}

// rho = p |Phi+><Phi+| + (1-p) I/4 on two qubits.
inline DensityOperator werner(double p) {
  Mat phi = mes_ket(2) * mes_ket(2).adjoint();
  Mat m = p * phi + (1.0 - p) * Mat::Identity(4, 4) / 4.0;
  return make_density(m, {2, 2});
}

// Random PVM on dimension d with m outcomes and generic ranks.
inline Pvm random_pvm(int d, int m, Rng& rng) {
  std::vector<int> ranks(m, 1);
  std::uniform_int_distribution<int> pick(0, m - 1);
  for (int extra = 0; extra < d - m; ++extra) ++ranks[pick(rng)];
  Mat u = random_unitary(d, rng);
  Pvm pvm;
  int col = 0;
  for (int j = 0; j < m; ++j) {
    Mat p = Mat::Zero(d, d);
    for (int r = 0; r < ranks[j]; ++r, ++col)
      p += u.col(col) * u.col(col).adjoint();
    pvm.projectors.push_back(p);
  }
  return pvm;
}

inline PremeasurementState random_premeasurement(int ds, int outcomes,
                                                 Rng& rng,
                                                 int sigma_rank = 0) {
  Pvm pvm = random_pvm(ds, outcomes, rng);
  Mat w = random_unitary(outcomes, rng);
  DensityOperator sigma =
      random_state({ds}, sigma_rank > 0 ? sigma_rank : ds, rng);
  return premeasure(sigma, build_isometry(w, pvm));
}

}  // namespace qcorr::test
