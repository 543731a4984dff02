#include "qcorr/divergences.hpp"

#include <cmath>

namespace qcorr {

DivergenceKind DivergenceKind::renyi(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0)
    throw RangeError("renyi: alpha must lie in (0,2] and differ from 1");
  return {Tag::renyi, alpha};
}

std::string DivergenceKind::name() const {
  switch (tag) {
    case Tag::von_neumann:
      return "vn";
    case Tag::renyi:
      return "renyi:" + std::to_string(alpha);
    case Tag::dmax:
      return "dmax";
    case Tag::dfid:
      return "dfid";
  }
  return "?";
}

namespace {

void check_inputs(const Mat& p, const Mat& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols())
    throw DimMismatch("div: operator shapes differ");
  HermitianEig ep = herm_eig(p);
  HermitianEig eq = herm_eig(q);
  double pmax = std::max(ep.eigenvalues(0), 0.0);
  double qmax = std::max(eq.eigenvalues(0), 0.0);
  if (ep.eigenvalues(ep.eigenvalues.size() - 1) < -1e-10 * std::max(pmax, 1.0))
    throw NotPSD("div: p not PSD");
  if (eq.eigenvalues(eq.eigenvalues.size() - 1) < -1e-10 * std::max(qmax, 1.0))
    throw NotPSD("div: q not PSD");
  if (p.trace().real() <= 1e-14) throw ZeroOperator("div: p = 0");
}

DivValue infinite() {
  DivValue v;
  v.infinite = true;
  return v;
}

DivValue von_neumann_div(const Mat& p, const Mat& q) {
  if (support_leak(p, q) > kSupportLeakTol) return infinite();
  HermitianEig ep = herm_eig(p);
  double pmax = ep.eigenvalues(0);
  double s1 = 0.0;
  for (int i = 0; i < ep.eigenvalues.size(); ++i) {
    double lam = ep.eigenvalues(i);
    if (lam > kSupportCutoff * pmax) s1 += lam * std::log2(lam);
  }
  HermitianEig eq = herm_eig(q);
  double qmax = eq.eigenvalues(0);
  double s2 = 0.0;
  for (int i = 0; i < eq.eigenvalues.size(); ++i) {
    double mu = eq.eigenvalues(i);
    if (mu > kSupportCutoff * qmax) {
      double weight =
          (eq.eigenvectors.col(i).adjoint() * p * eq.eigenvectors.col(i))(0, 0)
              .real();
      s2 += weight * std::log2(mu);
    }
  }
  return DivValue{s1 - s2, false, false};
}

DivValue renyi_div(double alpha, const Mat& p, const Mat& q) {
  bool leak = support_leak(p, q) > kSupportLeakTol;
  if (alpha > 1.0 && leak) return infinite();
  Mat pa = pinv_pow(p, alpha);
  Mat qa = pinv_pow(q, 1.0 - alpha);
  double t = (pa * qa).trace().real();
  if (t <= 0.0) return infinite();
  DivValue v{std::log2(t) / (alpha - 1.0), false, alpha < 1.0 && leak};
  return v;
}

DivValue dmax_div(const Mat& p, const Mat& q) {
  if (support_leak(p, q) > kSupportLeakTol) return infinite();
  Mat qis = pinv_pow(q, -0.5);
  double lmax = lambda_max(qis * p * qis);
  if (lmax <= 0.0) return infinite();
  return DivValue{std::log2(lmax), false, false};
}

DivValue dfid_div(const Mat& p, const Mat& q) {
  double f = fidelity(p, q);
  if (f <= 1e-300) return infinite();
  return DivValue{-2.0 * std::log2(f), false, false};
}

}  // namespace

DivValue div(const DivergenceKind& kind, const Mat& p, const Mat& q) {
  check_inputs(p, q);
  switch (kind.tag) {
    case DivergenceKind::Tag::von_neumann:
      return von_neumann_div(p, q);
    case DivergenceKind::Tag::renyi:
      return renyi_div(kind.alpha, p, q);
    case DivergenceKind::Tag::dmax:
      return dmax_div(p, q);
    case DivergenceKind::Tag::dfid:
      return dfid_div(p, q);
  }
  throw DomainError("div: unknown kind");
}

namespace {

// slack for "lhs >= rhs" with symbolic infinities.
double ineq_slack(const DivValue& lhs, const DivValue& rhs) {
  if (lhs.infinite) return rhs.infinite ? 0.0 : kInfObjective;
  if (rhs.infinite) return -kInfObjective;
  return lhs.bits - rhs.bits;
}

double eq_slack(const DivValue& lhs, const DivValue& rhs) {
  if (lhs.infinite || rhs.infinite)
    return (lhs.infinite && rhs.infinite) ? 0.0 : -kInfObjective;
  return -std::abs(lhs.bits - rhs.bits);
}

Mat direct_sum(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

PropertyResult check_property(const DivergenceKind& kind, DivProperty property,
                              const PropertyInstance& inst) {
  double slack = 0.0;
  switch (property) {
    case DivProperty::a_dataprocessing: {
      if (!inst.channel) throw DomainError("property (a): channel missing");
      slack = ineq_slack(div(kind, inst.p, inst.q),
                         div(kind, inst.channel(inst.p), inst.channel(inst.q)));
      break;
    }
    case DivProperty::b_nullsubspace: {
      Mat zero = Mat::Zero(inst.q_pad.rows(), inst.q_pad.cols());
      slack = eq_slack(div(kind, direct_sum(inst.p, zero),
                           direct_sum(inst.q, inst.q_pad)),
                       div(kind, inst.p, inst.q));
      break;
    }
    case DivProperty::eq27_monotone_in_q: {
      slack = ineq_slack(div(kind, inst.p, inst.q),
                         div(kind, inst.p, inst.q_tilde));
      break;
    }
    case DivProperty::eq28_projection: {
      Mat proj_q = inst.projector * inst.q * inst.projector;
      slack = ineq_slack(div(kind, inst.p, inst.q),
                         div(kind, inst.p, proj_q));
      break;
    }
    case DivProperty::eq78: {
      slack = ineq_slack(div(DivergenceKind::dmax(), inst.p_prime, inst.q),
                         div(DivergenceKind::dmax(), inst.p, inst.q));
      break;
    }
    case DivProperty::eq79: {
      slack = ineq_slack(div(DivergenceKind::dfid(), inst.p, inst.q),
                         div(DivergenceKind::dfid(), inst.p_prime, inst.q));
      break;
    }
    case DivProperty::eq80: {
      Mat pi_p = support_projector(inst.p);
      Mat pi_q = support_projector(inst.q);
      double s1 = eq_slack(div(DivergenceKind::dfid(), inst.p, inst.q),
                           div(DivergenceKind::dfid(), inst.p,
                               pi_p * inst.q * pi_p));
      double s2 = eq_slack(div(DivergenceKind::dfid(), inst.p, inst.q),
                           div(DivergenceKind::dfid(),
                               pi_q * inst.p * pi_q, inst.q));
      slack = std::min(s1, s2);
      break;
    }
    case DivProperty::eq81: {
      Mat pp = inst.projector * inst.p * inst.projector;
      Mat pq = inst.projector * inst.q * inst.projector;
      if (pp.trace().real() <= 1e-14) {
        slack = kInfObjective;  // projected p vanished: nothing to violate
      } else {
        slack = ineq_slack(div(DivergenceKind::dmax(), inst.p, inst.q),
                           div(DivergenceKind::dmax(), pp, pq));
      }
      break;
    }
  }
  return PropertyResult{slack >= -1e-9, slack};
}

}  // namespace qcorr
