#include "geoent/general_state.hpp"

#include <cmath>

namespace geoent {

namespace {

using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;

std::array<Mat2c, 4> paulis() {
  std::array<Mat2c, 4> p;
  p[0] << 1, 0, 0, 1;
  p[1] << 0, 1, 1, 0;
  p[2] << 0, cplx(0, -1), cplx(0, 1), 0;
  p[3] << 1, 0, 0, -1;
  return p;
}

Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

void refresh_multipliers(const PairCorrelations& pc, PairStationaryPoint& p) {
  p.lambda1 = p.s1.dot(pc.r1 + pc.T * p.s2);
  p.lambda2 = p.s2.dot(pc.r2 + pc.T.transpose() * p.s1);
}

Eigen::Matrix<double, 8, 1> pair_system(const PairCorrelations& pc, const PairStationaryPoint& p) {
  Eigen::Matrix<double, 8, 1> f;
  f.segment<3>(0) = pc.r1 + pc.T * p.s2 - p.lambda1 * p.s1;
  f.segment<3>(3) = pc.r2 + pc.T.transpose() * p.s1 - p.lambda2 * p.s2;
  f(6) = 0.5 * (p.s1.squaredNorm() - 1.0);
  f(7) = 0.5 * (p.s2.squaredNorm() - 1.0);
  return f;
}

}  // namespace

PairCorrelations pair_correlations(const Amplitudes& psi) {
  Mat4c rho = Mat4c::Zero();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int c = 0; c < 2; ++c) rho(m, n) += psi[2 * m + c] * std::conj(psi[2 * n + c]);

  const auto p = paulis();
  PairCorrelations pc;
  for (int i = 0; i < 3; ++i) {
    pc.r1(i) = (rho * kron(p[i + 1], p[0])).trace().real();
    pc.r2(i) = (rho * kron(p[0], p[i + 1])).trace().real();
    for (int j = 0; j < 3; ++j) pc.T(i, j) = (rho * kron(p[i + 1], p[j + 1])).trace().real();
  }
  return pc;
}

double pair_value(const PairCorrelations& pc, const Vec3& s1, const Vec3& s2) {
  return 0.25 * (1.0 + pc.r1.dot(s1) + pc.r2.dot(s2) + s1.dot(pc.T * s2));
}

double pair_residual(const PairCorrelations& pc, const PairStationaryPoint& p) {
  return pair_system(pc, p).head<6>().cwiseAbs().maxCoeff();
}

PairStationaryPoint polish_pair(const PairCorrelations& pc, PairStationaryPoint p) {
  p.s1.normalize();
  p.s2.normalize();
  refresh_multipliers(pc, p);
  auto f = pair_system(pc, p);
  for (int iter = 0; iter < 20 && f.cwiseAbs().maxCoeff() > 1e-15; ++iter) {
    Eigen::Matrix<double, 8, 8> jac = Eigen::Matrix<double, 8, 8>::Zero();
    jac.block<3, 3>(0, 0) = -p.lambda1 * Mat3::Identity();
    jac.block<3, 3>(0, 3) = pc.T;
    jac.block<3, 1>(0, 6) = -p.s1;
    jac.block<3, 3>(3, 0) = pc.T.transpose();
    jac.block<3, 3>(3, 3) = -p.lambda2 * Mat3::Identity();
    jac.block<3, 1>(3, 7) = -p.s2;
    jac.block<1, 3>(6, 0) = p.s1.transpose();
    jac.block<1, 3>(7, 3) = p.s2.transpose();
    const Eigen::Matrix<double, 8, 1> step = jac.completeOrthogonalDecomposition().solve(-f);
    PairStationaryPoint next = p;
    next.s1 += step.segment<3>(0);
    next.s2 += step.segment<3>(3);
    next.lambda1 += step(6);
    next.lambda2 += step(7);
    const auto f_next = pair_system(pc, next);
    if (!(f_next.cwiseAbs().maxCoeff() < f.cwiseAbs().maxCoeff())) break;
    p = next;
    f = f_next;
  }
  p.s1.normalize();
  p.s2.normalize();
  p.value = pair_value(pc, p.s1, p.s2);
  p.residual = pair_residual(pc, p);
  return p;
}

GeneralCell classify_general_state(const GeneralThreeQubitState& psi, int restarts,
                                   std::uint64_t seed) {
  const OracleResult orc = alternating_maximize(psi, restarts, 1e-13, seed);
  const PairCorrelations pc = pair_correlations(psi.amplitudes());

  PairStationaryPoint start;
  start.s1 = bloch_vector(orc.triple.q1);
  start.s2 = bloch_vector(orc.triple.q2);
  PairStationaryPoint polished = polish_pair(pc, start);
  if (polished.value < orc.p_max - 1e-9) {
    // Newton slid to a different stationary point; keep the oracle's.
    polished = start;
    refresh_multipliers(pc, polished);
    polished.value = pair_value(pc, polished.s1, polished.s2);
    polished.residual = pair_residual(pc, polished);
  }

  GeneralCell cell;
  cell.p_max = orc.p_max;
  cell.point = polished;
  const bool north = (polished.s1 - Vec3::UnitZ()).norm() < 1e-6 &&
                     (polished.s2 - Vec3::UnitZ()).norm() < 1e-6;
  cell.branch = {north ? BranchKind::P : BranchKind::Other};
  return cell;
}

GeneralThreeQubitState partial_symmetric_from_uv(UVPoint p, double ratio, double gamma) {
  const double su = std::sin(p.u);
  const double t = su * std::sin(p.v) / std::sqrt(2.0 + ratio * ratio);
  return named_state(named::PartialSym{su * std::cos(p.v), t, ratio * t, std::cos(p.u), gamma});
}

}  // namespace geoent
