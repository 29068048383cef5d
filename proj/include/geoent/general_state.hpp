#pragma once

// Stationary points of the overlap for states that are symmetric only under
// the exchange of the first two qubits, e.g. the partially symmetric family
// g|000> + t(|011> + |101>) + t3|110> + e^{i gamma} h|111>.
//
// With q1 (x) q2 fixed, the best third factor gives
//
//   F(s1, s2) = 1/4 (1 + r1.s1 + r2.s2 + s1^T T s2)
//
// where (r1, r2, T) are the Pauli coefficients of the two-qubit reduced state.

#include <cstdint>

#include "geoent/oracle.hpp"
#include "geoent/stationarity.hpp"

namespace geoent {

struct PairCorrelations {
  Vec3 r1 = Vec3::Zero();
  Vec3 r2 = Vec3::Zero();
  Mat3 T = Mat3::Zero();
};

struct PairStationaryPoint {
  Vec3 s1 = Vec3::UnitZ();
  Vec3 s2 = Vec3::UnitZ();
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double value = 0.0;
  double residual = 0.0;
};

struct GeneralCell {
  double p_max = 0.0;        // oracle value
  PairStationaryPoint point;  // polished maximizer
  BranchLabel branch;        // P when both directions sit at the north pole
};

/// Partial trace over the third qubit, in the Pauli basis.
PairCorrelations pair_correlations(const Amplitudes& psi);

double pair_value(const PairCorrelations& pc, const Vec3& s1, const Vec3& s2);

/// Max-norm of the residual of r1 + T s2 = lambda1 s1, r2 + T^T s1 = lambda2 s2.
double pair_residual(const PairCorrelations& pc, const PairStationaryPoint& p);

/// Newton's method on the pair system with unit-norm constraints, started at
/// `p`; multipliers are re-estimated from the directions first.
PairStationaryPoint polish_pair(const PairCorrelations& pc, PairStationaryPoint p);

/// Oracle maximization followed by Newton polishing and branch labelling.
GeneralCell classify_general_state(const GeneralThreeQubitState& psi, int restarts = 20,
                                   std::uint64_t seed = kDefaultSeed);

/// g = sin u cos v, t = sin u sin v / sqrt(2 + k^2), t3 = k t, h = cos u.
GeneralThreeQubitState partial_symmetric_from_uv(UVPoint p, double ratio, double gamma = 0.0);

}  // namespace geoent
