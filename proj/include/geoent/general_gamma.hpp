#pragma once

// Stationary points for phases where the Lagrange system does not factorize:
// the quartic characteristic polynomial at gamma = pi/4 and a multi-start
// damped Newton solver usable for any gamma.

#include <array>
#include <string>
#include <vector>

#include "geoent/analytic.hpp"
#include "geoent/qstate.hpp"
#include "geoent/stationarity.hpp"

namespace geoent {

/// f(lambda) = c[0] lambda^4 + c[1] lambda^3 + c[2] lambda^2 + c[3] lambda + c[4].
struct QuarticPoly {
  std::array<double, 5> c{};

  double operator()(double x) const;
  cplx operator()(cplx x) const;
  cplx derivative(cplx x) const;
  double scale() const;  // max |c_i|
};

struct RejectedRoot {
  cplx root;
  std::string reason;
};

struct GammaSolveReport {
  std::vector<StationaryPoint> points;
  std::vector<RejectedRoot> rejected;
  double p_max = 0.0;
  BranchLabel branch;
  double runner_up = -1.0;
  SphericalDirection direction;
  std::string warning;
};

inline constexpr double kAcceptResidual = 1e-8;
inline constexpr double kRealRootTolerance = 1e-9;

QuarticPoly quartic_coefficients(const SymmetricState& s);

/// All four roots, ascending by real part (ties by imaginary part).
std::array<cplx, 4> quartic_roots(const QuarticPoly& f);

/// Requires |gamma| = pi/4; -pi/4 is solved through complex conjugation.
GammaSolveReport stationary_points_quarter(const SymmetricState& s);

/// Throws std::invalid_argument for n_starts < 8 and std::runtime_error when
/// fewer than two distinct stationary points are found.
GammaSolveReport stationary_points_numeric(const SymmetricState& s, int n_starts = 64);

/// Dispatches on gamma: closed forms at 0 and pi/2, the quartic at pi/4,
/// Newton otherwise.
PmaxResult pmax_general(const SymmetricState& s);

/// Refines (s, lambda) by Newton's method on r + G s = lambda s, |s| = 1.
/// Returns false when the iteration does not reduce the residual.
bool polish_stationary(const ReducedCorrelations& rc, Vec3& s, double& lambda);

/// Global maximizer of mu^2 on the sphere from the secular equation
/// sum_i b_i^2 / (lambda - e_i)^2 = 1 with lambda >= max eigenvalue of G.
StationaryPoint global_max_secular(const ReducedCorrelations& rc);

}  // namespace geoent
