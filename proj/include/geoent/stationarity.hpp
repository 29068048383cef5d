#pragma once

// Reduced-correlation form of the overlap problem.  For a symmetric state the
// overlap with q (x) q (x) q' maximized over q' is
//
//   mu^2(s) = 1/4 (1 + 2 r.s + s^T G s),      s = Bloch vector of q,
//
// and candidate maximizers solve the Lagrange system r + G s = lambda s.

#include <array>
#include <compare>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geoent/qstate.hpp"

namespace geoent {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Qubit = std::array<cplx, 2>;

struct ReducedCorrelations {
  Vec3 r = Vec3::Zero();
  Mat3 G = Mat3::Zero();
};

struct SphericalDirection {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)

  Vec3 unit_vector() const;
  /// Canonical angles of a (not necessarily normalized) nonzero vector.
  static SphericalDirection from_vector(const Vec3& s);
};

enum class BranchKind { P, Zero, One, Plus, Minus, Two, Quartic, Numeric, Other };

/// Which closed-form family a stationary point belongs to.  `index` is used by
/// Quartic (1..4, ascending real part of the root) and Numeric (1 = largest
/// multiplier among the non-analytic points).
struct BranchLabel {
  BranchKind kind = BranchKind::P;
  int index = 0;

  std::string name() const;
  friend auto operator<=>(const BranchLabel&, const BranchLabel&) = default;
};

struct StationaryPoint {
  SphericalDirection direction;
  double lambda = 0.0;
  double mu_sq = 0.0;
  BranchLabel branch;
  double residual = 0.0;  // max-norm of r + G s - lambda s
};

struct ProductStatePair {
  Qubit q{};
  Qubit q_prime{};
};

inline constexpr double kResidualTolerance = 1e-10;

ReducedCorrelations reduced_correlations(const SymmetricState& s);

double eigenvalue_from_direction(const ReducedCorrelations& rc, const Vec3& s);
double eigenvalue_from_direction(const SymmetricState& s, const SphericalDirection& d);

/// Component-wise LHS - RHS of the three stationarity equations written in
/// (theta, phi).
Vec3 stationarity_residual(const SymmetricState& s, double theta, double phi, double lambda);
Vec3 stationarity_residual(const ReducedCorrelations& rc, const Vec3& s, double lambda);

/// Assembles a StationaryPoint from a Cartesian direction; mu_sq and residual
/// are evaluated, not trusted.
StationaryPoint make_point(const ReducedCorrelations& rc, const Vec3& s, double lambda,
                           BranchLabel branch);

/// Unit vectors s with (lambda I - G) s = r.  Returns one solution when
/// lambda I - G is regular and |s| = 1 within `norm_tol`, two antipodal
/// completions along the null space when singular, otherwise nothing.
std::vector<Vec3> directions_for_multiplier(const ReducedCorrelations& rc, double lambda,
                                            double norm_tol = 1e-7);

/// The lambda = 0 stationary point that exists for every phase.  Throws
/// std::domain_error when g = t and h * l = 0, where the direction is undefined.
StationaryPoint lambda_zero_branch(const SymmetricState& s);

/// Closed-form nearest product state |q>|q>|q'> of the lambda = 0 branch.
ProductStatePair nearest_product_lambda_zero(const SymmetricState& s);

Qubit qubit_from_direction(const SphericalDirection& d);
Vec3 bloch_vector(const Qubit& q);

}  // namespace geoent
