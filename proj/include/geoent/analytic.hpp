#pragma once

// Closed-form stationary branches for the two phases where the Lagrange
// system factorizes, gamma = 0 and gamma = pi/2, together with the sign
// criteria that decide which branch realizes P_max.

#include <optional>
#include <vector>

#include "geoent/qstate.hpp"
#include "geoent/stationarity.hpp"

namespace geoent {

struct BranchEigenvalue {
  BranchLabel branch;
  /// Closed-form value; may be finite for an unavailable branch, NaN when
  /// the formula itself is undefined.
  double mu_sq = 0.0;
  double lambda = 0.0;
  bool available = false;
  std::optional<SphericalDirection> direction;
};

struct CriteriaValues {
  double D1 = 0.0;     // g h^2 - (g+t)^2 (g-2t)
  double C1 = 0.0;     // (3g-2t) h^2 + 4 g^2 t
  double C2 = 0.0;     // (3g+2t) h^2 - 4 g^2 t
  double C3 = 0.0;     // g h^2 - (g-t)^2 (g+2t)
  double Cplus = 0.0;  // h^2 (2g+t) - t (g-t)^2

  // Thresholds on h^2 where C2, Cplus and C3 change sign (g > 0, t > 0).
  double h2 = 0.0;
  double hplus = 0.0;
  double h3 = 0.0;
};

struct PmaxResult {
  double p_max = 0.0;
  BranchLabel branch;
  CriteriaValues criteria;
  /// A deciding criterion sits inside the sign dead-band.
  bool boundary = false;
  /// Best value among the other candidates with positive multiplier (a
  /// different multiplier from the winner); negative when there is none.
  double runner_up = -1.0;
  /// Bloch direction s of the nearest product state q (x) q (x) q'.
  SphericalDirection direction;
};

/// Criterion values with |value| <= kSignDeadband are treated as zero.
inline constexpr double kSignDeadband = 1e-14;

CriteriaValues criteria(const SymmetricState& s);

/// Entries in the order P, One, Plus, Minus, Two; gamma of `s` is ignored.
std::vector<BranchEigenvalue> eigenvalues_gamma0(const SymmetricState& s);
std::vector<BranchEigenvalue> eigenvalues_gamma_half(const SymmetricState& s);

PmaxResult pmax_gamma0(const SymmetricState& s);
PmaxResult pmax_gamma_half(const SymmetricState& s);

/// mu_+^2 - mu_-^2 written as the manifestly non-negative product
/// 128 h t^{7/2} (2t + h^2/4t - g)^{3/2} / ((r+^2 + 4t^2)(r-^2 + 4t^2)).
double plus_minus_gap_gamma0(const SymmetricState& s);

}  // namespace geoent
