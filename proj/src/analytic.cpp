#include "geoent/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geoent {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kPoleTolerance = 1e-12;
constexpr double kSameMultiplier = 1e-7;

// Unit vector with tan(theta/2) = num/den inside the half-plane spanned by
// `perp` and the z axis.  Handles den = 0 (south pole).
Vec3 half_angle_direction(double num, double den, const Vec3& perp) {
  const double n2 = num * num + den * den;
  return perp * (2 * num * den / n2) + Vec3::UnitZ() * ((den * den - num * num) / n2);
}

BranchEigenvalue available_branch(const ReducedCorrelations& rc, BranchLabel label,
                                  const Vec3& dir, double lambda, double closed_form_mu) {
  BranchEigenvalue b;
  b.branch = label;
  b.available = true;
  b.lambda = lambda;
  b.direction = SphericalDirection::from_vector(dir);
  b.mu_sq = std::isfinite(closed_form_mu) ? closed_form_mu
                                          : eigenvalue_from_direction(rc, dir.normalized());
  return b;
}

// The closed-form value is kept when it is finite even though no real
// direction realizes it.
BranchEigenvalue unavailable_branch(BranchLabel label, double lambda,
                                    double formula = std::numeric_limits<double>::quiet_NaN()) {
  BranchEigenvalue b;
  b.branch = label;
  b.lambda = lambda;
  b.mu_sq = formula;
  return b;
}

// (h r + 4t^2)^2 / (r^2 + 4t^2), NaN when the ratio is 0/0.
double pm_closed_form(double h, double t, double r) {
  const double den = r * r + 4 * t * t;
  if (!(den > kTiny)) return std::numeric_limits<double>::quiet_NaN();
  const double num = h * r + 4 * t * t;
  return num * num / den;
}

const BranchEigenvalue& find(const std::vector<BranchEigenvalue>& evs, BranchKind kind) {
  for (const auto& b : evs) {
    if (b.branch.kind == kind) return b;
  }
  return evs.front();
}

bool usable(const BranchEigenvalue& b) { return b.available && std::isfinite(b.mu_sq); }

void fill_runner_up(PmaxResult& out, const std::vector<BranchEigenvalue>& evs, double win_lambda) {
  out.runner_up = -1.0;
  for (const auto& b : evs) {
    if (!usable(b) || !(b.lambda > 0.0)) continue;
    if (std::abs(b.lambda - win_lambda) <= kSameMultiplier) continue;
    out.runner_up = std::max(out.runner_up, b.mu_sq);
  }
}

PmaxResult finish(const std::vector<BranchEigenvalue>& evs, const BranchEigenvalue& win,
                  const CriteriaValues& crit, bool boundary) {
  PmaxResult out;
  out.p_max = std::clamp(win.mu_sq, 0.0, 1.0);
  out.branch = win.branch;
  out.criteria = crit;
  out.boundary = boundary;
  out.direction = win.direction.value_or(SphericalDirection{});
  fill_runner_up(out, evs, win.lambda);
  return out;
}

// On a dead-band boundary the two competing values coincide analytically;
// keep whichever is larger, preferring `principal` on ties.
const BranchEigenvalue& pick_on_boundary(const BranchEigenvalue& principal,
                                         const BranchEigenvalue& other) {
  if (!usable(other)) return principal;
  if (!usable(principal)) return other;
  return other.mu_sq > principal.mu_sq + 1e-12 ? other : principal;
}

}  // namespace

CriteriaValues criteria(const SymmetricState& s) {
  const double g = s.g(), t = s.t(), h = s.h();
  const double h_sq = h * h;
  CriteriaValues c;
  c.D1 = g * h_sq - (g + t) * (g + t) * (g - 2 * t);
  c.C1 = (3 * g - 2 * t) * h_sq + 4 * g * g * t;
  c.C2 = (3 * g + 2 * t) * h_sq - 4 * g * g * t;
  c.C3 = g * h_sq - (g - t) * (g - t) * (g + 2 * t);
  c.Cplus = h_sq * (2 * g + t) - t * (g - t) * (g - t);
  c.h2 = (3 * g + 2 * t) > 0 ? 4 * g * g * t / (3 * g + 2 * t) : 0.0;
  c.hplus = (2 * g + t) > 0 ? t * (g - t) * (g - t) / (2 * g + t) : 0.0;
  c.h3 = g > 0 ? (g - t) * (g - t) * (g + 2 * t) / g : std::numeric_limits<double>::infinity();
  return c;
}

std::vector<BranchEigenvalue> eigenvalues_gamma0(const SymmetricState& s) {
  const double g = s.g(), t = s.t(), h = s.h();
  const ReducedCorrelations rc = reduced_correlations(s.with_gamma(0.0));
  const Vec3 ex = Vec3::UnitX();
  std::vector<BranchEigenvalue> out;
  out.reserve(5);

  out.push_back(available_branch(rc, {BranchKind::P}, Vec3::UnitZ(), 2 * (g * g - t * t), g * g));

  {
    const double gt = g + t;
    const double den = h * h + gt * gt;
    out.push_back(available_branch(rc, {BranchKind::One}, half_angle_direction(-gt, h, ex), 0.0,
                                   (g * g * h * h + t * t * gt * gt) / den));
  }

  // mu_+- : tan(theta/2) = r_+- / 2t,  r_+- = h +- sqrt(h^2 + 4t(2t - g)).
  const double disc = h * h + 4 * t * (2 * t - g);
  const bool pm_available = t > 0 ? disc >= -kSignDeadband : h > 0;
  if (pm_available) {
    const double sq = std::sqrt(std::max(0.0, disc));
    const double r_plus = h + sq;
    // h - sq rewritten without cancellation.
    const double r_minus = r_plus > 0 ? 4 * t * (g - 2 * t) / r_plus : 0.0;
    const double lam_plus = h * r_plus + 2 * t * (g + t);
    const double lam_minus = h * r_minus + 2 * t * (g + t);
    out.push_back(available_branch(rc, {BranchKind::Plus}, half_angle_direction(r_plus, 2 * t, ex),
                                   lam_plus, pm_closed_form(h, t, r_plus)));
    const Vec3 dir_minus = r_plus > 0 ? half_angle_direction(2 * (g - 2 * t), r_plus, ex)
                                      : half_angle_direction(0.0, 1.0, ex);
    out.push_back(available_branch(rc, {BranchKind::Minus}, dir_minus, lam_minus,
                                   pm_closed_form(h, t, r_minus)));
  } else {
    out.push_back(unavailable_branch({BranchKind::Plus}, std::numeric_limits<double>::quiet_NaN()));
    out.push_back(unavailable_branch({BranchKind::Minus}, std::numeric_limits<double>::quiet_NaN()));
  }

  // mu_2 : lambda = 2t(t - g), available iff C1 >= 0.
  const double c1 = (3 * g - 2 * t) * h * h + 4 * g * g * t;
  const double delta = g * g + h * h + 3 * g * t;
  const double lam_two = 2 * t * (t - g);
  if (c1 >= -kSignDeadband && delta > kPoleTolerance) {
    const Vec3 dir(-h * (g + 2 * t) / delta, std::sqrt((g + 2 * t) * std::max(0.0, c1)) / delta,
                   -(g * g - h * h + g * t) / delta);
    out.push_back(available_branch(rc, {BranchKind::Two}, dir, lam_two,
                                   g * (g * h * h + 4 * t * t * t) / delta));
  } else {
    const double formula = delta > kPoleTolerance ? g * (g * h * h + 4 * t * t * t) / delta
                                                  : std::numeric_limits<double>::quiet_NaN();
    out.push_back(unavailable_branch({BranchKind::Two}, lam_two, formula));
  }
  return out;
}

std::vector<BranchEigenvalue> eigenvalues_gamma_half(const SymmetricState& s) {
  const double g = s.g(), t = s.t(), h = s.h();
  const ReducedCorrelations rc = reduced_correlations(s.with_gamma(kPi / 2));
  const Vec3 ey = Vec3::UnitY();
  std::vector<BranchEigenvalue> out;
  out.reserve(5);

  out.push_back(available_branch(rc, {BranchKind::P}, Vec3::UnitZ(), 2 * (g * g - t * t), g * g));

  {
    const double gt = g - t;
    const double den = h * h + gt * gt;
    if (den > kTiny) {
      out.push_back(available_branch(rc, {BranchKind::One}, half_angle_direction(gt, h, ey), 0.0,
                                     (g * g * h * h + t * t * gt * gt) / den));
    } else {
      out.push_back(unavailable_branch({BranchKind::One}, 0.0));
    }
  }

  // nu_+- : tan(theta/2) = s_+- / 2t,  s_+- = h +- sqrt(h^2 + 4t(2t + g)).
  const double sq = std::sqrt(h * h + 4 * t * (2 * t + g));
  const double s_plus = h + sq;
  if (s_plus > kTiny) {
    const double s_minus = -4 * t * (2 * t + g) / s_plus;
    out.push_back(available_branch(rc, {BranchKind::Plus}, half_angle_direction(s_plus, 2 * t, ey),
                                   h * s_plus - 2 * t * (g - t), pm_closed_form(h, t, s_plus)));
    out.push_back(available_branch(rc, {BranchKind::Minus},
                                   half_angle_direction(-2 * (2 * t + g), s_plus, ey),
                                   h * s_minus - 2 * t * (g - t), pm_closed_form(h, t, s_minus)));
  } else {
    out.push_back(unavailable_branch({BranchKind::Plus}, 0.0));
    out.push_back(unavailable_branch({BranchKind::Minus}, 0.0));
  }

  // nu_2 : lambda = 2t(g + t), available iff (g - 2t)(3gh^2 - 4g^2 t + 2h^2 t) >= 0.
  const double c2 = (3 * g + 2 * t) * h * h - 4 * g * g * t;
  const double avail = (g - 2 * t) * c2;
  const double delta = g * g + h * h - 3 * g * t;
  const double lam_two = 2 * t * (g + t);
  if (avail >= -kSignDeadband && std::abs(delta) > kPoleTolerance && g > 0) {
    const Vec3 dir(std::sqrt(std::max(0.0, avail)) / std::abs(delta), h * (g - 2 * t) / delta,
                   -(g * g - h * h - g * t) / delta);
    out.push_back(available_branch(rc, {BranchKind::Two}, dir, lam_two,
                                   g * (g * h * h - 4 * t * t * t) / delta));
  } else {
    const double formula = std::abs(delta) > kPoleTolerance
                               ? g * (g * h * h - 4 * t * t * t) / delta
                               : std::numeric_limits<double>::quiet_NaN();
    out.push_back(unavailable_branch({BranchKind::Two}, lam_two, formula));
  }
  return out;
}

PmaxResult pmax_gamma0(const SymmetricState& s) {
  const auto evs = eigenvalues_gamma0(s);
  const CriteriaValues crit = criteria(s);
  const auto& p = find(evs, BranchKind::P);
  const auto& plus = find(evs, BranchKind::Plus);
  if (crit.D1 < -kSignDeadband || !usable(plus)) return finish(evs, p, crit, false);
  if (crit.D1 > kSignDeadband) return finish(evs, plus, crit, false);
  return finish(evs, pick_on_boundary(p, plus), crit, true);
}

PmaxResult pmax_gamma_half(const SymmetricState& s) {
  const auto evs = eigenvalues_gamma_half(s);
  const CriteriaValues crit = criteria(s);
  const auto& p = find(evs, BranchKind::P);
  const auto& plus = find(evs, BranchKind::Plus);
  const auto& two = find(evs, BranchKind::Two);
  const double d = kSignDeadband;
  const bool c2_zero = std::abs(crit.C2) <= d;
  const bool c3_zero = std::abs(crit.C3) <= d;

  if (s.g() >= 2 * s.t()) {
    const bool plus_wins = crit.C2 >= -d && crit.C3 >= -d && usable(plus);
    const bool boundary = (c2_zero && crit.C3 >= -d) || (c3_zero && crit.C2 >= -d);
    if (!plus_wins) return finish(evs, p, crit, boundary);
    return finish(evs, boundary ? pick_on_boundary(p, plus) : plus, crit, boundary);
  }
  // g < 2t: nu_2 is available exactly when C2 <= 0; its pole g^2 + h^2 = 3gt
  // only meets C2 = 0 at the triple point, where nu_+ takes over.
  if (crit.C2 >= -d || !usable(two)) {
    if (c2_zero && usable(two)) return finish(evs, pick_on_boundary(plus, two), crit, true);
    return finish(evs, plus, crit, c2_zero);
  }
  return finish(evs, two, crit, false);
}

double plus_minus_gap_gamma0(const SymmetricState& s) {
  const double g = s.g(), t = s.t(), h = s.h();
  if (!(t > 0)) return std::numeric_limits<double>::quiet_NaN();
  const double slack = 2 * t + h * h / (4 * t) - g;
  if (slack < 0) return std::numeric_limits<double>::quiet_NaN();
  const double sq = std::sqrt(h * h + 4 * t * (2 * t - g));
  const double r_plus = h + sq;
  const double r_minus = h - sq;
  return 128 * h * std::pow(t, 3.5) * std::pow(slack, 1.5) /
         ((r_plus * r_plus + 4 * t * t) * (r_minus * r_minus + 4 * t * t));
}

}  // namespace geoent
