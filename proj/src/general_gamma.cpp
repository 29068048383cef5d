#include "geoent/general_gamma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace geoent {

namespace {

constexpr double kPhaseMatch = 1e-12;
constexpr double kDedup = 1e-7;

double radical_inverse(int n, int base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (n > 0) {
    x += f * (n % base);
    n /= base;
    f *= inv;
  }
  return x;
}

double max_abs(const Vec3& v) { return v.cwiseAbs().maxCoeff(); }

Vec3 spherical(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double literal_residual(const SymmetricState& s, const Vec3& dir, double lambda) {
  const SphericalDirection d = SphericalDirection::from_vector(dir);
  return max_abs(stationarity_residual(s, d.theta, d.phi, lambda));
}

// Damped Gauss-Newton (Levenberg-Marquardt) on the three stationarity
// equations in the unknowns (theta, phi, lambda).
bool newton_spherical(const ReducedCorrelations& rc, double& theta, double& phi, double& lambda) {
  auto residual = [&](double th, double ph, double la) {
    return stationarity_residual(rc, spherical(th, ph), la);
  };
  Vec3 f = residual(theta, phi, lambda);
  double cost = f.squaredNorm();
  double damping = 1e-3;
  for (int iter = 0; iter < 100 && max_abs(f) > 1e-13; ++iter) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    const Mat3 m = rc.G - lambda * Mat3::Identity();
    Mat3 jac;
    jac.col(0) = m * Vec3(ct * cp, ct * sp, -st);
    jac.col(1) = m * Vec3(-st * sp, st * cp, 0.0);
    jac.col(2) = -spherical(theta, phi);
    const Mat3 jtj = jac.transpose() * jac;
    const Vec3 grad = jac.transpose() * f;
    bool improved = false;
    while (damping < 1e12) {
      Mat3 a = jtj;
      a.diagonal() += damping * (jtj.diagonal() + Vec3::Constant(1e-12));
      const Vec3 step = a.ldlt().solve(-grad);
      const Vec3 trial = residual(theta + step(0), phi + step(1), lambda + step(2));
      if (trial.squaredNorm() < cost) {
        theta += step(0);
        phi += step(1);
        lambda += step(2);
        f = trial;
        cost = trial.squaredNorm();
        damping = std::max(damping / 3.0, 1e-15);
        improved = true;
        break;
      }
      damping *= 4.0;
    }
    if (!improved) break;
  }
  return std::isfinite(cost) && max_abs(f) < 1e-6;
}

struct Candidate {
  Vec3 s;
  double lambda;
  BranchLabel label;
};

bool same_point(const Candidate& a, const Vec3& s, double lambda) {
  return std::abs(a.lambda - lambda) <= kDedup && (a.s - s).norm() <= kDedup;
}

void finalize(GammaSolveReport& rep) {
  const StationaryPoint* best = nullptr;
  for (const auto& p : rep.points) {
    if (!(p.lambda > 0.0)) continue;
    if (!best || p.mu_sq > best->mu_sq) best = &p;
  }
  if (!best) {
    // Unreachable for normalized states: the maximizer has lambda >= 1/3.
    throw std::runtime_error("no stationary point with positive multiplier");
  }
  rep.p_max = best->mu_sq;
  rep.branch = best->branch;
  rep.direction = best->direction;
  rep.runner_up = -1.0;
  for (const auto& p : rep.points) {
    if (!(p.lambda > 0.0) || std::abs(p.lambda - best->lambda) <= kDedup) continue;
    rep.runner_up = std::max(rep.runner_up, p.mu_sq);
  }
}

void add_analytic_points(const SymmetricState& s, const ReducedCorrelations& rc,
                         GammaSolveReport& rep) {
  rep.points.push_back(
      make_point(rc, Vec3::UnitZ(), 2 * (s.g() * s.g() - s.t() * s.t()), {BranchKind::P}));
  try {
    rep.points.push_back(lambda_zero_branch(s));
  } catch (const std::domain_error&) {
    // g = t with h l = 0: no isolated lambda = 0 point.
  }
}

SphericalDirection conjugate(SphericalDirection d) {
  d.phi = d.phi > 0.0 ? 2 * kPi - d.phi : 0.0;
  return d;
}

}  // namespace

double QuarticPoly::operator()(double x) const {
  return (((c[0] * x + c[1]) * x + c[2]) * x + c[3]) * x + c[4];
}

cplx QuarticPoly::operator()(cplx x) const {
  return (((c[0] * x + c[1]) * x + c[2]) * x + c[3]) * x + c[4];
}

cplx QuarticPoly::derivative(cplx x) const {
  return ((4.0 * c[0] * x + 3.0 * c[1]) * x + 2.0 * c[2]) * x + c[3];
}

double QuarticPoly::scale() const {
  double m = 0.0;
  for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

QuarticPoly quartic_coefficients(const SymmetricState& s) {
  const double g = s.g(), t = s.t(), h = s.h();
  const double g2 = g * g, t2 = t * t, h2 = h * h, t4 = t2 * t2;
  QuarticPoly f;
  f.c[0] = 1.0;
  f.c[1] = -2 * (h2 + 4 * t2);
  f.c[2] = -4 * t2 * (2 * g2 - h2 - 6 * t2);
  f.c[3] = 8 * (t4 * (h2 - 4 * t2) + g2 * (3 * h2 * t2 + 4 * t4));
  f.c[4] = 16 * t4 * (g2 * g2 - 5 * g2 * h2 - 2 * g2 * t2 - h2 * t2 + t4);
  return f;
}

std::array<cplx, 4> quartic_roots(const QuarticPoly& f) {
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  for (int j = 0; j < 4; ++j) companion(0, j) = -f.c[j + 1] / f.c[0];
  for (int i = 1; i < 4; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix4d> es(companion, false);
  std::array<cplx, 4> roots;
  for (int i = 0; i < 4; ++i) {
    cplx z = es.eigenvalues()(i);
    for (int iter = 0; iter < 8; ++iter) {
      const cplx fz = f(z), dz = f.derivative(z);
      if (std::abs(dz) == 0.0) break;
      const cplx next = z - fz / dz;
      if (!(std::abs(f(next)) < std::abs(fz))) break;
      z = next;
    }
    roots[i] = z;
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

bool polish_stationary(const ReducedCorrelations& rc, Vec3& s, double& lambda) {
  auto residual = [&](const Vec3& x, double la) {
    Eigen::Vector4d f;
    f.head<3>() = stationarity_residual(rc, x, la);
    f(3) = 0.5 * (x.squaredNorm() - 1.0);
    return f;
  };
  Eigen::Vector4d f = residual(s, lambda);
  const double start = f.cwiseAbs().maxCoeff();
  for (int iter = 0; iter < 12 && f.cwiseAbs().maxCoeff() > 1e-16; ++iter) {
    Eigen::Matrix4d jac = Eigen::Matrix4d::Zero();
    jac.topLeftCorner<3, 3>() = rc.G - lambda * Mat3::Identity();
    jac.topRightCorner<3, 1>() = -s;
    jac.bottomLeftCorner<1, 3>() = s.transpose();
    const Eigen::Vector4d step = jac.completeOrthogonalDecomposition().solve(-f);
    const Vec3 s_new = s + step.head<3>();
    const double la_new = lambda + step(3);
    const Eigen::Vector4d f_new = residual(s_new, la_new);
    if (!(f_new.cwiseAbs().maxCoeff() < f.cwiseAbs().maxCoeff())) break;
    s = s_new;
    lambda = la_new;
    f = f_new;
  }
  s.normalize();
  return stationarity_residual(rc, s, lambda).cwiseAbs().maxCoeff() <= start;
}

StationaryPoint global_max_secular(const ReducedCorrelations& rc) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(rc.G);
  const Vec3 e = es.eigenvalues();
  const Mat3 q = es.eigenvectors();
  const Vec3 b = q.transpose() * rc.r;
  const double e_max = e(2);
  auto norm_sq = [&](double la) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double d = la - e(i);
      if (d > 0.0) acc += b(i) * b(i) / (d * d);
    }
    return acc;
  };
  double lo = e_max, hi = e_max + rc.r.norm() + 1e-12;
  for (int iter = 0; iter < 200 && hi - lo > 1e-16 * (1.0 + std::abs(hi)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    (norm_sq(mid) > 1.0 ? lo : hi) = mid;
  }
  double lambda = hi;
  Vec3 coeff;
  for (int i = 0; i < 3; ++i) {
    const double d = lambda - e(i);
    coeff(i) = d > 1e-12 ? b(i) / d : 0.0;
  }
  const double n2 = coeff.squaredNorm();
  // Hard case: the particular solution is short and the top eigenvector fills in.
  if (n2 < 1.0) coeff(2) += std::sqrt(1.0 - n2);
  Vec3 s = (q * coeff).normalized();
  polish_stationary(rc, s, lambda);
  return make_point(rc, s, lambda, {BranchKind::Other});
}

GammaSolveReport stationary_points_quarter(const SymmetricState& s) {
  if (std::abs(std::abs(s.gamma()) - kPi / 4) > kPhaseMatch) {
    throw std::invalid_argument("quartic pipeline requires gamma = pi/4");
  }
  const bool flipped = s.gamma() < 0;
  const SymmetricState sq = s.with_gamma(kPi / 4);
  const double g = sq.g(), t = sq.t(), h = sq.h();
  const ReducedCorrelations rc = reduced_correlations(sq);

  GammaSolveReport rep;
  add_analytic_points(sq, rc, rep);

  std::array<cplx, 4> roots;
  if (h == 0.0) {
    // f factors as (lambda - 2t(t+g))^2 (lambda - 2t(t-g))^2.
    const double lo = 2 * t * (t - g), hi = 2 * t * (t + g);
    roots = {cplx(lo), cplx(lo), cplx(hi), cplx(hi)};
  } else if (t == 0.0) {
    roots = {cplx(0.0), cplx(0.0), cplx(0.0), cplx(2 * h * h)};
  } else {
    roots = quartic_roots(quartic_coefficients(sq));
  }

  std::vector<Candidate> found;
  for (int k = 0; k < 4; ++k) {
    const cplx root = roots[k];
    const BranchLabel label{BranchKind::Quartic, k + 1};
    if (std::abs(root.imag()) > kRealRootTolerance * (1.0 + std::abs(root.real()))) {
      rep.rejected.push_back({root, "complex root"});
      continue;
    }
    double lambda = root.real();
    const double a = lambda - 2 * t * t - 2 * g * t;
    const double b = lambda - 2 * t * t + 2 * g * t;
    const double n = std::hypot(a, b);
    std::vector<Vec3> dirs;
    if (h * t > 1e-6 && n > 1e-9) {
      const double cos_phi = b / n, sin_phi = a / n;
      const double z_sq = (a * b) * (a * b) / (2 * h * h * t * t * n * n);
      if (!(z_sq >= 0.0) || !std::isfinite(z_sq)) {
        rep.rejected.push_back({root, "z^2 < 0"});
        continue;
      }
      // Both signs of z share one Bloch vector once phi is matched; keep the
      // sign that satisfies the x equation a cos(phi) = sqrt(2) h t z.
      double best = std::numeric_limits<double>::infinity();
      Vec3 pick = Vec3::Zero();
      for (double sign : {1.0, -1.0}) {
        const double z = sign * std::sqrt(z_sq);
        const double sin_t = 2 * z / (1 + z * z), cos_t = (1 - z * z) / (1 + z * z);
        if (std::abs(sin_t) > 1.0 || std::abs(cos_t) > 1.0) continue;
        const Vec3 cand(sin_t * cos_phi, sin_t * sin_phi, cos_t);
        const double res = max_abs(stationarity_residual(rc, cand, lambda));
        if (res < best) {
          best = res;
          pick = cand;
        }
      }
      if (!std::isfinite(best)) {
        rep.rejected.push_back({root, "trigonometric range"});
        continue;
      }
      dirs.push_back(pick);
    } else {
      dirs = directions_for_multiplier(rc, lambda, 1e-6);
    }
    bool accepted = false;
    for (Vec3 dir : dirs) {
      double la = lambda;
      polish_stationary(rc, dir, la);
      if (literal_residual(sq, dir, la) >= kAcceptResidual) continue;
      // Double roots yield the same point twice; the later label wins.
      auto dup = std::find_if(found.begin(), found.end(),
                              [&](const Candidate& c) { return same_point(c, dir, la); });
      if (dup != found.end()) {
        dup->label = label;
      } else {
        found.push_back({dir, la, label});
      }
      accepted = true;
    }
    if (!accepted) rep.rejected.push_back({root, "stationarity residual"});
  }
  for (const auto& c : found) {
    bool known = false;
    for (const auto& p : rep.points) {
      if ((p.direction.unit_vector() - c.s).norm() <= kDedup && std::abs(p.lambda - c.lambda) <= kDedup) {
        known = true;
      }
    }
    if (!known) rep.points.push_back(make_point(rc, c.s, c.lambda, c.label));
  }

  if (found.empty()) {
    GammaSolveReport numeric = stationary_points_numeric(sq);
    numeric.rejected = rep.rejected;
    numeric.warning = "quartic pipeline found no valid root; used Newton solver";
    rep = std::move(numeric);
  } else {
    finalize(rep);
  }
  if (flipped) {
    for (auto& p : rep.points) p.direction = conjugate(p.direction);
    rep.direction = conjugate(rep.direction);
  }
  return rep;
}

GammaSolveReport stationary_points_numeric(const SymmetricState& s, int n_starts) {
  if (n_starts < 8) throw std::invalid_argument("n_starts must be at least 8");
  const double g = s.g(), t = s.t();
  const ReducedCorrelations rc = reduced_correlations(s);

  GammaSolveReport rep;
  add_analytic_points(s, rc, rep);

  const std::array<double, 4> lambda_seeds = {2 * t * (g + t), -2 * t * (g - t),
                                              2 * (g * g - t * t), 0.0};
  std::vector<Candidate> raw;
  auto try_start = [&](double theta, double phi, double lambda) {
    if (!newton_spherical(rc, theta, phi, lambda)) return;
    Vec3 dir = spherical(theta, phi);
    polish_stationary(rc, dir, lambda);
    if (literal_residual(s, dir, lambda) < kAcceptResidual) {
      raw.push_back({dir, lambda, {BranchKind::Numeric}});
    }
  };
  for (int k = 0; k < n_starts; ++k) {
    const double theta = std::acos(1.0 - 2.0 * radical_inverse(k + 1, 2));
    const double phi = 2 * kPi * radical_inverse(k + 1, 3);
    const Vec3 dir = spherical(theta, phi);
    // Alternate the fixed seeds with the Rayleigh-type multiplier of the start.
    const double lambda = k % 5 < 4 ? lambda_seeds[k % 5] : dir.dot(rc.r + rc.G * dir);
    try_start(theta, phi, lambda);
  }
  {
    const StationaryPoint top = global_max_secular(rc);
    try_start(top.direction.theta, top.direction.phi, top.lambda);
  }

  std::sort(raw.begin(), raw.end(), [](const Candidate& a, const Candidate& b) {
    if (a.lambda != b.lambda) return a.lambda > b.lambda;
    return std::lexicographical_compare(a.s.data(), a.s.data() + 3, b.s.data(), b.s.data() + 3);
  });
  std::vector<Candidate> kept;
  for (const auto& c : raw) {
    bool dup = false;
    for (const auto& p : rep.points) {
      if ((p.direction.unit_vector() - c.s).norm() <= kDedup && std::abs(p.lambda - c.lambda) <= kDedup) {
        dup = true;
      }
    }
    for (const auto& k : kept) dup = dup || same_point(k, c.s, c.lambda);
    if (!dup) kept.push_back(c);
  }
  int index = 0;
  for (const auto& c : kept) {
    rep.points.push_back(make_point(rc, c.s, c.lambda, {BranchKind::Numeric, ++index}));
  }
  if (rep.points.size() < 2) {
    throw std::runtime_error("insufficient coverage, increase n_starts");
  }
  finalize(rep);
  return rep;
}

PmaxResult pmax_general(const SymmetricState& s) {
  const double a = std::abs(s.gamma());
  if (a < kPhaseMatch) return pmax_gamma0(s);
  if (std::abs(a - kPi / 2) < kPhaseMatch) {
    PmaxResult out = pmax_gamma_half(s);
    if (s.gamma() < 0) out.direction = conjugate(out.direction);
    return out;
  }
  const GammaSolveReport rep = std::abs(a - kPi / 4) < kPhaseMatch
                                   ? stationary_points_quarter(s)
                                   : stationary_points_numeric(s);
  PmaxResult out;
  out.p_max = rep.p_max;
  out.branch = rep.branch;
  out.criteria = criteria(s);
  out.runner_up = rep.runner_up;
  out.boundary = rep.runner_up >= 0.0 && rep.p_max - rep.runner_up < 1e-6;
  out.direction = rep.direction;
  return out;
}

}  // namespace geoent
