#include "geoent/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geoent {

Vec3 SphericalDirection::unit_vector() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

SphericalDirection SphericalDirection::from_vector(const Vec3& s) {
  SphericalDirection d;
  d.theta = std::atan2(std::hypot(s.x(), s.y()), s.z());
  double phi = std::atan2(s.y(), s.x());
  if (phi < 0) phi += 2 * kPi;
  if (phi >= 2 * kPi) phi -= 2 * kPi;
  d.phi = phi;
  return d;
}

std::string BranchLabel::name() const {
  switch (kind) {
    case BranchKind::P: return "P";
    case BranchKind::Zero: return "Zero";
    case BranchKind::One: return "One";
    case BranchKind::Plus: return "Plus";
    case BranchKind::Minus: return "Minus";
    case BranchKind::Two: return "Two";
    case BranchKind::Quartic: return "Quartic" + std::to_string(index);
    case BranchKind::Numeric: return "Numeric" + std::to_string(index);
    case BranchKind::Other: return "Other";
  }
  return "?";
}

ReducedCorrelations reduced_correlations(const SymmetricState& s) {
  const double g = s.g(), t = s.t(), h = s.h();
  const double c = std::cos(s.gamma()), sn = std::sin(s.gamma());
  const double ht2 = 2 * h * t;
  ReducedCorrelations rc;
  rc.r = Vec3(ht2 * c, ht2 * sn, g * g - h * h - t * t);
  // clang-format off
  rc.G << 2 * t * (g + t), 0.0,              -ht2 * c,
          0.0,             -2 * t * (g - t), -ht2 * sn,
          -ht2 * c,        -ht2 * sn,        g * g + h * h - t * t;
  // clang-format on
  return rc;
}

double eigenvalue_from_direction(const ReducedCorrelations& rc, const Vec3& s) {
  return 0.25 * (1.0 + 2.0 * rc.r.dot(s) + s.dot(rc.G * s));
}

double eigenvalue_from_direction(const SymmetricState& s, const SphericalDirection& d) {
  return eigenvalue_from_direction(reduced_correlations(s), d.unit_vector());
}

Vec3 stationarity_residual(const SymmetricState& s, double theta, double phi, double lambda) {
  const double g = s.g(), t = s.t(), h = s.h();
  const double cg = std::cos(s.gamma()), sg = std::sin(s.gamma());
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  Vec3 res;
  res.x() = 2 * h * t * cg + 2 * t * (g + t) * st * cp - 2 * h * t * cg * ct - lambda * st * cp;
  res.y() = 2 * h * t * sg - 2 * t * (g - t) * st * sp - 2 * h * t * sg * ct - lambda * st * sp;
  res.z() = (g * g - t * t) * (1 + ct) - h * h * (1 - ct) - 2 * h * t * cg * st * cp -
            2 * h * t * sg * st * sp - lambda * ct;
  return res;
}

Vec3 stationarity_residual(const ReducedCorrelations& rc, const Vec3& s, double lambda) {
  return rc.r + rc.G * s - lambda * s;
}

StationaryPoint make_point(const ReducedCorrelations& rc, const Vec3& s, double lambda,
                           BranchLabel branch) {
  const Vec3 unit = s.normalized();
  StationaryPoint p;
  p.direction = SphericalDirection::from_vector(unit);
  p.lambda = lambda;
  p.mu_sq = std::clamp(eigenvalue_from_direction(rc, unit), 0.0, 1.0);
  p.branch = branch;
  p.residual = stationarity_residual(rc, unit, lambda).cwiseAbs().maxCoeff();
  return p;
}

std::vector<Vec3> directions_for_multiplier(const ReducedCorrelations& rc, double lambda,
                                            double norm_tol) {
  const Mat3 a = lambda * Mat3::Identity() - rc.G;
  Eigen::JacobiSVD<Mat3> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  const double cut = 1e-9 * scale;

  Vec3 particular = Vec3::Zero();
  int rank = 0;
  for (int i = 0; i < 3; ++i) {
    if (sv(i) > cut) {
      particular += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(rc.r) / sv(i));
      ++rank;
    }
  }
  std::vector<Vec3> out;
  const double pn = particular.norm();
  if (rank == 3) {
    if (std::abs(pn - 1.0) <= norm_tol) out.push_back(particular / pn);
    return out;
  }
  // r must lie in the range of (lambda I - G) for a solution to exist.
  if ((a * particular - rc.r).norm() > 1e-7 * std::max(1.0, rc.r.norm())) return out;
  if (pn > 1.0 + norm_tol) return out;
  const Vec3 null = svd.matrixV().col(2);
  const double fill = std::sqrt(std::max(0.0, 1.0 - pn * pn));
  out.push_back((particular + fill * null).normalized());
  if (fill > 0.0) out.push_back((particular - fill * null).normalized());
  return out;
}

namespace {

struct LambdaZeroGeometry {
  double ell_sq;
  double ell;
  double diff;  // g^2 - t^2
  double den;   // h^2 l^2 + (g^2 - t^2)^2
};

LambdaZeroGeometry lambda_zero_geometry(const SymmetricState& s) {
  const double g = s.g(), t = s.t(), h = s.h();
  LambdaZeroGeometry geo;
  geo.ell_sq = std::max(0.0, g * g + t * t - 2 * g * t * std::cos(2 * s.gamma()));
  geo.ell = std::sqrt(geo.ell_sq);
  geo.diff = g * g - t * t;
  geo.den = h * h * geo.ell_sq + geo.diff * geo.diff;
  if (!(geo.den > 1e-300)) throw std::domain_error("lambda=0 branch undefined");
  return geo;
}

}  // namespace

StationaryPoint lambda_zero_branch(const SymmetricState& s) {
  const double g = s.g(), t = s.t(), h = s.h();
  const auto geo = lambda_zero_geometry(s);
  // Upper-sign solution; the lower sign gives the same Bloch vector.
  const Vec3 dir(-2 * h * (g - t) * (g - t) * (g + t) * std::cos(s.gamma()) / geo.den,
                 2 * h * (g - t) * (g + t) * (g + t) * std::sin(s.gamma()) / geo.den,
                 (h * h * geo.ell_sq - geo.diff * geo.diff) / geo.den);
  const ReducedCorrelations rc = reduced_correlations(s);
  StationaryPoint p = make_point(rc, dir, 0.0, {BranchKind::Zero, 0});
  p.mu_sq = (g * g * h * h * geo.ell_sq + t * t * geo.diff * geo.diff) / geo.den;
  return p;
}

ProductStatePair nearest_product_lambda_zero(const SymmetricState& s) {
  const double g = s.g(), t = s.t(), h = s.h(), gamma = s.gamma();
  const auto geo = lambda_zero_geometry(s);
  // eta is irrelevant when l = 0 (then g = t, h > 0 and q = |0>).
  const double eta = geo.ell > 0.0 ? std::atan2((g + t) * std::sin(gamma) / geo.ell,
                                                (g - t) * std::cos(gamma) / geo.ell)
                                   : 0.0;
  const cplx e_eta = std::polar(1.0, eta);
  const double nq = std::sqrt(geo.den);

  ProductStatePair out;
  out.q = {cplx(h * geo.ell / nq), -geo.diff * std::conj(e_eta) / nq};

  const cplx c0 = g * h * h * geo.ell_sq + t * geo.diff * geo.diff * e_eta * e_eta;
  const cplx c1 = e_eta * h * geo.diff *
                  (geo.diff * std::polar(1.0, gamma + eta) - 2.0 * geo.ell * t);
  const double nqp = std::sqrt(std::norm(c0) + std::norm(c1));
  if (!(nqp > 0.0)) throw std::domain_error("lambda=0 branch undefined");
  out.q_prime = {c0 / nqp, c1 / nqp};
  return out;
}

Qubit qubit_from_direction(const SphericalDirection& d) {
  return {cplx(std::cos(d.theta / 2)), std::polar(std::sin(d.theta / 2), d.phi)};
}

Vec3 bloch_vector(const Qubit& q) {
  const cplx c = std::conj(q[0]) * q[1];
  return {2 * c.real(), 2 * c.imag(), std::norm(q[0]) - std::norm(q[1])};
}

}  // namespace geoent
