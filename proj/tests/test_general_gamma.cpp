#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "geoent/general_gamma.hpp"

using namespace geoent;

namespace {

SymmetricState random_state(std::mt19937_64& rng, double gamma) {
  std::uniform_real_distribution<double> d(0, 1);
  return from_params(d(rng), d(rng), d(rng), gamma);
}

// Coefficients of prod (x - r_i), highest power first.
std::array<double, 5> expand(const std::array<double, 4>& roots) {
  std::array<double, 5> c{1, 0, 0, 0, 0};
  int deg = 0;
  for (double r : roots) {
    for (int k = deg + 1; k >= 1; --k) c[k] -= r * c[k - 1];
    ++deg;
  }
  return c;
}

// Direction-free comparison key of a stationary point.
bool has_point(const std::vector<StationaryPoint>& pts, double lambda, const Vec3& dir, double tol) {
  return std::any_of(pts.begin(), pts.end(), [&](const StationaryPoint& p) {
    return std::abs(p.lambda - lambda) < tol && (p.direction.unit_vector() - dir).norm() < tol;
  });
}

}  // namespace

TEST(QuarticCoefficients, HZeroFactorization) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> d(0, 1);
  for (int k = 0; k < 50; ++k) {
    const auto s = from_params(d(rng), d(rng), 0, kPi / 4);
    const double g = s.g(), t = s.t();
    const double a = 2 * g * t + 2 * t * t, b = -2 * g * t + 2 * t * t;
    const auto want = expand({a, a, b, b});
    const auto f = quartic_coefficients(s);
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(f.c[i], want[i], 1e-12) << i;
  }
}

TEST(QuarticCoefficients, MatchesPolynomials) {
  const auto s = from_params(0.5, 0.3, 0.4, kPi / 4);
  const double g = s.g(), t = s.t(), h = s.h();
  const double g2 = g * g, t2 = t * t, h2 = h * h, t4 = t2 * t2;
  const auto f = quartic_coefficients(s);
  EXPECT_DOUBLE_EQ(f.c[0], 1.0);
  EXPECT_NEAR(f.c[1], -2 * (h2 + 4 * t2), 1e-15);
  EXPECT_NEAR(f.c[2], -4 * t2 * (2 * g2 - h2 - 6 * t2), 1e-15);
  EXPECT_NEAR(f.c[3], 8 * (t4 * (h2 - 4 * t2) + g2 * (3 * h2 * t2 + 4 * t4)), 1e-15);
  EXPECT_NEAR(f.c[4], 16 * t4 * (g2 * g2 - 5 * g2 * h2 - 2 * g2 * t2 - h2 * t2 + t4), 1e-15);
}

TEST(QuarticRoots, HZeroEqualGT) {
  const auto s = from_params(1, 1, 0, kPi / 4);
  const double t = s.t();
  auto roots = quartic_roots(quartic_coefficients(s));
  EXPECT_NEAR(roots[0].real(), 0.0, 1e-7);
  EXPECT_NEAR(roots[1].real(), 0.0, 1e-7);
  EXPECT_NEAR(roots[2].real(), 4 * t * t, 1e-7);
  EXPECT_NEAR(roots[3].real(), 4 * t * t, 1e-7);
}

TEST(QuarticRoots, ResidualAndOrder) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 500; ++k) {
    const auto f = quartic_coefficients(random_state(rng, kPi / 4));
    const auto roots = quartic_roots(f);
    for (int i = 0; i < 4; ++i) {
      EXPECT_LT(std::abs(f(roots[i])), 1e-9 * f.scale());
      if (i > 0) EXPECT_LE(roots[i - 1].real(), roots[i].real());
    }
  }
}

TEST(QuarticRoots, SmallHLimit) {
  for (auto [g, t] : {std::pair{0.3, 0.5}, {0.7, 0.4}, {0.5, 0.5}}) {
    const auto s = from_params(g, t, 1e-6, kPi / 4);
    const double gn = s.g(), tn = s.t();
    auto roots = quartic_roots(quartic_coefficients(s));
    std::vector<double> want{2 * tn * (gn + tn), 2 * tn * (gn + tn), -2 * tn * (gn - tn),
                             -2 * tn * (gn - tn)};
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(roots[i].real(), want[i], 1e-4);
  }
}

TEST(Quarter, PrincipalAndZeroBranch) {
  const auto s = from_params(0, 0.5, 0.5, kPi / 4);
  const auto rep = stationary_points_quarter(s);
  bool p = false, zero = false;
  for (const auto& pt : rep.points) {
    EXPECT_LT(pt.residual, kAcceptResidual);
    if (pt.branch.kind == BranchKind::P) {
      p = true;
      EXPECT_NEAR(pt.lambda, 2 * (s.g() * s.g() - s.t() * s.t()), 1e-15);
      EXPECT_NEAR(pt.mu_sq, 0.0, 1e-15);
    }
    if (pt.branch.kind == BranchKind::Zero) {
      zero = true;
      EXPECT_NEAR(pt.mu_sq, 0.125, 1e-14);
    }
  }
  EXPECT_TRUE(p);
  EXPECT_TRUE(zero);
}

TEST(Quarter, NegativePhaseIsConjugate) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 50; ++k) {
    const auto s = random_state(rng, kPi / 4);
    const auto a = stationary_points_quarter(s);
    const auto b = stationary_points_quarter(s.with_gamma(-kPi / 4));
    EXPECT_NEAR(a.p_max, b.p_max, 1e-14);
    for (const auto& pt : b.points) EXPECT_LT(pt.residual, kAcceptResidual);
  }
}

TEST(Quarter, RejectsWrongPhase) {
  EXPECT_THROW(stationary_points_quarter(from_params(0.5, 0.3, 0.4, 0.3)), std::invalid_argument);
}

TEST(Numeric, ArgumentChecks) {
  EXPECT_THROW(stationary_points_numeric(from_params(0.5, 0.3, 0.4, 0.3), 7), std::invalid_argument);
}

TEST(Numeric, MatchesGamma0Branches) {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 40; ++k) {
    const auto s = random_state(rng, 0);
    const auto rep = stationary_points_numeric(s);
    for (const auto& b : eigenvalues_gamma0(s)) {
      if (!b.available) continue;
      EXPECT_TRUE(has_point(rep.points, b.lambda, b.direction->unit_vector(), 1e-8))
          << b.branch.name() << " " << s.g() << " " << s.t() << " " << s.h();
    }
    EXPECT_NEAR(rep.p_max, pmax_gamma0(s).p_max, 1e-10);
  }
}

TEST(Numeric, MatchesGammaHalfBranches) {
  std::mt19937_64 rng(45);
  for (int k = 0; k < 40; ++k) {
    const auto s = random_state(rng, kPi / 2);
    const auto rep = stationary_points_numeric(s);
    for (const auto& b : eigenvalues_gamma_half(s)) {
      if (!b.available) continue;
      EXPECT_TRUE(has_point(rep.points, b.lambda, b.direction->unit_vector(), 1e-8))
          << b.branch.name() << " " << s.g() << " " << s.t() << " " << s.h();
    }
    EXPECT_NEAR(rep.p_max, pmax_gamma_half(s).p_max, 1e-10);
  }
}

TEST(Numeric, MatchesQuarterPoints) {
  std::mt19937_64 rng(46);
  for (int k = 0; k < 40; ++k) {
    const auto s = random_state(rng, kPi / 4);
    const auto num = stationary_points_numeric(s);
    const auto quart = stationary_points_quarter(s);
    for (const auto& pt : quart.points) {
      EXPECT_TRUE(has_point(num.points, pt.lambda, pt.direction.unit_vector(), 1e-8))
          << pt.branch.name() << " " << s.g() << " " << s.t() << " " << s.h();
    }
    EXPECT_NEAR(num.p_max, quart.p_max, 1e-10);
  }
}

TEST(Numeric, PointsAreStationaryAndLabelled) {
  std::mt19937_64 rng(47);
  const auto s = random_state(rng, kPi / 3);
  const auto rep = stationary_points_numeric(s);
  ASSERT_GE(rep.points.size(), 2u);
  for (const auto& pt : rep.points) {
    const auto& d = pt.direction;
    EXPECT_LT(stationarity_residual(s, d.theta, d.phi, pt.lambda).cwiseAbs().maxCoeff(), 1e-8);
  }
  EXPECT_TRUE(std::any_of(rep.points.begin(), rep.points.end(),
                          [](const StationaryPoint& p) { return p.branch.kind == BranchKind::P; }));
}

TEST(PmaxGeneral, DispatchIdentity) {
  std::mt19937_64 rng(48);
  for (int k = 0; k < 100; ++k) {
    const auto s = random_state(rng, 0);
    const auto a = pmax_general(s), b = pmax_gamma0(s);
    EXPECT_EQ(a.p_max, b.p_max);
    EXPECT_EQ(a.branch, b.branch);
  }
  const auto s = from_params(0.5, 0.3, 0.4, kPi / 2);
  EXPECT_EQ(pmax_general(s).p_max, pmax_gamma_half(s).p_max);
}

TEST(PmaxGeneral, QuarterMatchesBruteForce) {
  std::mt19937_64 rng(49);
  for (int k = 0; k < 50; ++k) {
    const auto s = random_state(rng, kPi / 4);
    EXPECT_NEAR(pmax_general(s).p_max, brute::pmax(s.g(), s.t(), s.h(), kPi / 4), 1e-9);
  }
}

TEST(PmaxGeneral, GenericPhaseMatchesBruteForce) {
  std::mt19937_64 rng(50);
  for (double gamma : {kPi / 3, 11 * kPi / 24, 0.1, -0.7}) {
    for (int k = 0; k < 15; ++k) {
      const auto s = random_state(rng, gamma);
      EXPECT_NEAR(pmax_general(s).p_max, brute::pmax(s.g(), s.t(), s.h(), gamma), 1e-9);
    }
  }
}

TEST(PmaxGeneral, EvenInGamma) {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 30; ++k) {
    const auto s = random_state(rng, 0.9);
    EXPECT_NEAR(pmax_general(s).p_max, pmax_general(s.with_gamma(-0.9)).p_max, 1e-12);
  }
}

TEST(PmaxGeneral, PoleLowerBound) {
  std::mt19937_64 rng(52);
  for (double gamma : {0.0, 0.5, kPi / 4, 1.2, kPi / 2}) {
    for (int k = 0; k < 20; ++k) {
      const auto s = random_state(rng, gamma);
      const double north = eigenvalue_from_direction(s, {0, 0});
      const double south = eigenvalue_from_direction(s, {kPi, 0});
      EXPECT_GE(pmax_general(s).p_max, std::max(north, south) - 1e-15);
    }
  }
}

TEST(GlobalMaxSecular, MatchesBruteForce) {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 50; ++k) {
    const auto s = random_state(rng, 1.0);
    const auto p = global_max_secular(reduced_correlations(s));
    EXPECT_NEAR(p.mu_sq, brute::pmax(s.g(), s.t(), s.h(), 1.0), 1e-9);
  }
}

TEST(PolishStationary, ConvergesFromPerturbedPoint) {
  const auto s = from_params(0.5, 0.3, 0.4, 0.6);
  const auto rc = reduced_correlations(s);
  const auto best = global_max_secular(rc);
  Vec3 d = best.direction.unit_vector() + Vec3(1e-4, -2e-4, 1e-4);
  double lambda = best.lambda + 1e-4;
  ASSERT_TRUE(polish_stationary(rc, d, lambda));
  EXPECT_LT(stationarity_residual(rc, d, lambda).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(lambda, best.lambda, 1e-10);
}
