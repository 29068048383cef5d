#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "geoent/qstate.hpp"

using namespace geoent;

namespace {

double norm_sq(const SymmetricState& s) { return s.g() * s.g() + 3 * s.t() * s.t() + s.h() * s.h(); }

}  // namespace

TEST(FromParams, ProductState) {
  const auto s = from_params(1, 0, 0, 0);
  EXPECT_EQ(s.g(), 1.0);
  EXPECT_EQ(s.t(), 0.0);
  EXPECT_EQ(s.h(), 0.0);
}

TEST(FromParams, WState) {
  const auto s = from_params(0, 1 / std::sqrt(3.0), 0, 0);
  EXPECT_NEAR(s.t(), 1 / std::sqrt(3.0), 1e-16);
  EXPECT_NEAR(norm_sq(s), 1.0, 1e-15);
}

TEST(FromParams, RescalesUnnormalizedInput) {
  const auto s = from_params(1, 1, 1, 0);
  const double x = 1 / std::sqrt(5.0);
  EXPECT_NEAR(s.g(), x, 1e-15);
  EXPECT_NEAR(s.t(), x, 1e-15);
  EXPECT_NEAR(s.h(), x, 1e-15);
}

TEST(FromParams, SmallDeviationStillMeetsNormInvariant) {
  const auto s = from_params(1 + 5e-10, 0, 0, 0);
  EXPECT_NEAR(norm_sq(s), 1.0, 1e-12);
}

TEST(FromParams, Errors) {
  EXPECT_THROW(from_params(0, 0, 0, 0), std::invalid_argument);
  EXPECT_THROW(from_params(-0.1, 0.5, 0.5, 0), std::invalid_argument);
  EXPECT_THROW(from_params(NAN, 0.5, 0.5, 0), std::invalid_argument);
  EXPECT_THROW(from_params(0.5, 0.5, 0.5, INFINITY), std::invalid_argument);
  try {
    from_params(0, 0, 0, 0);
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "degenerate state");
  }
}

TEST(ReduceGamma, PeriodPi) {
  EXPECT_DOUBLE_EQ(reduce_gamma(0.3), 0.3);
  EXPECT_DOUBLE_EQ(reduce_gamma(kPi / 2), kPi / 2);
  EXPECT_NEAR(reduce_gamma(0.3 + kPi), 0.3, 1e-15);
  EXPECT_NEAR(reduce_gamma(0.3 - 3 * kPi), 0.3, 1e-14);
  EXPECT_LE(std::abs(reduce_gamma(2.0)), kPi / 2);
}

TEST(FromUv, Corners) {
  auto s = from_uv({kPi / 2, 0}, 0);
  EXPECT_NEAR(s.g(), 1, 1e-15);
  EXPECT_NEAR(s.t(), 0, 1e-15);
  EXPECT_NEAR(s.h(), 0, 1e-15);
  s = from_uv({0, 0.7}, 0);
  EXPECT_NEAR(s.g(), 0, 1e-15);
  EXPECT_NEAR(s.t(), 0, 1e-15);
  EXPECT_NEAR(s.h(), 1, 1e-15);
}

TEST(FromUv, TriplePoint) {
  const auto s = from_uv({std::acos(std::sqrt(2.0) / 3), std::atan(std::sqrt(3.0) / 2)}, kPi / 2);
  EXPECT_NEAR(s.g(), 2.0 / 3, 1e-14);
  EXPECT_NEAR(s.t(), 1.0 / 3, 1e-14);
  EXPECT_NEAR(s.h(), std::sqrt(2.0) / 3, 1e-14);
}

TEST(FromUv, RangeChecked) {
  EXPECT_THROW(from_uv({-0.1, 0.2}, 0), std::invalid_argument);
  EXPECT_THROW(from_uv({0.2, 2.0}, 0), std::invalid_argument);
}

TEST(ToUv, Examples) {
  auto p = to_uv(from_params(1, 0, 0, 0));
  EXPECT_NEAR(p.u, kPi / 2, 1e-15);
  EXPECT_NEAR(p.v, 0, 1e-15);
  p = to_uv(from_params(2.0 / 3, 1.0 / 3, std::sqrt(2.0) / 3, kPi / 2));
  EXPECT_NEAR(p.u, std::acos(std::sqrt(2.0) / 3), 1e-12);
  EXPECT_NEAR(p.v, std::atan(std::sqrt(3.0) / 2), 1e-12);
}

TEST(ToUv, RoundTripOnRandomPoints) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0, kPi / 2);
  for (int k = 0; k < 100; ++k) {
    // Keep away from the chart's own singular edge u = 0 where v is undefined.
    const UVPoint p{0.01 + 0.99 * d(rng), d(rng)};
    const UVPoint q = to_uv(from_uv(p, 0.1));
    EXPECT_NEAR(q.u, p.u, 1e-12);
    EXPECT_NEAR(q.v, p.v, 1e-12);
  }
}

TEST(FromUv, NormalizationOnDenseGrid) {
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const auto s = from_uv({i * kPi / 200, j * kPi / 200}, 0);
      worst = std::max(worst, std::abs(norm_sq(s) - 1.0));
    }
  }
  EXPECT_LT(worst, 1e-14);
}

TEST(StateVector, WAmplitudes) {
  const auto sv = state_vector(from_params(0, 1 / std::sqrt(3.0), 0, 0));
  for (int k = 0; k < 8; ++k) {
    const bool weight_two = k == 3 || k == 5 || k == 6;
    EXPECT_NEAR(std::abs(sv.amp[k]), weight_two ? 1 / std::sqrt(3.0) : 0.0, 1e-15) << k;
  }
}

TEST(StateVector, GhzAndPhase) {
  auto sv = state_vector(from_params(0.6, 0, 0.8, 0));
  EXPECT_NEAR(sv.amp[0].real(), 0.6, 1e-15);
  EXPECT_NEAR(sv.amp[7].real(), 0.8, 1e-15);
  sv = state_vector(from_params(0, 0, 1, kPi / 2));
  EXPECT_NEAR(sv.amp[7].real(), 0.0, 1e-15);
  EXPECT_NEAR(sv.amp[7].imag(), 1.0, 1e-15);
}

TEST(StateVector, UnitNorm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(0, 1);
  for (int k = 0; k < 200; ++k) {
    const auto sv = state_vector(from_params(d(rng), d(rng), d(rng), d(rng) * 3 - 1.5));
    EXPECT_NEAR(squared_norm(sv.amp), 1.0, 1e-12);
  }
}

TEST(NamedState, References) {
  const auto w = named_state(named::W{});
  EXPECT_NEAR(std::abs(w[basis_index(1, 1, 0)]), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(squared_norm(w.amplitudes()), 1.0, 1e-14);

  const auto psi = named_state(named::PsiW{});
  EXPECT_NEAR(psi[0].real(), 2.0 / 3, 1e-15);
  EXPECT_NEAR(psi[7].imag(), std::sqrt(2.0) / 3, 1e-15);

  const auto ghz = named_state(named::Ghz{1 / std::sqrt(2.0)});
  EXPECT_NEAR(ghz[0].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(ghz[7].real(), 1 / std::sqrt(2.0), 1e-15);

  const auto part = named_state(named::PartialSym{1, 1, 2, 1, 0});
  EXPECT_NEAR(squared_norm(part.amplitudes()), 1.0, 1e-14);
  EXPECT_NEAR(part[basis_index(1, 1, 0)].real(), 2 / std::sqrt(8.0), 1e-15);

  EXPECT_THROW(named_state(named::PartialSym{0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST(Json, RoundTripIsExact) {
  const auto s = from_params(0.3, 0.41, 0.2, 0.77);
  const auto back = state_from_json(to_json(s));
  EXPECT_EQ(back, s);
}

TEST(Json, MalformedInput) {
  EXPECT_THROW(state_from_json("{"), std::invalid_argument);
  EXPECT_THROW(state_from_json("{\"g\":1,\"t\":0,\"h\":0}"), std::invalid_argument);
}
