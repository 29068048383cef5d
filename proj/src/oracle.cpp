#include "geoent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <omp.h>

namespace geoent {

namespace {

constexpr int kMaxSweeps = 100000;

cplx amp_at(const Amplitudes& psi, int a, int b, int c) { return psi[basis_index(a, b, c)]; }

// Removes the global phase so that the first nonzero component is real positive.
Qubit normalized(Qubit q) {
  const double n = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
  const cplx lead = std::abs(q[0]) > 1e-300 ? q[0] : q[1];
  const cplx phase = std::conj(lead) / std::abs(lead);
  return {q[0] * phase / n, q[1] * phase / n};
}

Qubit random_qubit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z = 1.0 - 2.0 * unit(rng);
  const double phi = 2 * kPi * unit(rng);
  const double theta = std::acos(std::clamp(z, -1.0, 1.0));
  return {cplx(std::cos(theta / 2)), std::polar(std::sin(theta / 2), phi)};
}

Qubit& factor(ProductTriple& t, int k) { return k == 0 ? t.q1 : (k == 1 ? t.q2 : t.q3); }

auto key(const ProductTriple& t) {
  return std::make_tuple(t.q1[0].real(), t.q1[0].imag(), t.q1[1].real(), t.q1[1].imag(),
                         t.q2[0].real(), t.q2[0].imag(), t.q2[1].real(), t.q2[1].imag(),
                         t.q3[0].real(), t.q3[0].imag(), t.q3[1].real(), t.q3[1].imag());
}

bool better(const OracleResult& a, const OracleResult& b) {
  if (a.p_max != b.p_max) return a.p_max > b.p_max;
  return key(a.triple) < key(b.triple);
}

OracleResult single_run(const GeneralThreeQubitState& psi, double tol, std::uint64_t seed,
                        int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  const Amplitudes& a = psi.amplitudes();
  ProductTriple t{random_qubit(rng), random_qubit(rng), random_qubit(rng)};

  double current = std::norm(overlap_amplitude(t, a));
  int sweeps = 0;
  for (; sweeps < kMaxSweeps; ++sweeps) {
    const double before = current;
    for (int k = 0; k < 3; ++k) {
      const Qubit c = contract(a, t, k);
      const double n2 = std::norm(c[0]) + std::norm(c[1]);
      if (!(n2 > 1e-28)) {
        // psi is orthogonal to the two fixed factors.
        factor(t, k) = random_qubit(rng);
        current = std::norm(overlap_amplitude(t, a));
        continue;
      }
      factor(t, k) = normalized(c);
      current = n2;
    }
    if (current > 1e-28 && current - before < tol) break;
  }
  for (int k = 0; k < 3; ++k) factor(t, k) = normalized(factor(t, k));
  OracleResult out;
  out.triple = t;
  out.p_max = std::clamp(std::norm(overlap_amplitude(t, a)), 0.0, 1.0);
  out.iterations = sweeps + 1;
  return out;
}

OracleResult merge(const std::vector<OracleResult>& runs) {
  OracleResult best = runs.front();
  for (const auto& r : runs) {
    if (better(r, best)) best = r;
  }
  best.restarts_used = static_cast<int>(runs.size());
  return best;
}

void check_args(int restarts, double tol) {
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

}  // namespace

cplx overlap_amplitude(const ProductTriple& t, const Amplitudes& psi) {
  cplx acc = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        acc += std::conj(t.q1[a] * t.q2[b] * t.q3[c]) * amp_at(psi, a, b, c);
      }
    }
  }
  return acc;
}

double overlap(const ProductTriple& triple, const GeneralThreeQubitState& psi) {
  return std::norm(overlap_amplitude(triple, psi.amplitudes()));
}

Qubit contract(const Amplitudes& psi, const ProductTriple& t, int k) {
  Qubit out{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        const cplx v = amp_at(psi, a, b, c);
        switch (k) {
          case 0: out[a] += std::conj(t.q2[b] * t.q3[c]) * v; break;
          case 1: out[b] += std::conj(t.q1[a] * t.q3[c]) * v; break;
          default: out[c] += std::conj(t.q1[a] * t.q2[b]) * v; break;
        }
      }
    }
  }
  return out;
}

OracleResult alternating_maximize(const GeneralThreeQubitState& psi, int restarts, double tol,
                                  std::uint64_t seed) {
  check_args(restarts, tol);
  std::vector<OracleResult> runs(restarts);
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel() && restarts > 1)
  for (int i = 0; i < restarts; ++i) runs[i] = single_run(psi, tol, seed, i);
  return merge(runs);
}

OracleResult alternating_maximize_serial(const GeneralThreeQubitState& psi, int restarts,
                                         double tol, std::uint64_t seed) {
  check_args(restarts, tol);
  std::vector<OracleResult> runs(restarts);
  for (int i = 0; i < restarts; ++i) runs[i] = single_run(psi, tol, seed, i);
  return merge(runs);
}

OracleResult grid_maximize_symmetric(const SymmetricState& s, int resolution) {
  if (resolution < 64) throw std::invalid_argument("resolution must be at least 64");
  const ReducedCorrelations rc = reduced_correlations(s);
  auto value = [&](const Vec3& x) { return 2.0 * rc.r.dot(x) + x.dot(rc.G * x); };

  Vec3 best_dir = Vec3::UnitZ();
  double best = value(best_dir);
  for (int i = 0; i < resolution; ++i) {
    const double theta = kPi * i / (resolution - 1);
    const double st = std::sin(theta), ct = std::cos(theta);
    for (int j = 0; j < resolution; ++j) {
      const double phi = 2 * kPi * j / resolution;
      const Vec3 x(st * std::cos(phi), st * std::sin(phi), ct);
      const double f = value(x);
      if (f > best) {
        best = f;
        best_dir = x;
      }
    }
  }

  // With G + kappa I positive semidefinite the objective is convex, so
  // maximizing its linearization never decreases it.
  const double kappa = rc.G.cwiseAbs().rowwise().sum().maxCoeff();
  const Mat3 shifted = rc.G + kappa * Mat3::Identity();
  Vec3 x = best_dir;
  int iters = 0;
  for (; iters < 200000; ++iters) {
    const Vec3 next = (rc.r + shifted * x).normalized();
    const double f = value(next);
    const double step = (next - x).norm();
    x = next;
    if (f - best < 1e-17 && step < 1e-13) {
      best = std::max(best, f);
      break;
    }
    best = std::max(best, f);
  }

  OracleResult out;
  const Qubit q = qubit_from_direction(SphericalDirection::from_vector(x));
  out.triple.q1 = q;
  out.triple.q2 = q;
  const StateVector sv = state_vector(s);
  const Qubit third = contract(sv.amp, out.triple, 2);
  out.triple.q3 = normalized(third);
  out.p_max = std::clamp(std::norm(overlap_amplitude(out.triple, sv.amp)), 0.0, 1.0);
  out.iterations = iters + 1;
  out.restarts_used = 1;
  return out;
}

}  // namespace geoent
