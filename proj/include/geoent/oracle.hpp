#pragma once

// Brute-force maximal overlap with product states, independent of the
// closed-form machinery.

#include <cstdint>

#include "geoent/qstate.hpp"
#include "geoent/stationarity.hpp"

namespace geoent {

struct ProductTriple {
  Qubit q1{};
  Qubit q2{};
  Qubit q3{};
};

struct OracleResult {
  double p_max = 0.0;
  ProductTriple triple;
  int iterations = 0;
  int restarts_used = 0;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

/// <q1 q2 q3 | psi>
cplx overlap_amplitude(const ProductTriple& triple, const Amplitudes& psi);
double overlap(const ProductTriple& triple, const GeneralThreeQubitState& psi);

/// Unnormalized optimal factor `k` (0, 1, 2) given the other two factors.
Qubit contract(const Amplitudes& psi, const ProductTriple& triple, int k);

/// Cyclic exact single-factor updates from random Bloch-uniform triples.
/// Restarts run in parallel; the result depends only on (psi, restarts, tol, seed).
OracleResult alternating_maximize(const GeneralThreeQubitState& psi, int restarts = 50,
                                  double tol = 1e-12, std::uint64_t seed = kDefaultSeed);
/// Same computation, single-threaded.
OracleResult alternating_maximize_serial(const GeneralThreeQubitState& psi, int restarts = 50,
                                         double tol = 1e-12, std::uint64_t seed = kDefaultSeed);

/// Maximizes mu^2(s) over a (theta, phi) grid, then refines the best cell by
/// monotone fixed-point ascent.
OracleResult grid_maximize_symmetric(const SymmetricState& s, int resolution = 512);

}  // namespace geoent
