#pragma once

// Symmetric three-qubit states g|000> + t(|011>+|101>+|110>) + e^{i gamma} h|111>
// and the general 8-amplitude states used by the brute-force checks.

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <variant>

namespace geoent {

using cplx = std::complex<double>;
using Amplitudes = std::array<cplx, 8>;

inline constexpr double kPi = 3.14159265358979323846;

// Basis state |abc> lives at index 4a + 2b + c.
constexpr std::size_t basis_index(int a, int b, int c) {
  return static_cast<std::size_t>(4 * a + 2 * b + c);
}

struct UVPoint {
  double u = 0.0;
  double v = 0.0;
};

class SymmetricState;

SymmetricState from_params(double g, double t, double h, double gamma);
SymmetricState from_uv(UVPoint p, double gamma);

/// Normalized (g, t, h, gamma) with g, t, h >= 0 and |gamma| <= pi/2.
/// Only constructible through from_params / from_uv, which enforce the invariants.
class SymmetricState {
 public:
  double g() const noexcept { return g_; }
  double t() const noexcept { return t_; }
  double h() const noexcept { return h_; }
  double gamma() const noexcept { return gamma_; }

  /// Same amplitudes with a different phase; gamma is reduced modulo pi.
  SymmetricState with_gamma(double gamma) const;

  friend bool operator==(const SymmetricState&, const SymmetricState&) = default;

 private:
  SymmetricState(double g, double t, double h, double gamma)
      : g_(g), t_(t), h_(h), gamma_(gamma) {}

  double g_;
  double t_;
  double h_;
  double gamma_;

  friend SymmetricState from_params(double, double, double, double);
  friend SymmetricState from_uv(UVPoint, double);
};

/// Reduces a finite phase into [-pi/2, pi/2] using the period pi of the family.
/// Values already inside the closed interval are returned unchanged.
double reduce_gamma(double gamma);

UVPoint to_uv(const SymmetricState& s);

struct StateVector {
  Amplitudes amp{};
};

StateVector state_vector(const SymmetricState& s);

/// Arbitrary normalized three-qubit pure state.
class GeneralThreeQubitState {
 public:
  /// Normalizes `amp`; throws std::invalid_argument for the zero vector.
  explicit GeneralThreeQubitState(const Amplitudes& amp);
  explicit GeneralThreeQubitState(const StateVector& sv) : GeneralThreeQubitState(sv.amp) {}

  const Amplitudes& amplitudes() const noexcept { return amp_; }
  const cplx& operator[](std::size_t i) const { return amp_[i]; }

 private:
  Amplitudes amp_;
};

double squared_norm(const Amplitudes& amp);

namespace named {
struct Ghz {
  double alpha = 1.0 / 1.4142135623730951;  // beta = sqrt(1 - alpha^2)
};
struct W {};
struct PsiW {};
struct PartialSym {
  double g = 0.0;
  double t = 0.0;
  double t3 = 0.0;
  double h = 0.0;
  double gamma = 0.0;
};
}  // namespace named

using NamedState = std::variant<named::Ghz, named::W, named::PsiW, named::PartialSym>;

GeneralThreeQubitState named_state(const NamedState& which);

/// {"g":...,"t":...,"h":...,"gamma":...} with 17 significant digits.
std::string to_json(const SymmetricState& s);
SymmetricState state_from_json(const std::string& text);

/// "%.17g" formatting shared by the JSON and CSV writers.
std::string format_double(double x);

}  // namespace geoent
