#include "geoent/qstate.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace geoent {

namespace {

// Deviations of g^2 + 3t^2 + h^2 from 1 above this are rescaled away.
constexpr double kRenormThreshold = 1e-15;
constexpr double kRangeSlack = 1e-12;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string("non-finite ") + what);
  }
}

}  // namespace

double reduce_gamma(double gamma) {
  require_finite(gamma, "gamma");
  if (std::abs(gamma) <= kPi / 2) return gamma;
  double r = std::remainder(gamma, kPi);
  if (r > kPi / 2) r -= kPi;
  if (r < -kPi / 2) r += kPi;
  return r;
}

SymmetricState from_params(double g, double t, double h, double gamma) {
  require_finite(g, "g");
  require_finite(t, "t");
  require_finite(h, "h");
  if (g < 0 || t < 0 || h < 0) {
    throw std::invalid_argument("amplitudes g, t, h must be non-negative");
  }
  const double n2 = g * g + 3 * t * t + h * h;
  if (n2 == 0.0) throw std::invalid_argument("degenerate state");
  if (std::abs(n2 - 1.0) > kRenormThreshold) {
    const double inv = 1.0 / std::sqrt(n2);
    g *= inv;
    t *= inv;
    h *= inv;
  }
  return SymmetricState(g, t, h, reduce_gamma(gamma));
}

SymmetricState from_uv(UVPoint p, double gamma) {
  require_finite(p.u, "u");
  require_finite(p.v, "v");
  auto in_range = [](double x) { return x >= -kRangeSlack && x <= kPi / 2 + kRangeSlack; };
  if (!in_range(p.u) || !in_range(p.v)) {
    throw std::invalid_argument("(u, v) must lie in [0, pi/2]^2");
  }
  const double su = std::sin(p.u);
  const double g = std::max(0.0, su * std::cos(p.v));
  const double t = std::max(0.0, su * std::sin(p.v) / std::sqrt(3.0));
  const double h = std::max(0.0, std::cos(p.u));
  return SymmetricState(g, t, h, reduce_gamma(gamma));
}

SymmetricState SymmetricState::with_gamma(double gamma) const {
  return SymmetricState(g_, t_, h_, reduce_gamma(gamma));
}

UVPoint to_uv(const SymmetricState& s) {
  const double h = std::min(1.0, s.h());
  return {std::acos(h), std::atan2(std::sqrt(3.0) * s.t(), s.g())};
}

StateVector state_vector(const SymmetricState& s) {
  StateVector sv;
  sv.amp[basis_index(0, 0, 0)] = s.g();
  sv.amp[basis_index(0, 1, 1)] = s.t();
  sv.amp[basis_index(1, 0, 1)] = s.t();
  sv.amp[basis_index(1, 1, 0)] = s.t();
  sv.amp[basis_index(1, 1, 1)] = std::polar(s.h(), s.gamma());
  return sv;
}

double squared_norm(const Amplitudes& amp) {
  double n = 0.0;
  for (const auto& a : amp) n += std::norm(a);
  return n;
}

GeneralThreeQubitState::GeneralThreeQubitState(const Amplitudes& amp) : amp_(amp) {
  const double n2 = squared_norm(amp);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::invalid_argument("degenerate state");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& a : amp_) a *= inv;
}

GeneralThreeQubitState named_state(const NamedState& which) {
  Amplitudes amp{};
  if (const auto* ghz = std::get_if<named::Ghz>(&which)) {
    if (!(ghz->alpha >= 0.0 && ghz->alpha <= 1.0)) {
      throw std::invalid_argument("GHZ alpha must lie in [0, 1]");
    }
    amp[basis_index(0, 0, 0)] = ghz->alpha;
    amp[basis_index(1, 1, 1)] = std::sqrt(1.0 - ghz->alpha * ghz->alpha);
  } else if (std::holds_alternative<named::W>(which)) {
    const double w = 1.0 / std::sqrt(3.0);
    amp[basis_index(0, 1, 1)] = w;
    amp[basis_index(1, 0, 1)] = w;
    amp[basis_index(1, 1, 0)] = w;
  } else if (std::holds_alternative<named::PsiW>(which)) {
    amp[basis_index(0, 0, 0)] = 2.0 / 3.0;
    amp[basis_index(0, 1, 1)] = 1.0 / 3.0;
    amp[basis_index(1, 0, 1)] = 1.0 / 3.0;
    amp[basis_index(1, 1, 0)] = 1.0 / 3.0;
    amp[basis_index(1, 1, 1)] = cplx(0.0, std::sqrt(2.0) / 3.0);
  } else {
    const auto& p = std::get<named::PartialSym>(which);
    amp[basis_index(0, 0, 0)] = p.g;
    amp[basis_index(0, 1, 1)] = p.t;
    amp[basis_index(1, 0, 1)] = p.t;
    amp[basis_index(1, 1, 0)] = p.t3;
    amp[basis_index(1, 1, 1)] = std::polar(p.h, p.gamma);
  }
  return GeneralThreeQubitState(amp);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_json(const SymmetricState& s) {
  return "{\"g\":" + format_double(s.g()) + ",\"t\":" + format_double(s.t()) +
         ",\"h\":" + format_double(s.h()) + ",\"gamma\":" + format_double(s.gamma()) + "}";
}

SymmetricState state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed state JSON: ") + e.what());
  }
  for (const char* key : {"g", "t", "h", "gamma"}) {
    if (!j.contains(key) || !j[key].is_number()) {
      throw std::invalid_argument(std::string("state JSON missing numeric field ") + key);
    }
  }
  return from_params(j["g"].get<double>(), j["t"].get<double>(), j["h"].get<double>(),
                     j["gamma"].get<double>());
}

}  // namespace geoent
