#include "geoent/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "geoent/analytic.hpp"
#include "geoent/general_gamma.hpp"
#include "geoent/general_state.hpp"
#include "geoent/oracle.hpp"
#include "geoent/sweep.hpp"

namespace geoent {

namespace {

using Rng = std::mt19937_64;

struct Check {
  CheckInfo info;
  int default_samples;
  double time_limit;
  std::function<void(const VerifyConfig&, int, Rng&, CheckResult&)> body;
};

// Uniform on the positive octant of the unit sphere in (g, sqrt(3) t, h).
SymmetricState random_state(Rng& rng, double gamma) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double a = std::abs(n(rng)), b = std::abs(n(rng)), c = std::abs(n(rng));
  return from_params(a, b / std::sqrt(3.0), c, gamma);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

GeneralThreeQubitState as_general(const SymmetricState& s) {
  return GeneralThreeQubitState(state_vector(s).amp);
}

const BranchEigenvalue& entry(const std::vector<BranchEigenvalue>& evs, BranchKind k) {
  for (const auto& b : evs)
    if (b.branch.kind == k) return b;
  throw std::logic_error("missing branch entry");
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Boundary points of a criterion, n of them spread evenly along the trace.
std::vector<SymmetricState> boundary_states(double gamma, Criterion c, int n,
                                            bool g_at_least_t) {
  std::vector<SymmetricState> pts;
  for (int columns = n; columns <= 64 * n; columns *= 2) {
    pts.clear();
    for (const UVPoint& p : boundary_trace(gamma, c, columns)) {
      const SymmetricState s = from_uv(p, gamma);
      if (!g_at_least_t || s.g() >= s.t()) pts.push_back(s);
    }
    if (static_cast<int>(pts.size()) >= n) break;
  }
  std::vector<SymmetricState> out;
  for (int k = 0; k < n && !pts.empty(); ++k) out.push_back(pts[k * pts.size() / n]);
  return out;
}

void w_state(const VerifyConfig& cfg, int, Rng&, CheckResult& r) {
  const SymmetricState w = from_params(0.0, 1.0 / std::sqrt(3.0), 0.0, 0.0);
  const double target = 4.0 / 9.0;
  double worst = 0.0;
  std::ostringstream detail;
  auto note = [&](const std::string& what, double value) {
    const double dev = std::abs(value - target);
    worst = std::max(worst, dev);
    detail << what << "=" << fmt("%.1e", dev) << " ";
  };
  note("gamma0", pmax_gamma0(w).p_max);
  note("gamma_half", pmax_gamma_half(w.with_gamma(kPi / 2)).p_max);
  note("quartic", stationary_points_quarter(w.with_gamma(kPi / 4)).p_max);
  for (double gamma : {0.0, kPi / 4, kPi / 3, kPi / 2}) {
    note("newton(" + fmt("%.3f", gamma) + ")", stationary_points_numeric(w.with_gamma(gamma)).p_max);
  }
  note("alternating", alternating_maximize(as_general(w), cfg.restarts, 1e-12, cfg.seed).p_max);
  for (double gamma : {0.0, kPi / 4, kPi / 2}) {
    note("grid(" + fmt("%.3f", gamma) + ")", grid_maximize_symmetric(w.with_gamma(gamma)).p_max);
  }
  r.metrics.push_back({"|P-4/9|", worst, 1e-12});
  r.detail = detail.str();
}

void ghz(const VerifyConfig&, int n, Rng& rng, CheckResult& r) {
  double worst = 0.0;
  for (double gamma : {0.0, kPi / 2}) {
    for (int k = 0; k < n; ++k) {
      const SymmetricState s = from_params(uniform(rng, 0, 1), 0.0, uniform(rng, 0, 1), gamma);
      const double expected = std::max(s.g() * s.g(), s.h() * s.h());
      worst = std::max(worst, std::abs(pmax_general(s).p_max - expected));
    }
  }
  r.metrics.push_back({"|P-max(g^2,h^2)|", worst, 1e-12});
}

void h0_piecewise(const VerifyConfig&, int n, Rng& rng, CheckResult& r) {
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const SymmetricState s0 = from_params(uniform(rng, 0, 1), uniform(rng, 0, 1), 0.0, 0.0);
    const double g = s0.g(), t = s0.t();
    const double law = g >= 2 * t ? g * g : 4 * t * t * t / (3 * t - g);
    worst = std::max(worst, std::abs(pmax_gamma0(s0).p_max - law));
    worst = std::max(worst, std::abs(pmax_gamma_half(s0.with_gamma(kPi / 2)).p_max - law));
  }
  r.metrics.push_back({"|P-law|", worst, 1e-12});
}

void oracle_equivalence(const VerifyConfig& cfg, int n, Rng& rng, CheckResult& r) {
  for (double gamma : {0.0, kPi / 2}) {
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      const SymmetricState s = random_state(rng, gamma);
      const double oracle = alternating_maximize(as_general(s), cfg.restarts, 1e-12, cfg.seed + k).p_max;
      worst = std::max(worst, std::abs(pmax_general(s).p_max - oracle));
    }
    r.metrics.push_back({gamma == 0.0 ? "gamma=0" : "gamma=pi/2", worst, 1e-7});
  }
}

void quartic(const VerifyConfig& cfg, int n, Rng& rng, CheckResult& r) {
  double vs_oracle = 0.0, vs_newton = 0.0;
  std::vector<int> wins(6, 0);
  for (int k = 0; k < n; ++k) {
    const SymmetricState s = random_state(rng, kPi / 4);
    const GammaSolveReport rep = stationary_points_quarter(s);
    const double oracle = alternating_maximize(as_general(s), cfg.restarts, 1e-12, cfg.seed + k).p_max;
    const double newton = stationary_points_numeric(s).p_max;
    vs_oracle = std::max(vs_oracle, std::abs(rep.p_max - oracle));
    vs_newton = std::max(vs_newton, std::abs(rep.p_max - newton));
    if (rep.branch.kind == BranchKind::P) ++wins[0];
    else if (rep.branch.kind == BranchKind::Quartic) ++wins[rep.branch.index];
    else ++wins[5];
  }
  r.metrics.push_back({"vs-oracle", vs_oracle, 1e-6});
  r.metrics.push_back({"vs-newton", vs_newton, 1e-8});
  std::ostringstream d;
  d << "winners P:" << wins[0] << " Q1:" << wins[1] << " Q2:" << wins[2] << " Q3:" << wins[3]
    << " Q4:" << wins[4] << " other:" << wins[5];
  r.detail = d.str();
}

void domain_counts(const VerifyConfig& cfg, int, Rng&, CheckResult& r) {
  const std::vector<std::pair<double, int>> cases = {
      {0.0, 2}, {kPi / 4, 2}, {kPi / 3, 2}, {11 * kPi / 24, 2}, {kPi / 2, 3}};
  int wrong = 0;
  std::ostringstream d;
  for (const auto& [gamma, expected] : cases) {
    const int got = domain_map(gamma, cfg.grid_n).domain_count;
    wrong += got != expected ? 1 : 0;
    d << "gamma=" << fmt("%.4f", gamma) << ":" << got << "(want " << expected << ") ";
  }
  r.metrics.push_back({"wrong counts", double(wrong), 0.0});
  r.detail = d.str();
}

void boundary_continuity(const VerifyConfig&, int n, Rng&, CheckResult& r) {
  double worst = 0.0;
  for (const auto& s : boundary_states(0.0, Criterion::D1, n, false)) {
    const auto evs = eigenvalues_gamma0(s);
    worst = std::max(worst, std::abs(entry(evs, BranchKind::P).mu_sq - entry(evs, BranchKind::Plus).mu_sq));
  }
  r.metrics.push_back({"D1", worst, 1e-8});

  worst = 0.0;
  for (const auto& s : boundary_states(kPi / 2, Criterion::C2, n, false)) {
    const auto evs = eigenvalues_gamma_half(s);
    worst = std::max(worst, std::abs(entry(evs, BranchKind::Plus).mu_sq - entry(evs, BranchKind::Two).mu_sq));
  }
  r.metrics.push_back({"C2", worst, 1e-8});

  worst = 0.0;
  for (const auto& s : boundary_states(kPi / 2, Criterion::C3, n, true)) {
    const auto evs = eigenvalues_gamma_half(s);
    worst = std::max(worst, std::abs(entry(evs, BranchKind::P).mu_sq - entry(evs, BranchKind::Plus).mu_sq));
  }
  r.metrics.push_back({"C3 (g>=t)", worst, 1e-8});
}

void stationarity(const VerifyConfig&, int n, Rng& rng, CheckResult& r) {
  double worst = 0.0;
  long checked = 0;
  for (double gamma : {0.0, kPi / 2}) {
    for (int k = 0; k < n; ++k) {
      const SymmetricState s = random_state(rng, gamma);
      const auto evs = gamma == 0.0 ? eigenvalues_gamma0(s) : eigenvalues_gamma_half(s);
      for (const auto& b : evs) {
        if (!b.available || !b.direction) continue;
        const Vec3 res = stationarity_residual(s, b.direction->theta, b.direction->phi, b.lambda);
        worst = std::max(worst, res.cwiseAbs().maxCoeff());
        ++checked;
      }
    }
  }
  r.metrics.push_back({"residual", worst, 1e-10});
  r.detail = std::to_string(checked) + " branch points";
}

void lambda_zero_check(const VerifyConfig&, int n, Rng& rng, CheckResult& r) {
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const SymmetricState s = random_state(rng, uniform(rng, -kPi / 2, kPi / 2));
    const ProductStatePair pair = nearest_product_lambda_zero(s);
    const double mu0 = std::sqrt(lambda_zero_branch(s).mu_sq);
    const ProductTriple tr{pair.q, pair.q, pair.q_prime};
    const Qubit c = contract(state_vector(s).amp, tr, 2);
    worst = std::max(worst, std::hypot(std::abs(c[0] - mu0 * pair.q_prime[0]),
                                       std::abs(c[1] - mu0 * pair.q_prime[1])));
  }
  r.metrics.push_back({"reconstruction", worst, 1e-10});

  double ortho = 0.0;
  auto orthogonality = [&](double gamma, Criterion c) {
    for (const auto& s : boundary_states(gamma, c, n, false)) {
      const ProductStatePair p = nearest_product_lambda_zero(s);
      ortho = std::max(ortho, std::abs(std::conj(p.q[0]) * p.q_prime[0] +
                                       std::conj(p.q[1]) * p.q_prime[1]));
    }
  };
  orthogonality(0.0, Criterion::D1);
  orthogonality(kPi / 2, Criterion::C3);
  r.metrics.push_back({"<q|q'> on D1=0, C3=0", ortho, 1e-8});
}

void h0_limit(const VerifyConfig&, int n, Rng& rng, CheckResult& r) {
  double worst = 0.0;
  int availability_mismatch = 0;
  for (int k = 0; k < n; ++k) {
    const SymmetricState s = from_params(uniform(rng, 0, 1), uniform(rng, 0, 1), 1e-8, 0.0);
    const double g = s.g(), t = s.t();
    const auto a = eigenvalues_gamma0(s);
    const auto b = eigenvalues_gamma_half(s.with_gamma(kPi / 2));
    auto cmp = [&](BranchKind ka, BranchKind kb, double limit, bool available) {
      const auto& x = entry(a, ka);
      const auto& y = entry(b, kb);
      if (x.available != available || y.available != available) ++availability_mismatch;
      if (!available) return;
      worst = std::max({worst, std::abs(x.mu_sq - y.mu_sq), std::abs(x.mu_sq - limit)});
    };
    cmp(BranchKind::P, BranchKind::P, g * g, true);
    cmp(BranchKind::One, BranchKind::One, t * t, true);
    cmp(BranchKind::Two, BranchKind::Plus, 4 * t * t * t / (3 * t + g), true);
    cmp(BranchKind::Two, BranchKind::Minus, 4 * t * t * t / (3 * t + g), true);
    cmp(BranchKind::Plus, BranchKind::Two, 4 * t * t * t / (3 * t - g), g <= 2 * t);
    cmp(BranchKind::Minus, BranchKind::Two, 4 * t * t * t / (3 * t - g), g <= 2 * t);
  }
  r.metrics.push_back({"pair mismatch", worst, 1e-6});
  r.metrics.push_back({"availability mismatch", double(availability_mismatch), 0.0});
}

void partial_symmetric(const VerifyConfig& cfg, int, Rng&, CheckResult& r) {
  const int n = cfg.partial_grid_n;
  int wrong = 0;
  double residual = 0.0;
  std::ostringstream d;
  for (double ratio : {0.5, 0.8, 1.5}) {
    std::vector<BranchLabel> labels(static_cast<std::size_t>(n) * n);
    std::vector<double> res(labels.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const auto psi = partial_symmetric_from_uv({cell_center(i, n), cell_center(j, n)}, ratio);
        const GeneralCell cell = classify_general_state(psi, 20, cfg.seed + i * n + j);
        labels[i * n + j] = cell.branch;
        res[i * n + j] = cell.point.residual;
      }
    }
    const int count = count_components(labels, n);
    wrong += count != 2 ? 1 : 0;
    residual = std::max(residual, *std::max_element(res.begin(), res.end()));
    d << "t3/t=" << ratio << ":" << count << " ";
  }
  r.metrics.push_back({"wrong counts", double(wrong), 0.0});
  r.metrics.push_back({"pair residual", residual, 1e-8});
  r.detail = d.str();
}

const std::vector<Check>& checks() {
  static const std::vector<Check> all = {
      {{"w-state", "W state P_max = 4/9 by every method"}, 0, 1.0, w_state},
      {{"ghz", "GHZ family P_max = max(g^2, h^2)"}, 100, 1.0, ghz},
      {{"h0-piecewise", "h = 0 piecewise law at gamma 0 and pi/2"}, 100, 1.0, h0_piecewise},
      {{"oracle-equivalence", "closed forms vs alternating oracle"}, 1000, 120.0, oracle_equivalence},
      {{"quartic", "gamma = pi/4 quartic vs oracle and Newton"}, 200, 60.0, quartic},
      {{"domain-counts", "applicable-domain counts on 200x200 maps"}, 0, 300.0, domain_counts},
      {{"boundary-continuity", "competing branches agree on boundaries"}, 200, 0.0, boundary_continuity},
      {{"stationarity", "closed-form branches solve the Lagrange system"}, 10000, 0.0, stationarity},
      {{"lambda-zero", "lambda = 0 nearest product state"}, 1000, 0.0, lambda_zero_check},
      {{"h0-limit", "gamma 0 and pi/2 eigenvalues coincide as h -> 0"}, 100, 0.0, h0_limit},
      {{"partial-symmetric", "partially symmetric state has two domains"}, 0, 600.0, partial_symmetric},
  };
  return all;
}

}  // namespace

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> catalog = [] {
    std::vector<CheckInfo> out;
    for (const auto& c : checks()) out.push_back(c.info);
    return out;
  }();
  return catalog;
}

CheckResult run_check(const std::string& id, const VerifyConfig& cfg) {
  if (cfg.samples < 0) throw std::invalid_argument("samples must be positive");
  const auto& all = checks();
  for (std::size_t k = 0; k < all.size(); ++k) {
    const Check& c = all[k];
    if (c.info.id != id) continue;
    CheckResult r;
    r.number = static_cast<int>(k) + 1;
    r.id = c.info.id;
    r.title = c.info.title;
    r.time_limit = c.time_limit;
    Rng rng(cfg.seed * 1000003ULL + k);
    const int n = cfg.samples > 0 ? cfg.samples : c.default_samples;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(cfg, n, rng, r);
    } catch (const std::exception& e) {
      r.metrics.push_back({"exception", 1.0, 0.0});
      r.detail = std::string("threw: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = !r.metrics.empty() &&
               std::all_of(r.metrics.begin(), r.metrics.end(), [](const Metric& m) { return m.ok(); }) &&
               (r.time_limit <= 0.0 || r.seconds <= r.time_limit);
    return r;
  }
  throw std::invalid_argument("unknown check id: " + id);
}

std::vector<CheckResult> run_checks(const VerifyConfig& cfg, const std::vector<std::string>& only) {
  for (const auto& id : only) {
    const auto& cat = check_catalog();
    if (std::none_of(cat.begin(), cat.end(), [&](const CheckInfo& c) { return c.id == id; })) {
      throw std::invalid_argument("unknown check id: " + id);
    }
  }
  std::vector<CheckResult> out;
  for (const auto& c : check_catalog()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    out.push_back(run_check(c.id, cfg));
  }
  return out;
}

std::string format_check(const CheckResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  [" << r.number << "] " << r.id << ": ";
  for (std::size_t k = 0; k < r.metrics.size(); ++k) {
    const Metric& m = r.metrics[k];
    os << (k ? "; " : "") << m.name << " worst " << fmt("%.3g", m.worst) << " tol "
       << fmt("%.3g", m.tolerance);
  }
  os << "; " << fmt("%.2f", r.seconds) << " s";
  if (r.time_limit > 0.0) os << " (limit " << fmt("%.0f", r.time_limit) << " s)";
  if (!r.detail.empty()) os << "  | " << r.detail;
  return os.str();
}

}  // namespace geoent
