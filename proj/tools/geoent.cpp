// geoent: maximal product-state overlap of symmetric three-qubit states.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "geoent/acceptance.hpp"
#include "geoent/analytic.hpp"
#include "geoent/general_gamma.hpp"
#include "geoent/oracle.hpp"
#include "geoent/qstate.hpp"
#include "geoent/sweep.hpp"

using namespace geoent;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kIoError = 2, kUsage = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StateArgs {
  std::optional<double> g, t, h, u, v;
  std::optional<double> gamma, gamma_pi;

  void add_to(CLI::App* app, bool with_state) {
    if (with_state) {
      app->add_option("--g", g, "amplitude of |000>");
      app->add_option("--t", t, "amplitude of |011>, |101>, |110>");
      app->add_option("--h", h, "modulus of the |111> amplitude");
      app->add_option("--u", u, "chart angle u in [0, pi/2]");
      app->add_option("--v", v, "chart angle v in [0, pi/2]");
    }
    auto* a = app->add_option("--gamma", gamma, "phase of the |111> amplitude (radians)");
    auto* b = app->add_option("--gamma-pi", gamma_pi, "phase as a multiple of pi");
    a->excludes(b);
  }

  double phase() const {
    if (gamma_pi) return *gamma_pi * kPi;
    return gamma.value_or(0.0);
  }

  SymmetricState state() const {
    const bool any_ght = g || t || h, any_uv = u || v;
    if (any_ght == any_uv) throw UsageError("give either --g --t --h or --u --v");
    try {
      if (any_ght) {
        if (!(g && t && h)) throw UsageError("--g, --t and --h must be given together");
        return from_params(*g, *t, *h, phase());
      }
      if (!(u && v)) throw UsageError("--u and --v must be given together");
      return from_uv({*u, *v}, phase());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  return format_double(x);
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string qubit_text(const Qubit& q) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "(%.12f%+.12fi, %.12f%+.12fi)", q[0].real(), q[0].imag(),
                q[1].real(), q[1].imag());
  return buf;
}

Qubit unit(Qubit q) {
  const double n = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
  return {q[0] / n, q[1] / n};
}

bool factorized_phase(const SymmetricState& s) {
  const double a = std::abs(s.gamma());
  return a < 1e-12 || std::abs(a - kPi / 2) < 1e-12;
}

// ------------------------------------------------------------------ eval

int cmd_eval(const StateArgs& args, bool json) {
  const SymmetricState s = args.state();
  const PmaxResult res = pmax_general(s);
  const CriteriaValues& c = res.criteria;

  std::vector<BranchEigenvalue> table;
  std::vector<StationaryPoint> points;
  if (factorized_phase(s)) {
    table = std::abs(s.gamma()) < 1e-12 ? eigenvalues_gamma0(s) : eigenvalues_gamma_half(s);
  } else {
    const double a = std::abs(s.gamma());
    points = std::abs(a - kPi / 4) < 1e-12 ? stationary_points_quarter(s).points
                                           : stationary_points_numeric(s).points;
  }

  if (json) {
    std::ostringstream os;
    os << "{\"state\":" << to_json(s) << ",\"p_max\":" << num(res.p_max)
       << ",\"G\":" << num(1.0 - res.p_max) << ",\"branch\":" << quoted(res.branch.name())
       << ",\"boundary\":" << (res.boundary ? "true" : "false") << ",\"branches\":[";
    bool first = true;
    for (const auto& b : table) {
      os << (first ? "" : ",") << "{\"branch\":" << quoted(b.branch.name())
         << ",\"mu_sq\":" << num(b.mu_sq) << ",\"lambda\":" << num(b.lambda)
         << ",\"available\":" << (b.available ? "true" : "false") << "}";
      first = false;
    }
    for (const auto& p : points) {
      os << (first ? "" : ",") << "{\"branch\":" << quoted(p.branch.name())
         << ",\"mu_sq\":" << num(p.mu_sq) << ",\"lambda\":" << num(p.lambda)
         << ",\"available\":true,\"theta\":" << num(p.direction.theta)
         << ",\"phi\":" << num(p.direction.phi) << "}";
      first = false;
    }
    os << "],\"criteria\":{\"D1\":" << num(c.D1) << ",\"C1\":" << num(c.C1)
       << ",\"C2\":" << num(c.C2) << ",\"C3\":" << num(c.C3) << ",\"Cplus\":" << num(c.Cplus)
       << "}}";
    std::cout << os.str() << "\n";
    return kOk;
  }

  std::printf("state    g=%.17g t=%.17g h=%.17g gamma=%.17g\n", s.g(), s.t(), s.h(), s.gamma());
  std::printf("P_max    %.17g\n", res.p_max);
  std::printf("G        %.17g\n", 1.0 - res.p_max);
  std::printf("branch   %s%s\n", res.branch.name().c_str(), res.boundary ? " (on boundary)" : "");
  std::printf("\n%-10s %-24s %-24s %s\n", "branch", "mu^2", "lambda", "available");
  for (const auto& b : table) {
    std::printf("%-10s %-24.17g %-24.17g %s\n", b.branch.name().c_str(), b.mu_sq, b.lambda,
                b.available ? "yes" : "no");
  }
  for (const auto& p : points) {
    std::printf("%-10s %-24.17g %-24.17g yes  theta=%.12f phi=%.12f\n", p.branch.name().c_str(),
                p.mu_sq, p.lambda, p.direction.theta, p.direction.phi);
  }
  std::printf("\ncriteria D1=%.17g C1=%.17g C2=%.17g C3=%.17g Cplus=%.17g\n", c.D1, c.C1, c.C2,
              c.C3, c.Cplus);
  return kOk;
}

// ------------------------------------------------------------ sweep/domains

void check_grid(int grid) {
  if (grid < 2) throw UsageError("--grid must be at least 2");
}

void write_records(const std::string& path, const std::vector<SweepRecord>& records) {
  if (path.empty() || path == "-") {
    write_csv(std::cout, records);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_csv(out, records);
  out.flush();
  if (!out) throw IoError("write to " + path + " failed");
}

int cmd_sweep(const StateArgs& args, int grid, const std::string& path) {
  check_grid(grid);
  const auto records = run_sweep(args.phase(), grid);
  write_records(path, records);
  if (!path.empty() && path != "-") {
    std::printf("wrote %zu records to %s\n", records.size(), path.c_str());
  }
  return kOk;
}

int cmd_domains(const StateArgs& args, int grid, const std::string& path) {
  check_grid(grid);
  const auto records = run_sweep(args.phase(), grid);
  if (!path.empty()) write_records(path, records);
  const DomainMap map = domain_map_from_records(records, grid);
  std::printf("domains: %d\n", map.domain_count);
  std::printf("boundary fraction: %.6f\n", map.boundary_fraction);
  return kOk;
}

// ------------------------------------------------------------- oracle/nearest

int cmd_oracle(const StateArgs& args, int restarts, std::uint64_t seed, double tol) {
  if (restarts < 1) throw UsageError("--restarts must be at least 1");
  if (!(tol > 0.0)) throw UsageError("--tol must be positive");
  const SymmetricState s = args.state();
  const OracleResult alt = alternating_maximize(GeneralThreeQubitState(state_vector(s).amp),
                                                restarts, tol, seed);
  const OracleResult grid = grid_maximize_symmetric(s);
  std::printf("seed     %llu\n", static_cast<unsigned long long>(seed));
  std::printf("alternating P_max %.17g  (%d restarts, %d sweeps in best run)\n", alt.p_max,
              alt.restarts_used, alt.iterations);
  std::printf("  q1 = %s\n  q2 = %s\n  q3 = %s\n", qubit_text(alt.triple.q1).c_str(),
              qubit_text(alt.triple.q2).c_str(), qubit_text(alt.triple.q3).c_str());
  std::printf("grid        P_max %.17g\n", grid.p_max);
  std::printf("closed form P_max %.17g\n", pmax_general(s).p_max);
  return kOk;
}

int cmd_nearest(const StateArgs& args) {
  const SymmetricState s = args.state();
  const PmaxResult res = pmax_general(s);
  const StateVector sv = state_vector(s);
  ProductTriple tr;
  tr.q1 = tr.q2 = qubit_from_direction(res.direction);
  tr.q3 = unit(contract(sv.amp, tr, 2));
  std::printf("P_max    %.17g  branch %s\n", res.p_max, res.branch.name().c_str());
  std::printf("q  = %s\nq' = %s\n", qubit_text(tr.q1).c_str(), qubit_text(tr.q3).c_str());
  std::printf("overlap  %.17g\n", std::norm(overlap_amplitude(tr, sv.amp)));
  try {
    const ProductStatePair pair = nearest_product_lambda_zero(s);
    const StationaryPoint z = lambda_zero_branch(s);
    std::printf("\nlambda = 0 stationary point (mu^2 = %.17g)\n", z.mu_sq);
    std::printf("q  = %s\nq' = %s\n", qubit_text(pair.q).c_str(), qubit_text(pair.q_prime).c_str());
  } catch (const std::domain_error&) {
    std::printf("\nlambda = 0 stationary point undefined for this state\n");
  }
  return kOk;
}

// ------------------------------------------------------------------ verify

int cmd_verify(std::optional<int> samples, std::uint64_t seed, const std::vector<std::string>& only,
               int grid) {
  if (samples && *samples < 1) throw UsageError("--samples must be at least 1");
  VerifyConfig cfg;
  cfg.samples = samples.value_or(0);
  cfg.seed = seed;
  cfg.grid_n = grid;
  for (const auto& id : only) {
    bool known = false;
    for (const auto& c : check_catalog()) known = known || c.id == id;
    if (!known) throw UsageError("unknown check id: " + id);
  }
  std::printf("seed %llu\n", static_cast<unsigned long long>(seed));
  std::vector<std::string> failed;
  for (const auto& c : check_catalog()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const CheckResult r = run_check(c.id, cfg);
    std::printf("%s\n", format_check(r).c_str());
    std::fflush(stdout);
    if (!r.passed) failed.push_back(r.id);
  }
  if (!failed.empty()) {
    std::string list;
    for (const auto& id : failed) list += (list.empty() ? "" : ", ") + id;
    std::fprintf(stderr, "failed: %s\n", list.c_str());
    return kCheckFailed;
  }
  std::printf("all checks passed\n");
  return kOk;
}

void apply_thread_cap() {
  const char* env = std::getenv("GEOENT_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw UsageError("GEOENT_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_max_threads())));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric entanglement of symmetric three-qubit states"};
  app.require_subcommand(1);
  // -h would clash with the --h amplitude option
  app.set_help_flag("--help", "print this help message and exit");

  StateArgs eval_args, sweep_args, domains_args, oracle_args, nearest_args;
  bool json = false;
  int sweep_grid = 100, domains_grid = 200, verify_grid = 200;
  int restarts = 50;
  double tol = 1e-12;
  std::uint64_t seed = kDefaultSeed;
  std::optional<int> samples;
  std::vector<std::string> only;
  std::string sweep_out, domains_out;

  auto* eval = app.add_subcommand("eval", "P_max, branch table and criteria for one state");
  eval_args.add_to(eval, true);
  eval->add_flag("--json", json, "machine-readable output");

  auto* sweep = app.add_subcommand("sweep", "write a (u, v) sweep as CSV");
  sweep_args.add_to(sweep, false);
  sweep->add_option("--grid", sweep_grid, "cells per axis");
  sweep->add_option("-o,--output", sweep_out, "CSV path (default stdout)");

  auto* domains = app.add_subcommand("domains", "count applicable domains on a (u, v) grid");
  domains_args.add_to(domains, false);
  domains->add_option("--grid", domains_grid, "cells per axis");
  domains->add_option("-o,--output", domains_out, "also write the sweep CSV here");

  auto* oracle = app.add_subcommand("oracle", "brute-force maximal overlap");
  oracle_args.add_to(oracle, true);
  oracle->add_option("--restarts", restarts, "random restarts");
  oracle->add_option("--seed", seed, "random seed");
  oracle->add_option("--tol", tol, "overlap gain tolerance");

  auto* nearest = app.add_subcommand("nearest", "nearest product state");
  nearest_args.add_to(nearest, true);

  auto* verify = app.add_subcommand("verify", "run the self-verification suite");
  verify->add_option("--samples", samples, "random samples per check");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--only", only, "run only this check (repeatable)");
  verify->add_option("--grid", verify_grid, "grid size for domain counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    apply_thread_cap();
    if (*eval) return cmd_eval(eval_args, json);
    if (*sweep) return cmd_sweep(sweep_args, sweep_grid, sweep_out);
    if (*domains) return cmd_domains(domains_args, domains_grid, domains_out);
    if (*oracle) return cmd_oracle(oracle_args, restarts, seed, tol);
    if (*nearest) return cmd_nearest(nearest_args);
    if (*verify) return cmd_verify(samples, seed, only, verify_grid);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kCheckFailed;
  }
  return kUsage;
}
