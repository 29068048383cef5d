#include "geoent/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>

#include "geoent/general_gamma.hpp"

namespace geoent {

namespace {

constexpr double kBoundaryGap = 1e-6;

void check_grid(int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("grid_n must be at least 2");
}

}  // namespace

double cell_center(int i, int n) { return (i + 0.5) * kPi / (2.0 * n); }

SweepRecord evaluate_cell(double gamma, int i, int j, int grid_n) {
  SweepRecord rec;
  rec.u = cell_center(i, grid_n);
  rec.v = cell_center(j, grid_n);
  const SymmetricState s = from_uv({rec.u, rec.v}, gamma);
  const PmaxResult res = pmax_general(s);
  rec.g = s.g();
  rec.t = s.t();
  rec.h = s.h();
  rec.gamma = s.gamma();
  rec.p_max = res.p_max;
  rec.geometric_measure = 1.0 - res.p_max;
  rec.branch = res.branch;
  rec.d1 = res.criteria.D1;
  rec.c2 = res.criteria.C2;
  rec.c3 = res.criteria.C3;
  rec.boundary = res.boundary || (res.runner_up >= 0.0 && res.p_max - res.runner_up < kBoundaryGap);
  return rec;
}

std::vector<SweepRecord> run_sweep(double gamma, int grid_n) {
  check_grid(grid_n);
  std::vector<SweepRecord> out(static_cast<std::size_t>(grid_n) * grid_n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) out[i * grid_n + j] = evaluate_cell(gamma, i, j, grid_n);
  }
  return out;
}

std::vector<SweepRecord> run_sweep_serial(double gamma, int grid_n) {
  check_grid(grid_n);
  std::vector<SweepRecord> out;
  out.reserve(static_cast<std::size_t>(grid_n) * grid_n);
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) out.push_back(evaluate_cell(gamma, i, j, grid_n));
  }
  return out;
}

int count_components(const std::vector<BranchLabel>& labels, int n) {
  if (labels.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("label grid size mismatch");
  }
  std::vector<char> seen(labels.size(), 0);
  int count = 0;
  std::queue<int> todo;
  for (int start = 0; start < n * n; ++start) {
    if (seen[start]) continue;
    ++count;
    seen[start] = 1;
    todo.push(start);
    while (!todo.empty()) {
      const int cur = todo.front();
      todo.pop();
      const int i = cur / n, j = cur % n;
      const int nbr[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& nb : nbr) {
        if (nb[0] < 0 || nb[0] >= n || nb[1] < 0 || nb[1] >= n) continue;
        const int k = nb[0] * n + nb[1];
        if (seen[k] || labels[k] != labels[cur]) continue;
        seen[k] = 1;
        todo.push(k);
      }
    }
  }
  return count;
}

DomainMap domain_map_from_records(const std::vector<SweepRecord>& records, int grid_n) {
  DomainMap map;
  map.grid_n = grid_n;
  map.labels.reserve(records.size());
  int flagged = 0;
  for (const auto& r : records) {
    map.labels.push_back(r.branch);
    flagged += r.boundary ? 1 : 0;
  }
  map.domain_count = count_components(map.labels, grid_n);
  map.boundary_fraction = records.empty() ? 0.0 : double(flagged) / records.size();
  return map;
}

DomainMap domain_map(double gamma, int grid_n) {
  return domain_map_from_records(run_sweep(gamma, grid_n), grid_n);
}

double criterion_value(Criterion c, double g, double t, double h) {
  const double h2 = h * h;
  switch (c) {
    case Criterion::D1: return g * h2 - (g + t) * (g + t) * (g - 2 * t);
    case Criterion::C2: return (3 * g + 2 * t) * h2 - 4 * g * g * t;
    case Criterion::C3: return g * h2 - (g - t) * (g - t) * (g + 2 * t);
  }
  return 0.0;
}

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::D1: return "D1";
    case Criterion::C2: return "C2";
    case Criterion::C3: return "C3";
  }
  return "?";
}

std::vector<double> column_crossings(Criterion c, double u, int subdivisions) {
  const double su = std::sin(u), h = std::cos(u);
  auto f = [&](double v) {
    return criterion_value(c, su * std::cos(v), su * std::sin(v) / std::sqrt(3.0), h);
  };
  std::vector<double> out;
  const double step = (kPi / 2) / subdivisions;
  double a = 0.0, fa = f(a);
  for (int k = 1; k <= subdivisions; ++k) {
    double b = k == subdivisions ? kPi / 2 : k * step;
    double fb = f(b);
    if (fa == 0.0) {
      out.push_back(a);
    } else if (fa * fb < 0.0) {
      double lo = a, hi = b, flo = fa;
      // Bisect down to adjacent doubles.
      for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  if (fa == 0.0) out.push_back(a);
  return out;
}

std::vector<UVPoint> boundary_trace(double gamma, Criterion c, int samples) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  const double a = std::abs(reduce_gamma(gamma));
  const bool ok = c == Criterion::D1 ? a < 1e-12 : std::abs(a - kPi / 2) < 1e-12;
  if (!ok) {
    throw std::invalid_argument(criterion_name(c) + " boundary is not defined at this gamma");
  }
  std::vector<UVPoint> out;
  for (int k = 0; k < samples; ++k) {
    const double u = (k + 0.5) * (kPi / 2) / samples;
    for (double v : column_crossings(c, u)) out.push_back({u, v});
  }
  return out;
}

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "u,v,g,t,h,gamma,p_max,G,branch,D1,C2,C3,boundary\n";
  char buf[512];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%d\n",
                  r.u, r.v, r.g, r.t, r.h, r.gamma, r.p_max, r.geometric_measure,
                  r.branch.name().c_str(), r.d1, r.c2, r.c3, r.boundary ? 1 : 0);
    os << buf;
  }
}

}  // namespace geoent
