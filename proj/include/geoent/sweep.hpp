#pragma once

// (u, v) parameter sweeps at fixed gamma, branch maps and boundary curves.

#include <ostream>
#include <string>
#include <vector>

#include "geoent/analytic.hpp"
#include "geoent/qstate.hpp"

namespace geoent {

struct SweepRecord {
  double u = 0.0, v = 0.0;
  double g = 0.0, t = 0.0, h = 0.0;
  double gamma = 0.0;
  double p_max = 0.0;
  double geometric_measure = 1.0;
  BranchLabel branch;
  double d1 = 0.0, c2 = 0.0, c3 = 0.0;
  bool boundary = false;
};

struct DomainMap {
  int grid_n = 0;
  std::vector<BranchLabel> labels;  // row-major, index i * grid_n + j (u index i)
  int domain_count = 0;
  double boundary_fraction = 0.0;
};

enum class Criterion { D1, C2, C3 };

/// Cell center i (0-based) of an n-cell split of [0, pi/2].
double cell_center(int i, int n);

SweepRecord evaluate_cell(double gamma, int i, int j, int grid_n);

/// Rows are distributed over OpenMP threads; output order is (i, j).
std::vector<SweepRecord> run_sweep(double gamma, int grid_n);
std::vector<SweepRecord> run_sweep_serial(double gamma, int grid_n);

DomainMap domain_map(double gamma, int grid_n);
DomainMap domain_map_from_records(const std::vector<SweepRecord>& records, int grid_n);

/// Connected components of equal labels under 4-neighbour adjacency on an
/// n x n grid stored row-major.
int count_components(const std::vector<BranchLabel>& labels, int n);

double criterion_value(Criterion c, double g, double t, double h);
std::string criterion_name(Criterion c);

/// Zeros in v of the criterion along the column at fixed u, refined by
/// bisection to machine precision.
std::vector<double> column_crossings(Criterion c, double u, int subdivisions = 256);

/// Crossings along `samples` equally spaced columns u_k = (k + 1/2) (pi/2) / samples.
/// D1 requires gamma = 0, C2 and C3 require gamma = +-pi/2.
std::vector<UVPoint> boundary_trace(double gamma, Criterion c, int samples);

void write_csv(std::ostream& os, const std::vector<SweepRecord>& records);

}  // namespace geoent
