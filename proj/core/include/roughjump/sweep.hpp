#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "roughjump/stochgen.hpp"

namespace roughjump {

// A batch verification run: for each (seed, grid size, p) the change-of-
// variable residual of one generated path under one function.  Within a seed
// the same randomness drives every grid size — fBm is sampled once at the
// finest grid and restricted dyadically, jumps are sampled once at the
// coarsest grid and carried up — so the residual column isolates refinement.
struct SweepConfig {
  std::string model = "mixed";  // "fbm" | "cp" | "mixed"
  GeneratorConfig base;         // N and seed are overridden per row
  std::vector<std::uint64_t> seeds;
  std::vector<int> sizes;  // ascending, each dividing the next
  std::vector<double> ps;
  std::string fn = "exp";
  double tol = 1e-9;
  int workers = 1;
};

struct SweepRow {
  std::string model;
  std::uint64_t seed = 0;
  int N = 0;
  double p = 0.0;
  double residual = 0.0;
  bool converged = false;
  double runtime = 0.0;  // seconds spent verifying this row
  double lhs = 0.0;      // kept for normalized-residual analysis, not in CSV
};

// Rows ordered by (seed, N, p) regardless of worker completion order.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

// Fixed columns: model,seed,N,p,residual,converged,runtime
void sweep_to_csv(const std::vector<SweepRow>& rows, std::ostream& os);

}  // namespace roughjump
