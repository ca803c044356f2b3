#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "roughjump/lift.hpp"
#include "roughjump/path.hpp"

namespace roughjump {

// One compensated Riemann sum: per cell [s, t] the term
// sum_{k=0}^{n-1} <Y^k_s, X^{k+1}(s,t)> with Y evaluated at the left
// endpoint's grid value.  Cells are accumulated with a fixed pairwise tree,
// so the value is bit-reproducible.
struct CompensatedSum {
  Partition partition;
  double value;
  std::vector<double> terms;  // per-cell contributions, ascending cells
};

CompensatedSum compensated_sum(const ControlledPath& Y,
                               const ReducedRoughPath& X, const Partition& pi);

// Coarsest partition whose cells have interior oscillation < eps and contain
// no interior jump larger than eta (either one-sided norm).  Adjacent-index
// cells are always feasible, so the full grid is a universal fallback.
Partition refine_partition(const RegulatedPath& X, double eps, double eta);

struct SewingSample {
  int s, u, t;
  double direct;          // delta Xi(s,u,t), three-sum evaluation
  double remainder_form;  // -sum_k <R^k(s,u), X^{k+1}(u,t)>
  double c_su = 0.0;      // control values, for exponent fits
  double c_ut = 0.0;
};

// The two evaluations must agree to 1e-10 relative; this identity is the
// module's core self-test.  Control values are skipped when with_controls is
// false (they cost an O(M^2) dynamic program each).
SewingSample sewing_defect(const ControlledPath& Y, const ReducedRoughPath& X,
                           int i, int u, int j, bool with_controls = true);

struct TraceEntry {
  int cells;
  double eps;  // 0 marks the final full-grid entry
  double value;
};

struct IntegrationReport {
  double value = 0.0;   // the full-grid compensated sum
  bool converged = false;
  double tol = 0.0;
  std::vector<TraceEntry> trace;
  std::vector<SewingSample> sewing_samples;
  std::vector<double> etas;              // jump threshold per refinement step
  std::vector<int> large_jump_indices;   // grid indices forced at the last step
};

struct IntegrateOptions {
  double tol = 1e-9;
  int levels = 9;  // eps_m = osc_max * 2^{-m}, m = 0..levels-1
  std::optional<std::vector<double>> schedule;  // explicit strictly-decreasing eps
  int sewing_samples = 8;
  std::uint64_t sample_seed = 0x5eed;
  bool record_sewing = true;
};

// Halving schedules anchored at the global oscillation (eps) and the 0.9
// quantile of one-sided jump magnitudes (eta); either anchor falls back to 1
// when the path supplies no information (constant path, no jumps).
struct RefinementSchedule {
  std::vector<double> eps;
  std::vector<double> eta;
};

RefinementSchedule default_refinement_schedule(const RegulatedPath& X,
                                               int levels);

// Compensated sums along a nested refinement chain (each partition contains
// the previous one), then the full grid; converged iff the last two trace
// values agree within tol*(1+|value|).  The reported value is always the
// full-grid sum.
IntegrationReport rrs_integrate(const ControlledPath& Y,
                                const ReducedRoughPath& X,
                                const IntegrateOptions& opt = {});

nlohmann::json integration_report_to_json(const IntegrationReport& rep);

}  // namespace roughjump
