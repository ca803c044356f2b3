#pragma once

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughjump/tensor.hpp"

namespace roughjump {

class PathFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JumpEvent {
  int index;
  double time;
  Vector dminus;  // at - left
  Vector dplus;   // right - at
};

// Which one-sided value a sample refers to.
enum class Side { left, at, right };

struct PathSample {
  int index;
  Side side;
  double time;
};

struct PVarResult {
  double value;                   // p-variation norm
  std::vector<PathSample> chain;  // a maximizing point chain
};

// A regulated path on [0, T] given by its finite presentation: at each grid
// time the three one-sided values X_{t-}, X_t, X_{t+}.  The path is defined
// only at grid times; refinement bottoms out at the full grid.  Immutable
// after construction.
class RegulatedPath {
 public:
  // Empty path, usable only as an assignment target; every valid instance
  // comes from a factory.
  RegulatedPath() = default;

  static RegulatedPath create(double T, std::vector<double> times,
                              std::vector<Vector> left, std::vector<Vector> at,
                              std::vector<Vector> right);
  // Continuous presentation: left = at = right everywhere.
  static RegulatedPath from_values(double T, std::vector<double> times,
                                   std::vector<Vector> at);

  int dim() const { return d_; }
  double horizon() const { return T_; }
  int last_index() const { return static_cast<int>(times_.size()) - 1; }
  int num_points() const { return static_cast<int>(times_.size()); }
  double time(int i) const { return times_[check(i)]; }
  const std::vector<double>& times() const { return times_; }
  const Vector& left(int i) const { return left_[check(i)]; }
  const Vector& at(int i) const { return at_[check(i)]; }
  const Vector& right(int i) const { return right_[check(i)]; }

  // X_{t_j} - X_{t_i}; requires i <= j.
  Vector increment(int i, int j) const;
  // Open-cell increment X_{t_i+, t_j-} = left(j) - right(i); requires i < j.
  Vector increment_open(int i, int j) const;

  Vector jump_minus(int i) const { return at_[check(i)] - left_[i]; }
  Vector jump_plus(int i) const { return right_[check(i)] - at_[i]; }
  bool has_jump(int i) const;

  // All grid times where left != at or at != right.
  std::vector<JumpEvent> jumps() const;

  bool is_continuous() const;
  bool is_cadlag() const;  // right == at everywhere

  // Sup of ||X_u - X_v|| over one-sided values strictly inside (t_i, t_j);
  // zero when the open interval holds no grid point.
  double oscillation(int i, int j) const;

  // Exact sup over grid partitions of sum ||X_{s,t}||^p, via dynamic
  // programming over the one-sided value sequence; returns the p-th root.
  double p_variation(double p) const { return p_variation(p, 0, last_index()); }
  double p_variation(double p, int i, int j) const;
  // The sup itself (no p-th root); this is the control function value.
  double p_variation_pow(double p, int i, int j) const;
  // Also reports one maximizing chain of sample points.
  PVarResult p_variation_witness(double p, int i, int j) const;

  // Componentwise hull over every one-sided value (for domain-box checks).
  Vector value_lower_bound() const;
  Vector value_upper_bound() const;

 private:
  int check(int i) const;

  double T_ = 0.0;
  int d_ = 0;
  std::vector<double> times_;
  std::vector<Vector> left_, at_, right_;
};

// Increasing grid-index list, first = 0 and last = X.last_index().
class Partition {
 public:
  Partition(std::vector<int> indices, int last_index);
  static Partition coarsest(int last_index);
  static Partition full(int last_index);
  static Partition merge(const Partition& a, const Partition& b);

  const std::vector<int>& indices() const { return idx_; }
  int num_cells() const { return static_cast<int>(idx_.size()) - 1; }
  int last_index() const { return idx_.back(); }

 private:
  std::vector<int> idx_;
};

// c(s, t) = ||X||^p_{p-var;[t_i, t_j]}: vanishes on the diagonal, dominates
// ||X_{s,t}||^p, and is superadditive.  Stateless and reentrant.
class ControlFunction {
 public:
  ControlFunction(std::shared_ptr<const RegulatedPath> X, double p);
  double operator()(int i, int j) const;
  double p_exponent() const { return p_; }
  const RegulatedPath& path() const { return *path_; }

 private:
  std::shared_ptr<const RegulatedPath> path_;
  double p_;
};

ControlFunction control(std::shared_ptr<const RegulatedPath> X, double p);
ControlFunction control(RegulatedPath X, double p);

// --- path surgery -----------------------------------------------------------

// Restriction to [t_i, t_j], times shifted to start at 0.  One-sided values
// pointing outside the window collapse onto the endpoint values.
RegulatedPath subpath(const RegulatedPath& X, int i, int j);

// Keep every stride-th grid point (N must be divisible by stride): the same
// underlying path observed on a coarser grid.
RegulatedPath restrict_grid(const RegulatedPath& X, int stride);

// Pointwise sum; grids must agree exactly.
RegulatedPath add_paths(const RegulatedPath& a, const RegulatedPath& b);

// Piecewise-constant cadlag extension of a step path onto a finer grid that
// contains every original grid time exactly.
RegulatedPath resample_steps(const RegulatedPath& steps,
                             const std::vector<double>& new_times);

// --- JSON -------------------------------------------------------------------
// { "T": real, "d": int, "points": [ { "t": real, "at": [..],
//   "left": [..] (optional, default at), "right": [..] (optional) } ] }
// Times strictly increasing, first 0.0, last equal to T; NaN/Inf rejected.

RegulatedPath path_from_json(const nlohmann::json& j);
nlohmann::json path_to_json(const RegulatedPath& X);
RegulatedPath load_path_file(const std::string& filename);
void save_path_file(const RegulatedPath& X, const std::string& filename);

}  // namespace roughjump
