#pragma once

#include <memory>
#include <vector>

#include "roughjump/path.hpp"
#include "roughjump/smoothfn.hpp"
#include "roughjump/tensor.hpp"

namespace roughjump {

// Canonical reduced lift of a finite p-variation path: level k over (i, j) is
// X_{t_i,t_j}^{otimes k} / k!.  Levels are computed on demand from increments;
// the lift is closed-form, so nothing is cached.
class ReducedRoughPath {
 public:
  ReducedRoughPath(std::shared_ptr<const RegulatedPath> X, double p);

  const RegulatedPath& base() const { return *base_; }
  const std::shared_ptr<const RegulatedPath>& base_ptr() const { return base_; }
  double p_exponent() const { return p_; }
  int level_count() const { return n_; }  // n = floor(p)

  // X_{t_i,t_j}^{otimes k} / k!, 1 <= k <= level_count(), i <= j.
  SymTensor level(int k, int i, int j) const;

 private:
  std::shared_ptr<const RegulatedPath> base_;
  double p_;
  int n_;
};

ReducedRoughPath reduced_lift(RegulatedPath X, double p);
ReducedRoughPath reduced_lift(std::shared_ptr<const RegulatedPath> X, double p);

struct ChenReport {
  int i, u, j;
  std::vector<double> defects;  // per level 1..n: ||X^k(i,j) - Sym(sum of products)||
  std::vector<double> scales;   // per level: ||X^k(i,j)||
  double tolerance;             // pass iff defect_k <= tolerance*(1+scale_k) at all k
  bool pass;
};

// Verifies X^k(i,j) = Sym(sum_{m=0}^{k} X^{k-m}(i,u) ⊗ X^m(u,j)) for every
// level, with X^0 = 1.  For a canonical lift this is the multivariate binomial
// identity and should hold to rounding error.
ChenReport chen_check(const ReducedRoughPath& X, int i, int u, int j);

// Y^k_t = D^{k+1}F(X_t) for k = 0..n-1, with remainders
//   R^k(s,t) = Y^k_t - Y^k_s - sum_{m=1}^{n-1-k} Y^{k+m}_s X^m(s,t)
// (the top level k = n-1 has an empty sum).  Values are precomputed on the
// grid; immutable afterwards.
class ControlledPath {
 public:
  int levels() const { return n_; }  // Y^0..Y^{n-1}
  double p_exponent() const { return p_; }
  const RegulatedPath& base() const { return *base_; }
  const std::shared_ptr<const RegulatedPath>& base_ptr() const { return base_; }

  const SymForm& level(int k, int i) const;
  SymForm remainder(int k, int i, int j) const;

  friend ControlledPath controlled_from_function(const SmoothFunction& F,
                                                 const ReducedRoughPath& X);

 private:
  ControlledPath() = default;
  std::shared_ptr<const RegulatedPath> base_;
  double p_ = 0.0;
  int n_ = 0;
  std::vector<std::vector<SymForm>> y_;  // y_[k][grid index]
};

// Requires F.max_order() >= floor(p)+1 and the path hull inside F's domain.
ControlledPath controlled_from_function(const SmoothFunction& F,
                                        const ReducedRoughPath& X);

}  // namespace roughjump
