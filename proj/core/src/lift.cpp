#include "roughjump/lift.hpp"

#include <cmath>
#include <stdexcept>

#include "roughjump/numeric.hpp"

namespace roughjump {

ReducedRoughPath::ReducedRoughPath(std::shared_ptr<const RegulatedPath> X, double p)
    : base_(std::move(X)), p_(p) {
  if (!base_) throw std::invalid_argument("reduced_lift: null path");
  if (p < 1.0) throw std::invalid_argument("reduced_lift: p must be >= 1");
  n_ = static_cast<int>(std::floor(p));
  if (n_ > kMaxLevel)
    throw std::length_error("reduced_lift: floor(p) exceeds the level cap (6)");
}

SymTensor ReducedRoughPath::level(int k, int i, int j) const {
  if (k < 1 || k > n_)
    throw std::invalid_argument("lift level: order out of range");
  const Vector incr = base_->increment(i, j);
  SymTensor t = rank1_power(incr, k);
  t *= 1.0 / factorial(k);
  return t;
}

ReducedRoughPath reduced_lift(RegulatedPath X, double p) {
  return ReducedRoughPath(std::make_shared<const RegulatedPath>(std::move(X)), p);
}

ReducedRoughPath reduced_lift(std::shared_ptr<const RegulatedPath> X, double p) {
  return ReducedRoughPath(std::move(X), p);
}

ChenReport chen_check(const ReducedRoughPath& X, int i, int u, int j) {
  if (!(i <= u && u <= j))
    throw std::invalid_argument("chen_check: need i <= u <= j");
  const int n = X.level_count();
  const int d = X.base().dim();

  ChenReport rep;
  rep.i = i;
  rep.u = u;
  rep.j = j;
  rep.tolerance = 1e-12;
  rep.pass = true;

  auto level_dense = [&](int k, int a, int b) -> DenseTensor {
    if (k == 0) {
      DenseTensor one(0, d);
      one[0] = 1.0;
      return one;
    }
    return X.level(k, a, b).dense();
  };

  for (int k = 1; k <= n; ++k) {
    DenseTensor sum(k, d);
    for (int m = 0; m <= k; ++m)
      sum += tensor_product(level_dense(k - m, i, u), level_dense(m, u, j));
    const DenseTensor lhs = X.level(k, i, j).dense();
    const double defect = (lhs - sym_project(sum).dense()).frobenius_norm();
    const double scale = lhs.frobenius_norm();
    rep.defects.push_back(defect);
    rep.scales.push_back(scale);
    if (defect > rep.tolerance * (1.0 + scale)) rep.pass = false;
  }
  return rep;
}

const SymForm& ControlledPath::level(int k, int i) const {
  if (k < 0 || k >= n_)
    throw std::invalid_argument("controlled level: order out of range");
  if (i < 0 || i >= static_cast<int>(y_[k].size()))
    throw std::out_of_range("controlled level: grid index out of range");
  return y_[k][i];
}

SymForm ControlledPath::remainder(int k, int i, int j) const {
  if (k < 0 || k >= n_)
    throw std::invalid_argument("remainder: order out of range");
  if (i > j) throw std::invalid_argument("remainder: need i <= j");
  SymForm R = y_[k][j] - y_[k][i];
  for (int m = 1; m <= n_ - 1 - k; ++m) {
    const SymTensor xm =
        (1.0 / factorial(m)) * rank1_power(base_->increment(i, j), m);
    R -= contract_trailing(y_[k + m][i], xm);
  }
  return R;
}

ControlledPath controlled_from_function(const SmoothFunction& F,
                                        const ReducedRoughPath& X) {
  const RegulatedPath& base = X.base();
  const int n = X.level_count();
  if (F.dim() != base.dim())
    throw std::invalid_argument(
        "controlled_from_function: function/path dimension mismatch");
  if (F.max_order() < n + 1)
    throw std::invalid_argument(
        "controlled_from_function: F needs exact derivatives up to floor(p)+1");
  if (F.bounded()) {
    const Vector lo = base.value_lower_bound();
    const Vector hi = base.value_upper_bound();
    const DomainBox& box = *F.domain();
    for (int c = 0; c < base.dim(); ++c)
      if (lo[c] < box.lo[c] || hi[c] > box.hi[c])
        throw std::domain_error(
            "controlled_from_function: path range exits the domain box of " +
            F.name());
  }

  ControlledPath Y;
  Y.base_ = X.base_ptr();
  Y.p_ = X.p_exponent();
  Y.n_ = n;
  Y.y_.resize(n);
  const int points = base.num_points();
  for (int k = 0; k < n; ++k) {
    Y.y_[k].reserve(points);
    for (int i = 0; i < points; ++i)
      Y.y_[k].push_back(F.derivative(k + 1, base.at(i)));
  }
  return Y;
}

}  // namespace roughjump
