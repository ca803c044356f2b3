#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace roughjump {

// Sum with a fixed pairwise reduction tree.  The tree depends only on the
// length of the range, so results are bit-reproducible for a given input
// order, and the error grows like O(log n) rather than O(n).
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(std::span<const double>(xs));
}

// Neumaier's compensated accumulator: running sums stay accurate even when
// terms alternate in sign and nearly cancel.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// k! as a double, exact for k <= 18.
inline double factorial(int k) {
  if (k < 0 || k > 18) throw std::invalid_argument("factorial: need 0 <= k <= 18");
  static constexpr double table[] = {
      1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0, 40320.0,
      362880.0, 3628800.0, 39916800.0, 479001600.0, 6227020800.0,
      87178291200.0, 1307674368000.0, 20922789888000.0,
      355687428096000.0, 6402373705728000.0};
  return table[k];
}

inline double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

// |a - b| <= tol * (1 + max(|a|, |b|)): absolute near zero, relative at scale.
inline bool approx_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace roughjump
