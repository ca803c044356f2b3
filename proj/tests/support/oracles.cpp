#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

namespace roughjump::oracle {

namespace {

double fact(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// One-sided samples in time order: left, at, right per grid point.
std::vector<Vector> expanded_samples(const RegulatedPath& X) {
  std::vector<Vector> s;
  for (int i = 0; i <= X.last_index(); ++i) {
    s.push_back(X.left(i));
    s.push_back(X.at(i));
    s.push_back(X.right(i));
  }
  return s;
}

}  // namespace

DenseTensor symmetrize(const DenseTensor& t) {
  const int k = t.order();
  const int d = t.dim();
  DenseTensor out(k, d);
  std::vector<int> digits(std::max(k, 1));
  std::vector<int> perm(std::max(k, 1));
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    unflatten(flat, k, d, digits.data());
    perm = digits;
    std::sort(perm.begin(), perm.end());
    double acc = 0.0;
    int count = 0;
    do {
      acc += t[flatten(perm.data(), k, d)];
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out[flat] = acc / count;
  }
  return out;
}

DenseTensor rank1(const Vector& v, int k) {
  const int d = static_cast<int>(v.size());
  DenseTensor out(k, d);
  std::vector<int> digits(std::max(k, 1));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    unflatten(flat, k, d, digits.data());
    double prod = 1.0;
    for (int m = 0; m < k; ++m) prod *= v[digits[m]];
    out[flat] = prod;
  }
  return out;
}

double pairing(const DenseTensor& f, const DenseTensor& t) {
  if (f.order() != t.order() || f.dim() != t.dim())
    throw std::invalid_argument("oracle pairing: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * t[i];
  return acc;
}

double compensated_sum_naive(const SmoothFunction& F, const RegulatedPath& X,
                             const std::vector<int>& partition, int n) {
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < partition.size(); ++c) {
    const Vector base = X.at(partition[c]);
    const Vector dx = X.increment(partition[c], partition[c + 1]);
    for (int m = 1; m <= n; ++m) {
      total += pairing(F.derivative(m, base).dense(), rank1(dx, m)) / fact(m);
    }
  }
  return total;
}

double p_variation_pow_suffix(const RegulatedPath& X, double p) {
  const auto s = expanded_samples(X);
  const int m = static_cast<int>(s.size());
  // best[q] = sup over chains starting at q of the p-power sum.
  std::vector<double> best(m, 0.0);
  for (int q = m - 2; q >= 0; --q) {
    double b = 0.0;
    for (int r = q + 1; r < m; ++r)
      b = std::max(b, std::pow((s[r] - s[q]).norm(), p) + best[r]);
    best[q] = b;
  }
  double ans = 0.0;
  for (int q = 0; q < m; ++q) ans = std::max(ans, best[q]);
  return ans;
}

double p_variation_pow_exhaustive(const RegulatedPath& X, double p) {
  const auto s = expanded_samples(X);
  const int m = static_cast<int>(s.size());
  if (m > 22) throw std::invalid_argument("exhaustive p-variation: path too large");
  double ans = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double sum = 0.0;
    int prev = -1;
    for (int q = 0; q < m; ++q) {
      if (!(mask >> q & 1u)) continue;
      if (prev >= 0) sum += std::pow((s[q] - s[prev]).norm(), p);
      prev = q;
    }
    ans = std::max(ans, sum);
  }
  return ans;
}

double oscillation_naive(const RegulatedPath& X, int i, int j) {
  std::vector<Vector> inner;
  for (int q = i + 1; q < j; ++q) {
    inner.push_back(X.left(q));
    inner.push_back(X.at(q));
    inner.push_back(X.right(q));
  }
  double osc = 0.0;
  for (std::size_t a = 0; a < inner.size(); ++a)
    for (std::size_t b = a + 1; b < inner.size(); ++b)
      osc = std::max(osc, (inner[a] - inner[b]).norm());
  return osc;
}

double staircase_integral(const SmoothFunction& F, const RegulatedPath& X,
                          int n) {
  if (!X.is_cadlag())
    throw std::invalid_argument("staircase_integral: path must be cadlag");
  double total = 0.0;
  for (int i = 1; i <= X.last_index(); ++i) {
    const Vector dm = X.jump_minus(i);
    if (dm.isZero(0.0)) continue;
    const Vector base = X.left(i);
    for (int m = 1; m <= n; ++m)
      total += pairing(F.derivative(m, base).dense(), rank1(dm, m)) / fact(m);
  }
  return total;
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t na = a.size(), nb = b.size();
  double d = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < na && ib < nb) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < na && a[ia] <= x) ++ia;
    while (ib < nb && b[ib] <= x) ++ib;
    d = std::max(d, std::abs(double(ia) / na - double(ib) / nb));
  }
  const double ne = double(na) * nb / double(na + nb);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  // Asymptotic two-sided tail: 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    p += (j % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace roughjump::oracle
