#include "roughjump/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "roughjump/numeric.hpp"

namespace roughjump {

std::size_t dense_size(int order, int dim) {
  if (order < 0) throw std::invalid_argument("tensor order must be >= 0");
  if (dim < 1) throw std::invalid_argument("tensor dimension must be >= 1");
  if (order > kMaxLevel)
    throw std::length_error("tensor order exceeds the level cap (6)");
  std::size_t n = 1;
  for (int i = 0; i < order; ++i) {
    n *= static_cast<std::size_t>(dim);
    if (n > kCoeffBudget)
      throw std::length_error("tensor coefficient count exceeds the budget (4096)");
  }
  return n;
}

DenseTensor::DenseTensor(int order, int dim)
    : order_(order), dim_(dim), c_(dense_size(order, dim), 0.0) {}

DenseTensor DenseTensor::from_coeffs(int order, int dim, std::vector<double> coeffs) {
  DenseTensor t(order, dim);
  if (coeffs.size() != t.size())
    throw std::invalid_argument("coefficient count does not match order/dimension");
  t.c_ = std::move(coeffs);
  return t;
}

double DenseTensor::frobenius_norm() const {
  double s = 0.0;
  for (double x : c_) s += x * x;
  return std::sqrt(s);
}

namespace {
void require_same_shape(const DenseTensor& a, const DenseTensor& b) {
  if (a.order() != b.order() || a.dim() != b.dim())
    throw std::invalid_argument("tensor order/dimension mismatch");
}
}  // namespace

DenseTensor& DenseTensor::operator+=(const DenseTensor& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}
DenseTensor& DenseTensor::operator-=(const DenseTensor& o) {
  require_same_shape(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}
DenseTensor& DenseTensor::operator*=(double a) {
  for (double& x : c_) x *= a;
  return *this;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
DenseTensor operator*(double a, DenseTensor t) { return t *= a; }

void unflatten(std::size_t flat, int order, int dim, int* digits) {
  for (int k = order - 1; k >= 0; --k) {
    digits[k] = static_cast<int>(flat % dim);
    flat /= dim;
  }
}

std::size_t flatten(const int* digits, int order, int dim) {
  std::size_t flat = 0;
  for (int k = 0; k < order; ++k) flat = flat * dim + digits[k];
  return flat;
}

bool is_symmetric(const DenseTensor& t, double rel_tol) {
  const int k = t.order();
  const int d = t.dim();
  if (k <= 1) return true;
  std::array<int, kMaxLevel> digits{};
  std::array<int, kMaxLevel> sorted{};
  for (std::size_t i = 0; i < t.size(); ++i) {
    unflatten(i, k, d, digits.data());
    sorted = digits;
    std::sort(sorted.begin(), sorted.begin() + k);
    const std::size_t rep = flatten(sorted.data(), k, d);
    const double a = t[i];
    const double b = t[rep];
    if (std::abs(a - b) > rel_tol * std::max(std::abs(a), std::abs(b))) return false;
  }
  return true;
}

SymTensor SymTensor::scalar(double v, int dim) {
  DenseTensor t(0, dim);
  t[0] = v;
  return SymTensor(std::move(t));
}
SymTensor& SymTensor::operator+=(const SymTensor& o) { t_ += o.t_; return *this; }
SymTensor& SymTensor::operator-=(const SymTensor& o) { t_ -= o.t_; return *this; }
SymTensor& SymTensor::operator*=(double a) { t_ *= a; return *this; }
SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
SymTensor operator*(double a, SymTensor t) { return t *= a; }

SymForm SymForm::scalar(double v, int dim) {
  DenseTensor t(0, dim);
  t[0] = v;
  return SymForm(std::move(t));
}
SymForm& SymForm::operator+=(const SymForm& o) { t_ += o.t_; return *this; }
SymForm& SymForm::operator-=(const SymForm& o) { t_ -= o.t_; return *this; }
SymForm& SymForm::operator*=(double a) { t_ *= a; return *this; }
SymForm operator+(SymForm a, const SymForm& b) { return a += b; }
SymForm operator-(SymForm a, const SymForm& b) { return a -= b; }
SymForm operator*(double a, SymForm f) { return f *= a; }

namespace {

DenseTensor symmetrize_dense(const DenseTensor& t) {
  const int k = t.order();
  const int d = t.dim();
  if (k <= 1) return t;
  DenseTensor out(k, d);
  std::array<int, kMaxLevel> digits{};
  std::array<int, kMaxLevel> pos{};
  std::array<int, kMaxLevel> permuted{};
  const double inv_kfact = 1.0 / factorial(k);
  for (std::size_t i = 0; i < t.size(); ++i) {
    unflatten(i, k, d, digits.data());
    std::iota(pos.begin(), pos.begin() + k, 0);
    double acc = 0.0;
    do {
      for (int j = 0; j < k; ++j) permuted[j] = digits[pos[j]];
      acc += t[flatten(permuted.data(), k, d)];
    } while (std::next_permutation(pos.begin(), pos.begin() + k));
    out[i] = acc * inv_kfact;
  }
  return out;
}

}  // namespace

SymTensor sym_project(const DenseTensor& t) {
  return SymTensor::from_raw(symmetrize_dense(t));
}
SymForm sym_project_form(const DenseTensor& t) {
  return SymForm::from_raw(symmetrize_dense(t));
}

SymTensor rank1_power(const Vector& v, int k) {
  if (k < 1) throw std::invalid_argument("rank1_power: order must be >= 1");
  const int d = static_cast<int>(v.size());
  DenseTensor out(k, d);
  // out over index (i_1..i_k) = prod v_{i_j}; build by repeated expansion.
  std::vector<double> cur{1.0};
  for (int level = 0; level < k; ++level) {
    std::vector<double> next(cur.size() * d);
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (int j = 0; j < d; ++j) next[i * d + j] = cur[i] * v[j];
    cur = std::move(next);
  }
  return SymTensor::from_raw(DenseTensor::from_coeffs(k, d, std::move(cur)));
}

DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("tensor_product: dimension mismatch");
  DenseTensor out(a.order() + b.order(), a.dim());
  const std::size_t nb = b.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = a[i] * b[j];
  return out;
}

double pair(const SymForm& f, const DenseTensor& t) {
  if (f.order() != t.order() || f.dim() != t.dim())
    throw std::invalid_argument("pair: order/dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += f[i] * t[i];
  return s;
}

double pair(const SymForm& f, const SymTensor& t) { return pair(f, t.dense()); }

namespace {

// One trailing-slot contraction with v: out[q] = sum_j in[q*d + j] * v_j.
void contract_once(const std::vector<double>& in, const Vector& v,
                   std::vector<double>& out) {
  const int d = static_cast<int>(v.size());
  const std::size_t nq = in.size() / d;
  out.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += in[q * d + j] * v[j];
    out[q] = s;
  }
}

}  // namespace

double pair_rank1(const SymForm& f, const Vector& v) {
  if (f.dim() != static_cast<int>(v.size()))
    throw std::invalid_argument("pair_rank1: dimension mismatch");
  if (f.order() == 0) return f[0];
  std::vector<double> cur = f.dense().coeffs();
  std::vector<double> next;
  for (int step = 0; step < f.order(); ++step) {
    contract_once(cur, v, next);
    cur.swap(next);
  }
  return cur[0];
}

SymForm contract_trailing(const SymForm& f, const SymTensor& t) {
  if (f.dim() != t.dim())
    throw std::invalid_argument("contract_trailing: dimension mismatch");
  if (t.order() > f.order())
    throw std::invalid_argument("contract_trailing: tensor order exceeds form order");
  const std::size_t nt = t.size();
  DenseTensor out(f.order() - t.order(), f.dim());
  for (std::size_t q = 0; q < out.size(); ++q) {
    double s = 0.0;
    for (std::size_t r = 0; r < nt; ++r) s += f[q * nt + r] * t[r];
    out[q] = s;
  }
  return SymForm::from_raw(std::move(out));
}

SymForm contract_rank1(const SymForm& f, const Vector& v, int times) {
  if (f.dim() != static_cast<int>(v.size()))
    throw std::invalid_argument("contract_rank1: dimension mismatch");
  if (times < 0 || times > f.order())
    throw std::invalid_argument("contract_rank1: invalid contraction count");
  std::vector<double> cur = f.dense().coeffs();
  std::vector<double> next;
  for (int step = 0; step < times; ++step) {
    contract_once(cur, v, next);
    cur.swap(next);
  }
  return SymForm::from_raw(
      DenseTensor::from_coeffs(f.order() - times, f.dim(), std::move(cur)));
}

double pair_powers(const SymForm& f,
                   std::span<const std::pair<const Vector*, int>> factors) {
  int total = 0;
  for (const auto& [v, m] : factors) {
    if (m < 0) throw std::invalid_argument("pair_powers: negative multiplicity");
    if (f.dim() != static_cast<int>(v->size()))
      throw std::invalid_argument("pair_powers: dimension mismatch");
    total += m;
  }
  if (total != f.order())
    throw std::invalid_argument("pair_powers: multiplicities must sum to the order");
  std::vector<double> cur = f.dense().coeffs();
  std::vector<double> next;
  for (const auto& [v, m] : factors) {
    for (int step = 0; step < m; ++step) {
      contract_once(cur, *v, next);
      cur.swap(next);
    }
  }
  return cur[0];
}

}  // namespace roughjump
