#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace roughjump {

using Vector = Eigen::VectorXd;

// Hard caps for dense symmetric tensor storage.  Order is capped at 6 and the
// coefficient count at 4096 (d=4, k=6); exceeding either throws.
inline constexpr int kMaxLevel = 6;
inline constexpr std::size_t kCoeffBudget = 4096;

// d^order with budget enforcement.  order 0 is a scalar (size 1).
std::size_t dense_size(int order, int dim);

// Dense order-k tensor over R^d, row-major with the last index fastest.
class DenseTensor {
 public:
  DenseTensor(int order, int dim);
  static DenseTensor from_coeffs(int order, int dim, std::vector<double> coeffs);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  const std::vector<double>& coeffs() const { return c_; }

  double frobenius_norm() const;

  DenseTensor& operator+=(const DenseTensor& o);
  DenseTensor& operator-=(const DenseTensor& o);
  DenseTensor& operator*=(double a);

 private:
  int order_;
  int dim_;
  std::vector<double> c_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator-(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(double a, DenseTensor t);

// Decode a flat index into `order` digits in [0, dim), most significant first.
void unflatten(std::size_t flat, int order, int dim, int* digits);
std::size_t flatten(const int* digits, int order, int dim);

// Entrywise symmetry check (used by validators; construction paths below are
// symmetric by design and skip it).
bool is_symmetric(const DenseTensor& t, double rel_tol = 0.0);

// Symmetric order-k tensor: all index permutations of an entry are equal.
class SymTensor {
 public:
  SymTensor() : t_(0, 1) {}
  SymTensor(int order, int dim) : t_(order, dim) {}
  static SymTensor scalar(double v, int dim = 1);

  int order() const { return t_.order(); }
  int dim() const { return t_.dim(); }
  std::size_t size() const { return t_.size(); }
  double operator[](std::size_t i) const { return t_[i]; }
  const DenseTensor& dense() const { return t_; }
  double norm() const { return t_.frobenius_norm(); }

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double a);

  // Caller guarantees `d` is permutation-symmetric (e.g. scaled sums of
  // symmetric tensors).  Not validated here; `is_symmetric` covers tests.
  static SymTensor from_raw(DenseTensor d) { return SymTensor(std::move(d)); }

 private:
  explicit SymTensor(DenseTensor d) : t_(std::move(d)) {}
  DenseTensor t_;
};

SymTensor operator+(SymTensor a, const SymTensor& b);
SymTensor operator-(SymTensor a, const SymTensor& b);
SymTensor operator*(double a, SymTensor t);

// Symmetric k-linear form (dual side); same dense layout as SymTensor.
class SymForm {
 public:
  SymForm() : t_(0, 1) {}
  SymForm(int order, int dim) : t_(order, dim) {}
  static SymForm scalar(double v, int dim = 1);

  int order() const { return t_.order(); }
  int dim() const { return t_.dim(); }
  std::size_t size() const { return t_.size(); }
  double operator[](std::size_t i) const { return t_[i]; }
  double& operator[](std::size_t i) { return t_[i]; }
  const DenseTensor& dense() const { return t_; }
  double norm() const { return t_.frobenius_norm(); }

  SymForm& operator+=(const SymForm& o);
  SymForm& operator-=(const SymForm& o);
  SymForm& operator*=(double a);

  // Caller guarantees symmetry (e.g. derivative tables built from
  // multi-index counts, or linear combinations of symmetric forms).
  static SymForm from_raw(DenseTensor d) { return SymForm(std::move(d)); }

 private:
  explicit SymForm(DenseTensor d) : t_(std::move(d)) {}
  DenseTensor t_;
};

SymForm operator+(SymForm a, const SymForm& b);
SymForm operator-(SymForm a, const SymForm& b);
SymForm operator*(double a, SymForm f);

// Average of t over all order! index permutations.  Idempotent on symmetric
// input.
SymTensor sym_project(const DenseTensor& t);
SymForm sym_project_form(const DenseTensor& t);

// v^{otimes k}; entry at (i_1..i_k) is v_{i_1}...v_{i_k}.  k >= 1.
SymTensor rank1_power(const Vector& v, int k);

// Outer product; the result is generally not symmetric.
DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b);

// Full contraction <f, t>; orders and dimensions must match.
double pair(const SymForm& f, const SymTensor& t);
double pair(const SymForm& f, const DenseTensor& t);

// <f, v^{otimes k}> for k = f.order(), via iterated single-slot contraction
// (Horner-style); avoids materialising the power.  Must agree with the dense
// pairing to 1e-12 relative (tested).
double pair_rank1(const SymForm& f, const Vector& v);

// Contract the trailing t.order() slots of f with t, leaving an
// (f.order() - t.order())-form.  Symmetry of f makes the slot choice
// immaterial.
SymForm contract_trailing(const SymForm& f, const SymTensor& t);

// Contract `times` trailing slots with v.
SymForm contract_rank1(const SymForm& f, const Vector& v, int times);

// <f, v1^{a1} ⊗ v2^{a2} ⊗ ...> with sum of multiplicities equal to f.order().
// Well defined by symmetry of f.
double pair_powers(const SymForm& f,
                   std::span<const std::pair<const Vector*, int>> factors);

}  // namespace roughjump
