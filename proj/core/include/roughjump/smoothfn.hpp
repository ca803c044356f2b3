#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roughjump/tensor.hpp"

namespace roughjump {

// Componentwise box [lo, hi]; evaluation outside a declared box throws.
struct DomainBox {
  Vector lo;
  Vector hi;
};

// Scalar-valued C^k function R^d -> R with exact symbolic derivatives.
// Immutable after construction; evaluation is reentrant.
class SmoothFunction {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual int dim() const = 0;
    virtual int max_order() const = 0;
    virtual const std::optional<DomainBox>& domain() const = 0;
    virtual double value(const Vector& x) const = 0;
    virtual SymForm derivative(int k, const Vector& x) const = 0;
    virtual std::string name() const = 0;
  };

  explicit SmoothFunction(std::shared_ptr<const Impl> impl);

  int dim() const { return impl_->dim(); }
  // Highest exact derivative order available (capped by the tensor level cap).
  int max_order() const { return impl_->max_order(); }
  // True iff a domain box is declared (derivatives bounded on it).
  bool bounded() const { return impl_->domain().has_value(); }
  const std::optional<DomainBox>& domain() const { return impl_->domain(); }
  bool in_domain(const Vector& x) const;

  double value(const Vector& x) const;
  // Symmetric k-form D^kF(x), 1 <= k <= max_order().
  SymForm derivative(int k, const Vector& x) const;

  std::string name() const { return impl_->name(); }

 private:
  void check_domain(const Vector& x) const;
  std::shared_ptr<const Impl> impl_;
};

struct Monomial {
  std::vector<int> exponents;  // one exponent per coordinate, size d
  double coeff;
};

// Exact polynomial; total degree capped at 12.
SmoothFunction make_polynomial(std::vector<Monomial> terms, int d);

// F(x) = e^x on R (d = 1); every derivative equals e^x.
SmoothFunction make_exp();

// F(x) = log x restricted to [m, M], 0 < m < M; derivative(k, x) =
// (-1)^(k-1) (k-1)! / x^k.  Evaluation outside the box throws.
SmoothFunction make_log_clamped(double m, double M);

// Text form used by the command line:
//   "exp"
//   "log:<m>,<M>"
//   "poly:[d=<n>;]<term>(+|-<term>)*"  with term = [coeff][*][x<i>[^<e>]]*...
// e.g. "poly:d=2;x0^2*x1 - 0.5*x1^3 + 2".  Dimension defaults to 1 + the
// largest variable index mentioned.
SmoothFunction parse_function(std::string_view spec);

struct FdReport {
  int order;
  double defect;     // max over coordinate directions |exact - central FD|
  double threshold;  // tol * (1 + max |exact directional value|)
  bool pass;
};

// Central finite-difference validation of derivative(k, x) along each
// coordinate direction.  The stencil must stay inside the domain box.
FdReport fd_check(const SmoothFunction& F, int k, const Vector& x,
                  double tol = 1e-6);

}  // namespace roughjump
