#include "roughjump/smoothfn.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>

#include "roughjump/numeric.hpp"

namespace roughjump {

SmoothFunction::SmoothFunction(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {
  if (!impl_) throw std::invalid_argument("SmoothFunction: null implementation");
}

bool SmoothFunction::in_domain(const Vector& x) const {
  if (x.size() != impl_->dim()) return false;
  const auto& box = impl_->domain();
  if (!box) return true;
  for (int i = 0; i < x.size(); ++i)
    if (x[i] < box->lo[i] || x[i] > box->hi[i]) return false;
  return true;
}

void SmoothFunction::check_domain(const Vector& x) const {
  if (x.size() != impl_->dim())
    throw std::invalid_argument(impl_->name() + ": argument dimension mismatch");
  if (!in_domain(x))
    throw std::domain_error(impl_->name() + ": evaluation outside declared domain");
}

double SmoothFunction::value(const Vector& x) const {
  check_domain(x);
  return impl_->value(x);
}

SymForm SmoothFunction::derivative(int k, const Vector& x) const {
  if (k < 1 || k > impl_->max_order())
    throw std::invalid_argument(impl_->name() + ": derivative order out of range");
  check_domain(x);
  return impl_->derivative(k, x);
}

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// e(e-1)...(e-a+1); zero when a > e.
double falling(int e, int a) {
  if (a > e) return 0.0;
  double r = 1.0;
  for (int i = 0; i < a; ++i) r *= static_cast<double>(e - i);
  return r;
}

constexpr int kMaxTotalDegree = 12;

class PolynomialImpl final : public SmoothFunction::Impl {
 public:
  PolynomialImpl(std::vector<Monomial> terms, int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("polynomial: dimension must be >= 1");
    std::map<std::vector<int>, double> merged;
    for (auto& m : terms) {
      if (static_cast<int>(m.exponents.size()) != d)
        throw std::invalid_argument("polynomial: exponent tuple size != dimension");
      int total = 0;
      for (int e : m.exponents) {
        if (e < 0) throw std::invalid_argument("polynomial: negative exponent");
        total += e;
      }
      if (total > kMaxTotalDegree)
        throw std::invalid_argument("polynomial: total degree exceeds 12");
      merged[m.exponents] += m.coeff;
    }
    for (auto& [e, c] : merged) terms_.push_back(Monomial{e, c});
  }

  int dim() const override { return d_; }
  int max_order() const override { return kMaxLevel; }
  const std::optional<DomainBox>& domain() const override { return box_; }

  double value(const Vector& x) const override {
    double s = 0.0;
    for (const auto& m : terms_) {
      double t = m.coeff;
      for (int j = 0; j < d_; ++j) t *= ipow(x[j], m.exponents[j]);
      s += t;
    }
    return s;
  }

  SymForm derivative(int k, const Vector& x) const override {
    SymForm out(k, d_);
    std::array<int, kMaxLevel> digits{};
    std::vector<int> counts(d_);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      unflatten(flat, k, d_, digits.data());
      std::fill(counts.begin(), counts.end(), 0);
      for (int j = 0; j < k; ++j) ++counts[digits[j]];
      // Entry depends only on the multiset of directions, hence symmetric.
      double s = 0.0;
      for (const auto& m : terms_) {
        double t = m.coeff;
        for (int j = 0; j < d_ && t != 0.0; ++j) {
          t *= falling(m.exponents[j], counts[j]);
          if (t != 0.0) t *= ipow(x[j], m.exponents[j] - counts[j]);
        }
        s += t;
      }
      out[flat] = s;
    }
    return out;
  }

  std::string name() const override { return "polynomial"; }

 private:
  int d_;
  std::vector<Monomial> terms_;
  std::optional<DomainBox> box_;  // empty: defined on all of R^d
};

class ExpImpl final : public SmoothFunction::Impl {
 public:
  int dim() const override { return 1; }
  int max_order() const override { return kMaxLevel; }
  const std::optional<DomainBox>& domain() const override { return box_; }
  double value(const Vector& x) const override { return std::exp(x[0]); }
  SymForm derivative(int k, const Vector& x) const override {
    SymForm out(k, 1);
    out[0] = std::exp(x[0]);
    return out;
  }
  std::string name() const override { return "exp"; }

 private:
  std::optional<DomainBox> box_;
};

class LogClampedImpl final : public SmoothFunction::Impl {
 public:
  LogClampedImpl(double m, double M) {
    if (!(0.0 < m && m < M))
      throw std::invalid_argument("log_clamped: need 0 < m < M");
    DomainBox box;
    box.lo = Vector::Constant(1, m);
    box.hi = Vector::Constant(1, M);
    box_ = box;
  }
  int dim() const override { return 1; }
  int max_order() const override { return kMaxLevel; }
  const std::optional<DomainBox>& domain() const override { return box_; }
  double value(const Vector& x) const override { return std::log(x[0]); }
  SymForm derivative(int k, const Vector& x) const override {
    SymForm out(k, 1);
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    out[0] = sign * factorial(k - 1) / ipow(x[0], k);
    return out;
  }
  std::string name() const override { return "log_clamped"; }

 private:
  std::optional<DomainBox> box_;
};

}  // namespace

SmoothFunction make_polynomial(std::vector<Monomial> terms, int d) {
  return SmoothFunction(std::make_shared<PolynomialImpl>(std::move(terms), d));
}

SmoothFunction make_exp() { return SmoothFunction(std::make_shared<ExpImpl>()); }

SmoothFunction make_log_clamped(double m, double M) {
  return SmoothFunction(std::make_shared<LogClampedImpl>(m, M));
}

namespace {

[[noreturn]] void parse_fail(std::string_view spec, const std::string& why) {
  throw std::invalid_argument("cannot parse function spec '" + std::string(spec) +
                              "': " + why);
}

struct RawTerm {
  double coeff = 1.0;
  std::map<int, int> powers;  // variable index -> exponent
};

// Split on top-level +/- (a sign following e/E inside a number is part of the
// number, as is a leading sign).
std::vector<std::string> split_terms(const std::string& body,
                                     std::string_view spec) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char ch = body[i];
    if ((ch == '+' || ch == '-') && !cur.empty()) {
      const char prev = cur.back();
      if (prev != 'e' && prev != 'E') {
        out.push_back(cur);
        cur.clear();
        cur.push_back(ch);
        continue;
      }
    }
    cur.push_back(ch);
  }
  if (cur.empty() || cur == "+" || cur == "-") parse_fail(spec, "empty term");
  out.push_back(cur);
  return out;
}

RawTerm parse_term(const std::string& term, std::string_view spec) {
  RawTerm out;
  std::size_t i = 0;
  if (term[i] == '+') {
    ++i;
  } else if (term[i] == '-') {
    out.coeff = -1.0;
    ++i;
  }
  bool expect_factor = true;
  while (i < term.size()) {
    if (term[i] == '*') {
      if (expect_factor) parse_fail(spec, "unexpected '*'");
      expect_factor = true;
      ++i;
      continue;
    }
    if (!expect_factor) parse_fail(spec, "missing '*' between factors");
    if (term[i] == 'x') {
      ++i;
      std::size_t j = i;
      while (j < term.size() && std::isdigit(static_cast<unsigned char>(term[j]))) ++j;
      if (j == i) parse_fail(spec, "variable without index (expected e.g. x0)");
      const int var = std::stoi(term.substr(i, j - i));
      i = j;
      int e = 1;
      if (i < term.size() && term[i] == '^') {
        ++i;
        j = i;
        while (j < term.size() && std::isdigit(static_cast<unsigned char>(term[j]))) ++j;
        if (j == i) parse_fail(spec, "'^' without exponent");
        e = std::stoi(term.substr(i, j - i));
        i = j;
      }
      out.powers[var] += e;
    } else {
      const char* begin = term.c_str() + i;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) parse_fail(spec, "expected a number or x<i>");
      out.coeff *= v;
      i += static_cast<std::size_t>(end - begin);
    }
    expect_factor = false;
  }
  if (expect_factor) parse_fail(spec, "trailing '*'");
  return out;
}

SmoothFunction parse_poly(std::string_view spec, std::string body) {
  int d = -1;
  if (body.rfind("d=", 0) == 0) {
    const auto semi = body.find(';');
    if (semi == std::string::npos) parse_fail(spec, "'d=' prefix without ';'");
    try {
      d = std::stoi(body.substr(2, semi - 2));
    } catch (const std::exception&) {
      parse_fail(spec, "bad dimension in 'd=' prefix");
    }
    if (d < 1) parse_fail(spec, "dimension must be >= 1");
    body = body.substr(semi + 1);
  }
  if (body.empty()) parse_fail(spec, "empty polynomial body");

  std::vector<RawTerm> raw;
  for (const auto& t : split_terms(body, spec)) raw.push_back(parse_term(t, spec));

  int max_var = -1;
  for (const auto& t : raw)
    for (const auto& [var, e] : t.powers) max_var = std::max(max_var, var);
  if (d < 0) d = std::max(1, max_var + 1);
  if (max_var >= d) parse_fail(spec, "variable index exceeds declared dimension");

  std::vector<Monomial> terms;
  for (const auto& t : raw) {
    Monomial m;
    m.exponents.assign(d, 0);
    for (const auto& [var, e] : t.powers) m.exponents[var] = e;
    m.coeff = t.coeff;
    terms.push_back(std::move(m));
  }
  return make_polynomial(std::move(terms), d);
}

}  // namespace

SmoothFunction parse_function(std::string_view spec) {
  std::string s;
  for (char ch : spec)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s == "exp") return make_exp();
  if (s.rfind("log:", 0) == 0) {
    const std::string body = s.substr(4);
    const auto comma = body.find(',');
    if (comma == std::string::npos)
      parse_fail(spec, "log needs two bounds: log:<m>,<M>");
    const std::string ms = body.substr(0, comma);
    const std::string Ms = body.substr(comma + 1);
    char* end = nullptr;
    const double m = std::strtod(ms.c_str(), &end);
    if (ms.empty() || end != ms.c_str() + ms.size())
      parse_fail(spec, "bad log bounds");
    const double M = std::strtod(Ms.c_str(), &end);
    if (Ms.empty() || end != Ms.c_str() + Ms.size())
      parse_fail(spec, "bad log bounds");
    return make_log_clamped(m, M);
  }
  if (s.rfind("poly:", 0) == 0) return parse_poly(spec, s.substr(5));
  parse_fail(spec, "unknown function kind (expected exp, log:..., poly:...)");
}

FdReport fd_check(const SmoothFunction& F, int k, const Vector& x, double tol) {
  if (k < 1 || k > F.max_order())
    throw std::invalid_argument("fd_check: derivative order out of range");
  const int d = F.dim();
  const SymForm exact = F.derivative(k, x);

  // Step size balancing truncation against rounding for a k-th central
  // difference; the k = 1 step is the classical 1e-5 * max(1, |x|).
  const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
  const double h =
      (k == 1)
          ? 1e-5 * scale
          : 2.0 * std::pow(std::numeric_limits<double>::epsilon(),
                           1.0 / static_cast<double>(k + 2)) * scale;

  double defect = 0.0;
  double max_exact = 0.0;
  Vector probe = x;
  for (int dir = 0; dir < d; ++dir) {
    Vector e = Vector::Zero(d);
    e[dir] = 1.0;
    const double exact_dir = pair_rank1(exact, e);
    max_exact = std::max(max_exact, std::abs(exact_dir));

    double fd = 0.0;
    for (int j = 0; j <= k; ++j) {
      probe = x;
      probe[dir] += (0.5 * k - j) * h;
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      fd += sign * binomial(k, j) * F.value(probe);
    }
    fd /= ipow(h, k);
    defect = std::max(defect, std::abs(exact_dir - fd));
  }

  FdReport rep;
  rep.order = k;
  rep.defect = defect;
  rep.threshold = tol * (1.0 + max_exact);
  rep.pass = defect <= rep.threshold;
  return rep;
}

}  // namespace roughjump
