#include "roughjump/ito.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "roughjump/numeric.hpp"
#include "roughjump/tensor.hpp"

namespace roughjump {

namespace {

bool nonzero(const Vector& v) {
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) return true;
  return false;
}

PathCase classify(const RegulatedPath& X) {
  if (X.is_continuous()) return PathCase::continuous;
  if (X.is_cadlag()) return PathCase::cadlag;
  return PathCase::general;
}

// Taylor head sum_{k=1}^{n} D^kF(base)(jump)^{ox k}/k!.
double taylor_head(const SmoothFunction& F, const Vector& base,
                   const Vector& jump, int n) {
  double acc = 0.0;
  for (int k = 1; k <= n; ++k)
    acc += pair_rank1(F.derivative(k, base), jump) / factorial(k);
  return acc;
}

double sum_corrections(const std::vector<JumpCorrection>& cs) {
  NeumaierSum s;
  for (const JumpCorrection& c : cs) s.add(c.correction);
  return s.value();
}

}  // namespace

std::string_view to_string(PathCase c) {
  switch (c) {
    case PathCase::continuous: return "continuous";
    case PathCase::cadlag: return "cadlag";
    default: return "general";
  }
}

std::vector<JumpCorrection> left_jump_corrections(const SmoothFunction& F,
                                                  const RegulatedPath& X,
                                                  int n) {
  if (n < 1) throw std::invalid_argument("jump corrections: need n >= 1");
  std::vector<JumpCorrection> out;
  for (int i = 0; i <= X.last_index(); ++i) {
    const Vector d = X.jump_minus(i);
    if (!nonzero(d)) continue;
    JumpCorrection jc;
    jc.index = i;
    jc.time = X.time(i);
    jc.raw = F.value(X.at(i)) - F.value(X.left(i));
    jc.taylor = taylor_head(F, X.left(i), d, n);
    jc.correction = jc.raw - jc.taylor;
    out.push_back(jc);
  }
  return out;
}

std::vector<JumpCorrection> right_jump_corrections(const SmoothFunction& F,
                                                   const RegulatedPath& X,
                                                   int n) {
  if (n < 1) throw std::invalid_argument("jump corrections: need n >= 1");
  std::vector<JumpCorrection> out;
  for (int i = 0; i <= X.last_index(); ++i) {
    const Vector d = X.jump_plus(i);
    if (!nonzero(d)) continue;
    JumpCorrection jc;
    jc.index = i;
    jc.time = X.time(i);
    jc.raw = F.value(X.right(i)) - F.value(X.at(i));
    jc.taylor = taylor_head(F, X.at(i), d, n);
    jc.correction = jc.raw - jc.taylor;
    out.push_back(jc);
  }
  return out;
}

ItoParts ito_parts(const SmoothFunction& F, const RegulatedPath& X, int n) {
  ItoParts parts;
  parts.lhs = F.value(X.at(X.last_index())) - F.value(X.at(0));
  parts.left_sum = sum_corrections(left_jump_corrections(F, X, n));
  parts.right_sum = sum_corrections(right_jump_corrections(F, X, n));
  return parts;
}

double residual_on_partition(const ItoParts& parts, const ControlledPath& Y,
                             const ReducedRoughPath& X, const Partition& pi) {
  const CompensatedSum cs = compensated_sum(Y, X, pi);
  const long double r = static_cast<long double>(parts.lhs) - cs.value -
                        parts.left_sum - parts.right_sum;
  return static_cast<double>(r);
}

ItoReport ito_verify(const SmoothFunction& F,
                     std::shared_ptr<const RegulatedPath> X, double p,
                     double tol, const IntegrateOptions& opt) {
  if (!X) throw std::invalid_argument("ito_verify: null path");
  if (!(p >= 1.0)) throw std::invalid_argument("ito_verify: need p >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("ito_verify: tol must be > 0");
  const int n = static_cast<int>(std::floor(p));

  ItoReport rep;
  rep.p = p;
  rep.tol = tol;
  rep.path_case = classify(*X);
  rep.lhs = F.value(X->at(X->last_index())) - F.value(X->at(0));
  rep.left_corrections = left_jump_corrections(F, *X, n);
  rep.right_corrections = right_jump_corrections(F, *X, n);
  rep.left_sum = sum_corrections(rep.left_corrections);
  rep.right_sum = sum_corrections(rep.right_corrections);

  const ReducedRoughPath lift(X, p);
  const ControlledPath Y = controlled_from_function(F, lift);
  IntegrateOptions o = opt;
  o.tol = tol;
  rep.integral = rrs_integrate(Y, lift, o);

  const long double r = static_cast<long double>(rep.lhs) -
                        rep.integral.value - rep.left_sum - rep.right_sum;
  rep.residual = static_cast<double>(r);
  return rep;
}

ItoReport ito_verify(const SmoothFunction& F, const RegulatedPath& X, double p,
                     double tol, const IntegrateOptions& opt) {
  return ito_verify(F, std::make_shared<const RegulatedPath>(X), p, tol, opt);
}

nlohmann::json ito_report_to_json(const ItoReport& rep) {
  nlohmann::json j;
  j["lhs"] = rep.lhs;
  j["p"] = rep.p;
  j["tol"] = rep.tol;
  j["integral"] = integration_report_to_json(rep.integral);
  auto corrections = [](const std::vector<JumpCorrection>& cs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const JumpCorrection& c : cs)
      arr.push_back({{"t", c.time}, {"value", c.correction}});
    return arr;
  };
  j["left_corrections"] = corrections(rep.left_corrections);
  j["right_corrections"] = corrections(rep.right_corrections);
  j["left_sum"] = rep.left_sum;
  j["right_sum"] = rep.right_sum;
  j["residual"] = rep.residual;
  j["case"] = std::string(to_string(rep.path_case));
  return j;
}

ChainRuleReport observable_chain_rule(const SmoothFunction& F,
                                      std::shared_ptr<const RegulatedPath> Y,
                                      double p, double tol,
                                      const std::optional<DriverSpec>& driver,
                                      const IntegrateOptions& opt) {
  ChainRuleReport rep;
  rep.observable = ito_verify(F, Y, p, tol, opt);

  if (!driver || driver->p_driver != 1.0) {
    rep.substitution.status = "not applicable";
    return rep;
  }
  if (!driver->driver || !driver->field)
    throw std::invalid_argument("chain rule: driver spec incomplete");
  const RegulatedPath& X = *driver->driver;
  const RegulatedPath& Yp = *Y;
  if (X.last_index() != Yp.last_index())
    throw std::invalid_argument("chain rule: driver and observable grids differ");

  const int dY = Yp.dim();
  NeumaierSum lhs, rhs;
  for (int i = 0; i < Yp.last_index(); ++i) {
    const SymForm g = F.derivative(1, Yp.at(i));
    Vector gv(dY);
    for (int c = 0; c < dY; ++c) gv[c] = g[c];
    lhs.add(gv.dot(Yp.increment(i, i + 1)));
    const Eigen::MatrixXd V = driver->field(Yp.at(i));
    if (V.rows() != dY || V.cols() != X.dim())
      throw std::invalid_argument("chain rule: vector field has wrong shape");
    rhs.add(gv.dot(V * X.increment(i, i + 1)));
  }
  rep.substitution.status = "checked";
  rep.substitution.lhs = lhs.value();
  rep.substitution.rhs = rhs.value();
  rep.substitution.residual = lhs.value() - rhs.value();
  return rep;
}

nlohmann::json chain_rule_report_to_json(const ChainRuleReport& rep) {
  nlohmann::json j;
  j["observable"] = ito_report_to_json(rep.observable);
  j["substitution"] = {{"status", rep.substitution.status},
                       {"lhs", rep.substitution.lhs},
                       {"rhs", rep.substitution.rhs},
                       {"residual", rep.substitution.residual}};
  return j;
}

WealthReport log_wealth(std::shared_ptr<const RegulatedPath> W, double p,
                        double tol, const IntegrateOptions& opt) {
  if (!W) throw std::invalid_argument("log wealth: null path");
  if (W->dim() != 1)
    throw std::invalid_argument("log wealth: wealth must be scalar");
  if (!W->is_cadlag())
    throw std::invalid_argument("log wealth: right jumps present");
  const double lo = W->value_lower_bound()[0];
  const double hi = W->value_upper_bound()[0];
  if (!(lo > 0.0))
    throw std::invalid_argument("log wealth: wealth must stay positive");

  WealthReport rep;
  rep.clamp_lo = lo / 2.0;
  rep.clamp_hi = hi * 2.0;
  const SmoothFunction F = make_log_clamped(rep.clamp_lo, rep.clamp_hi);
  rep.ito = ito_verify(F, W, p, tol, opt);

  const int n = static_cast<int>(std::floor(p));
  for (const JumpCorrection& jc : rep.ito.left_corrections) {
    WealthJumpEntry e;
    e.index = jc.index;
    e.time = jc.time;
    const double wm = W->left(jc.index)[0];
    const double dm = W->jump_minus(jc.index)[0];
    e.ratio = dm / wm;
    Vector base(1), jump(1);
    base[0] = wm;
    jump[0] = dm;
    double head = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double ratio_term =
          ((k % 2 == 1) ? 1.0 : -1.0) * std::pow(e.ratio, k) / k;
      const double generic_term =
          pair_rank1(F.derivative(k, base), jump) / factorial(k);
      head += ratio_term;
      e.max_term_gap =
          std::max(e.max_term_gap, std::abs(ratio_term - generic_term) /
                                       (1.0 + std::abs(ratio_term)));
    }
    e.ratio_correction = std::log1p(e.ratio) - head;
    e.generic_correction = jc.correction;
    rep.ledger.push_back(e);
  }
  return rep;
}

WealthReport log_wealth(const RegulatedPath& W, double p, double tol,
                        const IntegrateOptions& opt) {
  return log_wealth(std::make_shared<const RegulatedPath>(W), p, tol, opt);
}

nlohmann::json wealth_report_to_json(const WealthReport& rep) {
  nlohmann::json j;
  j["ito"] = ito_report_to_json(rep.ito);
  nlohmann::json ledger = nlohmann::json::array();
  for (const WealthJumpEntry& e : rep.ledger)
    ledger.push_back({{"index", e.index},
                      {"t", e.time},
                      {"ratio", e.ratio},
                      {"ratio_correction", e.ratio_correction},
                      {"generic_correction", e.generic_correction},
                      {"max_term_gap", e.max_term_gap}});
  j["ledger"] = std::move(ledger);
  j["clamp_lo"] = rep.clamp_lo;
  j["clamp_hi"] = rep.clamp_hi;
  return j;
}

// ---------------------------------------------------------------------------
// Remainder-term diagnostics

Partition split_for_alternation(const RegulatedPath& X, const Partition& pi,
                                int* unattained) {
  const auto& idx = pi.indices();
  std::vector<int> out;
  out.reserve(idx.size());
  out.push_back(idx.front());
  int missed = 0;
  for (std::size_t c = 0; c + 1 < idx.size(); ++c) {
    const int a = idx[c], b = idx[c + 1];
    if (nonzero(X.jump_plus(a)) && nonzero(X.jump_minus(b))) {
      // Insert an interior continuity point nearest the midpoint; it leaves
      // both sub-cells with a continuous side.
      int found = -1;
      const int mid = a + (b - a) / 2;
      for (int off = 0; found < 0 && (mid - off > a || mid + off < b); ++off) {
        if (mid + off < b && !X.has_jump(mid + off)) found = mid + off;
        if (found < 0 && mid - off > a && off > 0 && !X.has_jump(mid - off))
          found = mid - off;
      }
      if (found > a)
        out.push_back(found);
      else
        ++missed;
    }
    out.push_back(b);
  }
  if (unattained) *unattained = missed;
  return Partition(std::move(out), pi.last_index());
}

BTerms proof_terms_on(const SmoothFunction& F, const RegulatedPath& X,
                      double p, const Partition& pi, bool enforce_alternation) {
  if (!(p >= 1.0)) throw std::invalid_argument("proof terms: need p >= 1");
  const int n = static_cast<int>(std::floor(p));

  BTerms out;
  Partition work = enforce_alternation
                       ? split_for_alternation(X, pi, &out.alternation_unattained)
                       : pi;
  const auto& idx = work.indices();
  out.cells = work.num_cells();

  NeumaierSum a1, a2, a3, b1, b2, b3;
  for (std::size_t c = 0; c + 1 < idx.size(); ++c) {
    const int a = idx[c], b = idx[c + 1];
    const Vector& at_a = X.at(a);
    const Vector& right_a = X.right(a);
    const Vector& left_b = X.left(b);
    const Vector& at_b = X.at(b);
    const Vector dplus = X.jump_plus(a);
    const Vector dminus = X.jump_minus(b);
    const Vector M = X.increment_open(a, b);
    const Vector xab = X.increment(a, b);
    const bool jp = nonzero(dplus);
    const bool jm = nonzero(dminus);
    const bool mv = nonzero(M);

    a1.add(taylor_head(F, at_a, xab, n));
    a2.add((F.value(at_b) - F.value(left_b)) +
           (F.value(right_a) - F.value(at_a)));
    if (jp) a3.add(-taylor_head(F, at_a, dplus, n));
    if (jm) a3.add(-taylor_head(F, left_b, dminus, n));

    if (mv)
      b1.add(F.value(left_b) - F.value(right_a) -
             taylor_head(F, right_a, M, n));

    if (jp && mv) {
      SymForm g = F.derivative(1, right_a) - F.derivative(1, at_a);
      for (int k = 2; k <= n; ++k)
        g -= (1.0 / factorial(k - 1)) *
             contract_rank1(F.derivative(k, at_a), dplus, k - 1);
      b2.add(pair_rank1(g, M));
    }

    // Cross-term group: the five alternating sums.
    double s = 0.0;
    if (jm)
      for (int k = 1; k <= n; ++k)
        s += (pair_rank1(F.derivative(k, left_b), dminus) -
              pair_rank1(F.derivative(k, at_a), dminus)) /
             factorial(k);
    if (jp && mv)
      for (int k = 2; k <= n; ++k)
        s += (pair_rank1(F.derivative(k, right_a), M) -
              pair_rank1(F.derivative(k, at_a), M)) /
             factorial(k);
    using Factor = std::pair<const Vector*, int>;
    if (jp && mv)
      for (int k = 3; k <= n; ++k)
        for (int m = 1; m <= k - 2; ++m) {
          const Factor f[2] = {{&dplus, m}, {&M, k - m}};
          s -= binomial(k, m) / factorial(k) *
               pair_powers(F.derivative(k, at_a), f);
        }
    if (jm && mv)
      for (int k = 2; k <= n; ++k)
        for (int m = 1; m <= k - 1; ++m) {
          const Factor f[2] = {{&dminus, m}, {&M, k - m}};
          s -= binomial(k, m) / factorial(k) *
               pair_powers(F.derivative(k, at_a), f);
        }
    if (jp && jm)
      for (int k = 2; k <= n; ++k)
        for (int m = 1; m <= k - 1; ++m) {
          const Factor f[2] = {{&dplus, m}, {&dminus, k - m}};
          s -= binomial(k, m) / factorial(k) *
               pair_powers(F.derivative(k, at_a), f);
        }
    b3.add(s);
  }

  out.a1 = a1.value();
  out.a2 = a2.value();
  out.a3 = a3.value();
  out.b1 = b1.value();
  out.b2 = b2.value();
  out.b3 = b3.value();
  const double lhs =
      F.value(X.at(X.last_index())) - F.value(X.at(0));
  const long double total = static_cast<long double>(out.a1) + out.a2 +
                            out.a3 + out.b1 + out.b2 + out.b3;
  out.identity_residual = static_cast<double>(lhs - total);
  return out;
}

std::vector<BTermLevel> proof_term_decay(const SmoothFunction& F,
                                         std::shared_ptr<const RegulatedPath> X,
                                         double p, int levels) {
  if (!X) throw std::invalid_argument("proof term decay: null path");
  const RefinementSchedule sch = default_refinement_schedule(*X, levels);
  std::vector<BTermLevel> out;
  std::optional<Partition> chain;
  for (std::size_t m = 0; m < sch.eps.size(); ++m) {
    Partition pm = refine_partition(*X, sch.eps[m], sch.eta[m]);
    chain = chain ? Partition::merge(*chain, pm) : pm;
    BTermLevel lvl;
    lvl.eps = sch.eps[m];
    lvl.eta = sch.eta[m];
    lvl.terms = proof_terms_on(F, *X, p, *chain, true);
    lvl.cells = lvl.terms.cells;
    out.push_back(std::move(lvl));
  }
  return out;
}

nlohmann::json proof_terms_to_json(const std::vector<BTermLevel>& levels) {
  nlohmann::json arr = nlohmann::json::array();
  for (const BTermLevel& l : levels)
    arr.push_back({{"eps", l.eps},
                   {"eta", l.eta},
                   {"cells", l.cells},
                   {"b1", l.terms.b1},
                   {"b2", l.terms.b2},
                   {"b3", l.terms.b3},
                   {"alternation_unattained", l.terms.alternation_unattained},
                   {"identity_residual", l.terms.identity_residual}});
  return {{"levels", std::move(arr)}};
}

}  // namespace roughjump
