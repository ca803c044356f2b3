#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "roughjump/lift.hpp"
#include "roughjump/path.hpp"
#include "roughjump/rrs.hpp"
#include "roughjump/smoothfn.hpp"

namespace roughjump {

enum class PathCase { continuous, cadlag, general };
std::string_view to_string(PathCase c);

// One jump's contribution to the change-of-variable identity: the raw
// increment of F across the jump minus its Taylor compensation of order n.
// Left jumps expand around the pre-jump value, right jumps around the on-grid
// value, so both corrections are of genuine order n+1 in the jump size.
struct JumpCorrection {
  int index = 0;
  double time = 0.0;
  double raw = 0.0;     // F after the jump minus F before it
  double taylor = 0.0;  // sum_{k=1}^{n} D^kF(base)(jump)^{ox k}/k!
  double correction = 0.0;  // raw - taylor
};

// All left (respectively right) corrections of X under F at compensation
// order n.  Indices with a zero one-sided jump are omitted.
std::vector<JumpCorrection> left_jump_corrections(const SmoothFunction& F,
                                                  const RegulatedPath& X,
                                                  int n);
std::vector<JumpCorrection> right_jump_corrections(const SmoothFunction& F,
                                                   const RegulatedPath& X,
                                                   int n);

struct ItoReport {
  double p = 0.0;
  double tol = 0.0;
  double lhs = 0.0;  // F(X_T) - F(X_0)
  IntegrationReport integral;
  std::vector<JumpCorrection> left_corrections;
  std::vector<JumpCorrection> right_corrections;
  double left_sum = 0.0;
  double right_sum = 0.0;
  double residual = 0.0;  // lhs - integral - left_sum - right_sum
  PathCase path_case = PathCase::general;
};

// Evaluates both sides of the change-of-variable identity
//   F(X_T) - F(X_0) = (integral) + (left corrections) + (right corrections)
// with compensation order n = floor(p).  Right corrections vanish identically
// for cadlag paths and both sums vanish for continuous ones; the report's
// path_case records which collapse applies.
ItoReport ito_verify(const SmoothFunction& F,
                     std::shared_ptr<const RegulatedPath> X, double p,
                     double tol = 1e-9, const IntegrateOptions& opt = {});
ItoReport ito_verify(const SmoothFunction& F, const RegulatedPath& X, double p,
                     double tol = 1e-9, const IntegrateOptions& opt = {});

// Partition-independent pieces of the identity, for re-testing the residual
// across many partitions without recomputing the jump ledgers.
struct ItoParts {
  double lhs = 0.0;
  double left_sum = 0.0;
  double right_sum = 0.0;
};
ItoParts ito_parts(const SmoothFunction& F, const RegulatedPath& X, int n);
double residual_on_partition(const ItoParts& parts, const ControlledPath& Y,
                             const ReducedRoughPath& X, const Partition& pi);

nlohmann::json ito_report_to_json(const ItoReport& rep);

// ---------------------------------------------------------------------------
// Chain rule for observables Y = phi(X)

// A driver description for the substitution check: Y is claimed to satisfy
// dY = V(Y) dX against the stated driver.  The field maps a state to the
// dim(Y) x dim(X) coefficient matrix.
using VectorField = std::function<Eigen::MatrixXd(const Vector&)>;
struct DriverSpec {
  std::shared_ptr<const RegulatedPath> driver;
  VectorField field;
  double p_driver = 1.0;
};

struct SubstitutionCheck {
  std::string status;  // "checked" or "not applicable"
  double lhs = 0.0;    // sum DF(Y_i) dY_i
  double rhs = 0.0;    // sum DF(Y_i) V(Y_i) dX_i
  double residual = 0.0;
};

struct ChainRuleReport {
  ItoReport observable;
  SubstitutionCheck substitution;
};

// Change-of-variable identity for F(Y); when a bounded-variation driver
// (p_driver == 1) is supplied, additionally verifies that substituting
// dY = V(Y) dX leaves the first-order sum unchanged.  Drivers of lower
// regularity admit no partition-wise substitution and are reported as
// "not applicable".
ChainRuleReport observable_chain_rule(
    const SmoothFunction& F, std::shared_ptr<const RegulatedPath> Y, double p,
    double tol = 1e-9, const std::optional<DriverSpec>& driver = std::nullopt,
    const IntegrateOptions& opt = {});

nlohmann::json chain_rule_report_to_json(const ChainRuleReport& rep);

// ---------------------------------------------------------------------------
// Log-wealth bookkeeping

// Per-jump comparison of the generic Taylor correction of log against the
// ratio form log(1+r) - sum_{k<=n} (-1)^{k-1} r^k / k with r the relative
// jump; the two must agree term by term.
struct WealthJumpEntry {
  int index = 0;
  double time = 0.0;
  double ratio = 0.0;  // jump / pre-jump wealth
  double ratio_correction = 0.0;
  double generic_correction = 0.0;
  double max_term_gap = 0.0;  // largest per-order discrepancy
};

struct WealthReport {
  ItoReport ito;
  std::vector<WealthJumpEntry> ledger;
  double clamp_lo = 0.0;
  double clamp_hi = 0.0;
};

// Change-of-variable report for log of a positive cadlag scalar path, with
// the per-jump ratio-form ledger.  The log is clamped well clear of the
// path's range (half the minimum, twice the maximum).
WealthReport log_wealth(std::shared_ptr<const RegulatedPath> W, double p,
                        double tol = 1e-9, const IntegrateOptions& opt = {});
WealthReport log_wealth(const RegulatedPath& W, double p, double tol = 1e-9,
                        const IntegrateOptions& opt = {});

nlohmann::json wealth_report_to_json(const WealthReport& rep);

// ---------------------------------------------------------------------------
// Remainder-term diagnostics

// Signed remainder groups of the discrete change-of-variable decomposition on
// a fixed partition: b1 collects the two-sided Taylor defects across open
// cells, b2 the first-derivative mismatch at left cell ends applied to the
// open-cell increment, b3 the mixed jump/increment cross terms.  a1..a3 are
// the main groups (compensated sum, jump increments of F, their Taylor
// heads); the eight groups always sum to F(X_T) - F(X_0) exactly, which
// identity_residual records.
struct BTerms {
  int cells = 0;
  int alternation_unattained = 0;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
  double identity_residual = 0.0;
};

// The cross-term group b3 is only guaranteed to shrink when every cell has a
// continuous side: no cell may both open with a right jump and close with a
// left jump.  This inserts an interior continuity point into each offending
// cell (nearest the midpoint); cells with no such point are counted in
// *unattained and left alone.
Partition split_for_alternation(const RegulatedPath& X, const Partition& pi,
                                int* unattained = nullptr);

BTerms proof_terms_on(const SmoothFunction& F, const RegulatedPath& X,
                      double p, const Partition& pi,
                      bool enforce_alternation = true);

struct BTermLevel {
  double eps = 0.0;
  double eta = 0.0;
  int cells = 0;
  BTerms terms;
};

// Remainder magnitudes along the default nested refinement chain; the decay
// of max(|b1|,|b2|,|b3|) with eps is the quantitative content of the
// convergence proof.
std::vector<BTermLevel> proof_term_decay(const SmoothFunction& F,
                                         std::shared_ptr<const RegulatedPath> X,
                                         double p, int levels = 9);

nlohmann::json proof_terms_to_json(const std::vector<BTermLevel>& levels);

}  // namespace roughjump
