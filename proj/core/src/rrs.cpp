#include "roughjump/rrs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "roughjump/numeric.hpp"

namespace roughjump {

namespace {

void require_shared_base(const ControlledPath& Y, const ReducedRoughPath& X) {
  if (Y.base_ptr() != X.base_ptr())
    throw std::invalid_argument(
        "compensated sum: controlled path and lift must share a base path");
  if (Y.levels() != X.level_count())
    throw std::invalid_argument("compensated sum: level counts disagree");
}

// Xi_{s,t} = sum_{k=0}^{n-1} <Y^k_s, dx^{(k+1)}/(k+1)!> via the rank-1 fast
// path; dx is the grid increment of the cell.
double cell_term(const ControlledPath& Y, int n, const Vector& dx, int s) {
  double acc = 0.0;
  for (int k = 0; k < n; ++k)
    acc += pair_rank1(Y.level(k, s), dx) / factorial(k + 1);
  return acc;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CompensatedSum compensated_sum(const ControlledPath& Y,
                               const ReducedRoughPath& X, const Partition& pi) {
  require_shared_base(Y, X);
  const RegulatedPath& B = X.base();
  if (pi.last_index() != B.last_index())
    throw std::invalid_argument("compensated sum: partition grid mismatch");
  const int n = Y.levels();
  const auto& idx = pi.indices();
  std::vector<double> terms;
  terms.reserve(idx.size() - 1);
  for (std::size_t c = 0; c + 1 < idx.size(); ++c) {
    const Vector dx = B.increment(idx[c], idx[c + 1]);
    terms.push_back(cell_term(Y, n, dx, idx[c]));
  }
  CompensatedSum out{pi, pairwise_sum(terms), std::move(terms)};
  return out;
}

Partition refine_partition(const RegulatedPath& X, double eps, double eta) {
  if (!(eps > 0.0) || !(eta > 0.0))
    throw std::invalid_argument("refine_partition: eps and eta must be positive");
  const int N = X.last_index();
  const int d = X.dim();

  std::vector<char> forced(N + 1, 0);
  for (int i = 0; i <= N; ++i)
    if (X.jump_minus(i).norm() > eta || X.jump_plus(i).norm() > eta)
      forced[i] = 1;

  std::vector<int> idx{0};
  // Greedy maximal cells: feasibility (no forced interior point, interior
  // oscillation < eps) is monotone under cell inclusion, so greedy extension
  // yields the coarsest partition.
  int i = 0;
  // Interior value pool of the current cell, for incremental oscillation.
  std::vector<double> pool;       // rows of d coords (d >= 2)
  double lo = 0.0, hi = 0.0;      // d == 1 shortcut
  while (i < N) {
    int j = i + 1;
    pool.clear();
    bool have = false;
    double osc = 0.0;
    while (j < N) {
      // Extending the cell to j+1 makes j interior.
      if (forced[j]) break;
      double next_osc = osc;
      if (d == 1) {
        const double vals[3] = {X.left(j)[0], X.at(j)[0], X.right(j)[0]};
        double nlo = have ? lo : vals[0];
        double nhi = have ? hi : vals[0];
        for (double v : vals) {
          nlo = std::min(nlo, v);
          nhi = std::max(nhi, v);
        }
        next_osc = nhi - nlo;
        if (next_osc >= eps) break;
        lo = nlo;
        hi = nhi;
      } else {
        const Vector* vals[3] = {&X.left(j), &X.at(j), &X.right(j)};
        // new-vs-pool and new-vs-new distances extend the running maximum
        for (int a = 0; a < 3; ++a) {
          for (std::size_t r = 0; r * d < pool.size(); ++r) {
            double s = 0.0;
            for (int c = 0; c < d; ++c) {
              const double x = (*vals[a])[c] - pool[r * d + c];
              s += x * x;
            }
            next_osc = std::max(next_osc, std::sqrt(s));
          }
          for (int b = a + 1; b < 3; ++b)
            next_osc = std::max(next_osc, (*vals[a] - *vals[b]).norm());
        }
        if (next_osc >= eps) break;
        for (int a = 0; a < 3; ++a)
          for (int c = 0; c < d; ++c) pool.push_back((*vals[a])[c]);
      }
      have = true;
      osc = next_osc;
      ++j;
    }
    idx.push_back(j);
    i = j;
  }
  return Partition(std::move(idx), N);
}

SewingSample sewing_defect(const ControlledPath& Y, const ReducedRoughPath& X,
                           int i, int u, int j, bool with_controls) {
  require_shared_base(Y, X);
  if (!(i <= u && u <= j))
    throw std::invalid_argument("sewing_defect: need i <= u <= j");
  const RegulatedPath& B = X.base();
  const int n = Y.levels();

  // Direct three-sum evaluation, accumulated in extended precision since the
  // three Xi values cancel to a much smaller defect.
  long double direct = 0.0L;
  auto add_xi = [&](int a, int b, long double sign) {
    if (a == b) return;
    const Vector dx = B.increment(a, b);
    for (int k = 0; k < n; ++k)
      direct += sign * static_cast<long double>(
                           pair_rank1(Y.level(k, a), dx) / factorial(k + 1));
  };
  add_xi(i, j, +1.0L);
  add_xi(i, u, -1.0L);
  add_xi(u, j, -1.0L);

  long double rem = 0.0L;
  for (int k = 0; k < n; ++k) {
    const SymForm R = Y.remainder(k, i, u);
    rem -= static_cast<long double>(pair(R, X.level(k + 1, u, j)));
  }

  SewingSample s;
  s.s = i;
  s.u = u;
  s.t = j;
  s.direct = static_cast<double>(direct);
  s.remainder_form = static_cast<double>(rem);
  if (with_controls) {
    const ControlFunction c(X.base_ptr(), X.p_exponent());
    s.c_su = c(i, u);
    s.c_ut = c(u, j);
  }
  return s;
}

RefinementSchedule default_refinement_schedule(const RegulatedPath& X,
                                               int levels) {
  if (levels < 1)
    throw std::invalid_argument("refinement schedule: need at least one level");
  RefinementSchedule sch;
  const int N = X.last_index();
  double osc0 = (N >= 2) ? X.oscillation(0, N) : 0.0;
  if (!(osc0 > 0.0)) osc0 = 1.0;

  std::vector<double> mags;
  for (const JumpEvent& e : X.jumps()) {
    const double dm = e.dminus.norm();
    const double dp = e.dplus.norm();
    if (dm > 0.0) mags.push_back(dm);
    if (dp > 0.0) mags.push_back(dp);
  }
  double eta0 = 1.0;
  if (!mags.empty()) {
    std::sort(mags.begin(), mags.end());
    eta0 = mags[static_cast<std::size_t>(0.9 * (mags.size() - 1))];
  }
  for (int m = 0; m < levels; ++m) {
    sch.eps.push_back(osc0 * std::ldexp(1.0, -m));
    sch.eta.push_back(eta0 * std::ldexp(1.0, -m));
  }
  return sch;
}

IntegrationReport rrs_integrate(const ControlledPath& Y,
                                const ReducedRoughPath& X,
                                const IntegrateOptions& opt) {
  require_shared_base(Y, X);
  if (!(opt.tol > 0.0)) throw std::invalid_argument("rrs_integrate: tol must be > 0");
  const RegulatedPath& B = X.base();
  const int N = B.last_index();

  IntegrationReport rep;
  rep.tol = opt.tol;

  RefinementSchedule sch;
  if (opt.schedule) {
    sch.eps = *opt.schedule;
    for (std::size_t m = 0; m < sch.eps.size(); ++m) {
      if (!(sch.eps[m] > 0.0))
        throw std::invalid_argument("rrs_integrate: schedule must be positive");
      if (m > 0 && !(sch.eps[m] < sch.eps[m - 1]))
        throw std::invalid_argument("rrs_integrate: schedule must strictly decrease");
    }
    const RefinementSchedule def =
        default_refinement_schedule(B, std::max<int>(1, sch.eps.size()));
    for (std::size_t m = 0; m < sch.eps.size(); ++m)
      sch.eta.push_back(def.eta[std::min(m, def.eta.size() - 1)]);
  } else {
    sch = default_refinement_schedule(B, opt.levels);
  }
  rep.etas = sch.eta;

  std::optional<Partition> chain;
  for (std::size_t m = 0; m < sch.eps.size(); ++m) {
    Partition pm = refine_partition(B, sch.eps[m], sch.eta[m]);
    chain = chain ? Partition::merge(*chain, pm) : pm;
    const CompensatedSum cs = compensated_sum(Y, X, *chain);
    rep.trace.push_back(TraceEntry{chain->num_cells(), sch.eps[m], cs.value});
  }
  const CompensatedSum fin = compensated_sum(Y, X, Partition::full(N));
  rep.trace.push_back(TraceEntry{N, 0.0, fin.value});
  rep.value = fin.value;

  const std::size_t L = rep.trace.size();
  rep.converged =
      L < 2 || std::abs(rep.trace[L - 1].value - rep.trace[L - 2].value) <=
                   opt.tol * (1.0 + std::abs(rep.value));

  if (!sch.eta.empty()) {
    const double eta_last = sch.eta.back();
    for (int i = 0; i <= N; ++i)
      if (B.jump_minus(i).norm() > eta_last || B.jump_plus(i).norm() > eta_last)
        rep.large_jump_indices.push_back(i);
  }

  if (opt.record_sewing && N >= 2) {
    std::uint64_t state = opt.sample_seed;
    for (int q = 0; q < opt.sewing_samples; ++q) {
      // Triples near the diagonal: that is where the sewing bound is
      // informative, and it keeps the control DP cheap on large grids.
      const int span = 2 + static_cast<int>(splitmix64(state) % 62);
      const int width = std::min(span, N);
      const int s = static_cast<int>(splitmix64(state) % (N - width + 1));
      const int t = s + width;
      const int u = s + 1 + static_cast<int>(splitmix64(state) % (width - 1));
      rep.sewing_samples.push_back(sewing_defect(Y, X, s, u, t));
    }
  }
  return rep;
}

nlohmann::json integration_report_to_json(const IntegrationReport& rep) {
  nlohmann::json j;
  j["value"] = rep.value;
  j["converged"] = rep.converged;
  nlohmann::json trace = nlohmann::json::array();
  for (const TraceEntry& e : rep.trace)
    trace.push_back({{"cells", e.cells}, {"eps", e.eps}, {"value", e.value}});
  j["trace"] = std::move(trace);
  nlohmann::json samples = nlohmann::json::array();
  for (const SewingSample& s : rep.sewing_samples)
    samples.push_back({{"s", s.s},
                       {"u", s.u},
                       {"t", s.t},
                       {"defect", std::abs(s.direct)},
                       {"c_su", s.c_su},
                       {"c_ut", s.c_ut}});
  j["sewing_samples"] = std::move(samples);
  return j;
}

}  // namespace roughjump
