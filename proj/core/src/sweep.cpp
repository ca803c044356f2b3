#include "roughjump/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "roughjump/ito.hpp"
#include "roughjump/smoothfn.hpp"

namespace roughjump {

namespace {

void validate(const SweepConfig& cfg) {
  if (cfg.model != "fbm" && cfg.model != "cp" && cfg.model != "mixed")
    throw std::invalid_argument("sweep: unknown model " + cfg.model);
  if (cfg.seeds.empty() || cfg.sizes.empty() || cfg.ps.empty())
    throw std::invalid_argument("sweep: seeds, sizes, and ps must be nonempty");
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
    if (cfg.sizes[i] < 2) throw std::invalid_argument("sweep: sizes must be >= 2");
    if (i > 0 && (cfg.sizes[i] <= cfg.sizes[i - 1] ||
                  cfg.sizes[i] % cfg.sizes[i - 1] != 0))
      throw std::invalid_argument(
          "sweep: sizes must be ascending, each dividing the next");
  }
  for (double p : cfg.ps)
    if (!(p >= 1.0)) throw std::invalid_argument("sweep: need p >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("sweep: need workers >= 1");
}

std::vector<double> uniform_times(double T, int N) {
  std::vector<double> t(N + 1);
  for (int i = 0; i <= N; ++i) t[i] = (static_cast<double>(i) * T) / N;
  return t;
}

// One seed's paths at every requested grid size, driven by shared randomness.
std::vector<std::shared_ptr<const RegulatedPath>> build_family(
    const SweepConfig& cfg, std::uint64_t seed) {
  GeneratorConfig gc = cfg.base;
  gc.seed = seed;
  const int max_n = cfg.sizes.back();
  const int min_n = cfg.sizes.front();

  RegulatedPath fbm_fine;
  if (cfg.model != "cp") {
    gc.N = max_n;
    fbm_fine = gen_fbm(gc);
  }
  // Driftless jump paths are staircases, so the coarse sample extends exactly
  // to finer grids; with drift the jump part is regenerated per size.
  RegulatedPath cp_coarse;
  const bool steps = cfg.base.drift == 0.0;
  if (cfg.model != "fbm" && steps) {
    gc.N = min_n;
    cp_coarse = gen_compound_poisson(gc).path;
  }

  std::vector<std::shared_ptr<const RegulatedPath>> family;
  for (int n : cfg.sizes) {
    RegulatedPath jumps;
    if (cfg.model != "fbm") {
      if (steps) {
        jumps = n == min_n ? cp_coarse
                           : resample_steps(cp_coarse, uniform_times(gc.T, n));
      } else {
        gc.N = n;
        jumps = gen_compound_poisson(gc).path;
      }
    }
    if (cfg.model == "cp") {
      family.push_back(std::make_shared<const RegulatedPath>(std::move(jumps)));
      continue;
    }
    RegulatedPath cont = restrict_grid(fbm_fine, max_n / n);
    family.push_back(std::make_shared<const RegulatedPath>(
        cfg.model == "fbm" ? std::move(cont) : add_paths(cont, jumps)));
  }
  return family;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  const SmoothFunction F = parse_function(cfg.fn);

  const std::size_t per_seed = cfg.sizes.size() * cfg.ps.size();
  std::vector<SweepRow> rows(cfg.seeds.size() * per_seed);

  IntegrateOptions opt;
  opt.record_sewing = false;

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t s = next.fetch_add(1); s < cfg.seeds.size();
         s = next.fetch_add(1)) {
      const std::uint64_t seed = cfg.seeds[s];
      const auto family = build_family(cfg, seed);
      std::size_t r = s * per_seed;
      for (std::size_t ni = 0; ni < cfg.sizes.size(); ++ni)
        for (double p : cfg.ps) {
          const auto t0 = std::chrono::steady_clock::now();
          const ItoReport rep = ito_verify(F, family[ni], p, cfg.tol, opt);
          const std::chrono::duration<double> el =
              std::chrono::steady_clock::now() - t0;
          rows[r++] = SweepRow{cfg.model,
                               seed,
                               cfg.sizes[ni],
                               p,
                               rep.residual,
                               rep.integral.converged,
                               el.count(),
                               rep.lhs};
        }
    }
  };

  const int workers = static_cast<int>(
      std::min<std::size_t>(cfg.workers, cfg.seeds.size()));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

void sweep_to_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "model,seed,N,p,residual,converged,runtime\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), ",%llu,%d,%.17g,%.17g,%s,%.6f\n",
                  static_cast<unsigned long long>(r.seed), r.N, r.p, r.residual,
                  r.converged ? "true" : "false", r.runtime);
    os << r.model << buf;
  }
}

}  // namespace roughjump
