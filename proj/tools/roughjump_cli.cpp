// Command-line front end: path analysis, lift diagnostics, integration, and
// change-of-variable verification, with seeded generators and batch sweeps.
// Every run is a pure function of (flags, input files); reports embed the
// effective config so results are reproducible from the report alone.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <json.hpp>

#include "roughjump/ito.hpp"
#include "roughjump/lift.hpp"
#include "roughjump/numeric.hpp"
#include "roughjump/path.hpp"
#include "roughjump/rng.hpp"
#include "roughjump/rrs.hpp"
#include "roughjump/smoothfn.hpp"
#include "roughjump/stochgen.hpp"
#include "roughjump/sweep.hpp"
#include "roughjump/version.hpp"

namespace {

using nlohmann::json;
using namespace roughjump;

struct Common {
  std::string out;
  bool print_config = false;
};

json wrap(const std::string& command, const json& config, json report) {
  return {{"schema", 1},
          {"version", std::string(kVersion)},
          {"command", command},
          {"config", config},
          {"report", std::move(report)}};
}

int emit_text(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text << '\n';
    return 0;
  }
  std::ofstream f(out);
  if (!f) {
    std::cerr << "error: cannot open output file " << out << '\n';
    return 1;
  }
  f << text << '\n';
  return f ? 0 : 1;
}

int emit(const json& j, const std::string& out) {
  return emit_text(j.dump(2), out);
}

// Honors --print-config: echo the effective config and stop.
std::optional<int> maybe_print_config(const Common& c, const json& config) {
  if (!c.print_config) return std::nullopt;
  return emit(config, c.out);
}

std::shared_ptr<const RegulatedPath> load_path(const std::string& file) {
  return std::make_shared<const RegulatedPath>(load_path_file(file));
}

GeneratorConfig load_generator_config(const std::string& cfg_file) {
  if (cfg_file.empty()) return GeneratorConfig{};
  std::ifstream f(cfg_file);
  if (!f) throw std::runtime_error("cannot open config file " + cfg_file);
  json j;
  f >> j;
  return generator_config_from_json(j);
}

// ---------------------------------------------------------------------------

int cmd_pvar(const Common& c, const std::string& path_file, double p) {
  const json config = {{"path", path_file}, {"p", p}};
  if (auto r = maybe_print_config(c, config)) return *r;
  const auto X = load_path(path_file);
  const PVarResult res = X->p_variation_witness(p, 0, X->last_index());
  json witness = json::array();
  for (const PathSample& s : res.chain) {
    const char* side = s.side == Side::left   ? "left"
                       : s.side == Side::right ? "right"
                                                : "at";
    witness.push_back({{"index", s.index}, {"side", side}, {"t", s.time}});
  }
  return emit(wrap("pvar", config,
                   {{"p", p}, {"value", res.value}, {"witness", witness}}),
              c.out);
}

int cmd_lift_check(const Common& c, const std::string& path_file, double p,
                   int samples, std::uint64_t seed) {
  const json config = {
      {"path", path_file}, {"p", p}, {"samples", samples}, {"seed", seed}};
  if (auto r = maybe_print_config(c, config)) return *r;
  const auto X = load_path(path_file);
  const ReducedRoughPath lift(X, p);
  const int N = X->last_index();

  RngStream rng(seed, 0x11f7);
  auto pick = [&](int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng.next_u64() % (hi - lo + 1));
  };

  double max_defect = 0.0;
  bool chen_pass = true;
  for (int q = 0; q < samples; ++q) {
    const int i = pick(0, N);
    const int u = pick(i, N);
    const int j = pick(u, N);
    const ChenReport rep = chen_check(lift, i, u, j);
    chen_pass = chen_pass && rep.pass;
    for (double d : rep.defects) max_defect = std::max(max_defect, d);
  }

  // Level bound ||X^k(i,j)|| <= c(i,j)^{k/p} / k! on all pairs (small grids)
  // or near-diagonal samples (the control value is a quadratic-cost DP).
  const ControlFunction ctrl(X, p);
  bool bound_pass = true;
  double worst_margin = 0.0;  // most negative slack observed
  auto check_pair = [&](int i, int j) {
    const double cv = ctrl(i, j);
    for (int k = 1; k <= lift.level_count(); ++k) {
      const double lhs = lift.level(k, i, j).norm();
      const double rhs =
          std::pow(cv, static_cast<double>(k) / p) / factorial(k);
      const double slack = rhs - lhs;
      worst_margin = std::min(worst_margin, slack);
      if (slack < -1e-12 * (1.0 + rhs)) bound_pass = false;
    }
  };
  int bound_pairs = 0;
  if (N <= 64) {
    for (int i = 0; i <= N; ++i)
      for (int j = i + 1; j <= N; ++j, ++bound_pairs) check_pair(i, j);
  } else {
    for (int q = 0; q < samples; ++q, ++bound_pairs) {
      const int i = pick(0, N - 1);
      const int j = std::min(N, i + 1 + pick(0, 63));
      check_pair(i, j);
    }
  }

  return emit(wrap("lift-check", config,
                   {{"chen_samples", samples},
                    {"chen_max_defect", max_defect},
                    {"chen_pass", chen_pass},
                    {"bound_pairs", bound_pairs},
                    {"bound_worst_margin", worst_margin},
                    {"bound_pass", bound_pass},
                    {"pass", chen_pass && bound_pass}}),
              c.out);
}

int cmd_integrate(const Common& c, const std::string& path_file,
                  const std::string& fn, double p, double tol) {
  const json config = {
      {"path", path_file}, {"fn", fn}, {"p", p}, {"tol", tol}};
  if (auto r = maybe_print_config(c, config)) return *r;
  const auto X = load_path(path_file);
  const SmoothFunction F = parse_function(fn);
  const ReducedRoughPath lift(X, p);
  const ControlledPath Y = controlled_from_function(F, lift);
  IntegrateOptions opt;
  opt.tol = tol;
  const IntegrationReport rep = rrs_integrate(Y, lift, opt);
  return emit(wrap("integrate", config, integration_report_to_json(rep)),
              c.out);
}

int cmd_ito(const Common& c, const std::string& path_file,
            const std::string& fn, double p, double tol) {
  const json config = {
      {"path", path_file}, {"fn", fn}, {"p", p}, {"tol", tol}};
  if (auto r = maybe_print_config(c, config)) return *r;
  const auto X = load_path(path_file);
  const SmoothFunction F = parse_function(fn);
  const ItoReport rep = ito_verify(F, X, p, tol);
  return emit(wrap("ito", config, ito_report_to_json(rep)), c.out);
}

int cmd_logwealth(const Common& c, const std::string& path_file, double p,
                  double tol) {
  const json config = {{"path", path_file}, {"p", p}, {"tol", tol}};
  if (auto r = maybe_print_config(c, config)) return *r;
  const auto W = load_path(path_file);
  const WealthReport rep = log_wealth(W, p, tol);
  return emit(wrap("logwealth", config, wealth_report_to_json(rep)), c.out);
}

int cmd_simulate(const Common& c, const std::string& model,
                 const GeneratorConfig& cfg, const std::string& method_name) {
  json config = generator_config_to_json(cfg);
  config["model"] = model;
  config["method"] = method_name;
  if (auto r = maybe_print_config(c, config)) return *r;

  FbmMethod method = FbmMethod::automatic;
  if (method_name == "cholesky") method = FbmMethod::cholesky;
  else if (method_name == "circulant") method = FbmMethod::circulant;
  else if (method_name != "auto")
    throw std::invalid_argument("unknown fbm method " + method_name);

  json report;
  if (model == "fbm") {
    report = path_to_json(gen_fbm(cfg, method));
  } else if (model == "cp") {
    const CompoundPoissonPath cp = gen_compound_poisson(cfg);
    report = path_to_json(cp.path);
    report["diagnostics"] = {{"jump_count", cp.jump_count},
                             {"exact_one_variation", cp.exact_one_variation},
                             {"snap_displacement", cp.snap_displacement}};
  } else if (model == "mixed") {
    report = path_to_json(gen_mixed(cfg, method).path);
  } else {
    throw std::invalid_argument("unknown model " + model);
  }
  return emit(wrap("simulate", config, std::move(report)), c.out);
}

int cmd_sweep(const Common& c, SweepConfig sw, const std::uint64_t seed0,
              int num_seeds, const std::string& format) {
  sw.seeds.clear();
  for (int s = 0; s < num_seeds; ++s) sw.seeds.push_back(seed0 + s);

  json config = {{"model", sw.model},
                 {"base", generator_config_to_json(sw.base)},
                 {"seed", seed0},
                 {"num_seeds", num_seeds},
                 {"sizes", sw.sizes},
                 {"ps", sw.ps},
                 {"fn", sw.fn},
                 {"tol", sw.tol},
                 {"workers", sw.workers},
                 {"format", format}};
  if (auto r = maybe_print_config(c, config)) return *r;

  const std::vector<SweepRow> rows = run_sweep(sw);
  if (format == "csv") {
    std::ostringstream os;
    sweep_to_csv(rows, os);
    std::string text = os.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    return emit_text(text, c.out);
  }
  json jr = json::array();
  for (const SweepRow& r : rows)
    jr.push_back({{"model", r.model},
                  {"seed", r.seed},
                  {"N", r.N},
                  {"p", r.p},
                  {"residual", r.residual},
                  {"converged", r.converged},
                  {"runtime", r.runtime}});
  return emit(wrap("sweep", config, {{"rows", std::move(jr)}}), c.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathwise rough integration and change-of-variable checks for "
               "regulated paths"};
  app.require_subcommand(1);

  Common common;
  std::string path_file, fn = "exp", model = "mixed", method = "auto";
  std::string format = "json", cfg_file;
  double p = 2.5, tol = 1e-9;
  std::uint64_t seed = 0;
  int workers = 1, samples = 100, num_seeds = 1;
  std::vector<int> sizes{256};
  std::vector<double> ps{2.5};
  GeneratorConfig gencfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "Write the report to a file");
    sub->add_flag("--print-config", common.print_config,
                  "Echo the effective config and exit");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Generator seed")
        ->envname("ROUGHJUMP_SEED");
  };

  CLI::App* pvar = app.add_subcommand("pvar", "p-variation of a path file");
  pvar->add_option("--path", path_file, "Path JSON file")->required();
  pvar->add_option("--p", p, "Variation exponent")->check(CLI::PositiveNumber);
  add_common(pvar);

  CLI::App* lift = app.add_subcommand(
      "lift-check", "Reduced Chen relation and level-bound diagnostics");
  lift->add_option("--path", path_file, "Path JSON file")->required();
  lift->add_option("--p", p, "Regularity exponent")
      ->check(CLI::Range(1.0, 6.0));
  lift->add_option("--samples", samples, "Random triples to test");
  add_seed(lift);
  add_common(lift);

  CLI::App* integ = app.add_subcommand(
      "integrate", "Compensated-sum integral of DF(X) against X");
  integ->add_option("--path", path_file, "Path JSON file")->required();
  integ->add_option("--fn", fn, "Function spec: exp | log:<m>,<M> | poly:...");
  integ->add_option("--p", p, "Regularity exponent")
      ->check(CLI::Range(1.0, 6.0));
  integ->add_option("--tol", tol, "Convergence tolerance")
      ->check(CLI::PositiveNumber);
  add_common(integ);

  CLI::App* ito = app.add_subcommand(
      "ito", "Verify the change-of-variable identity on a path file");
  ito->add_option("--path", path_file, "Path JSON file")->required();
  ito->add_option("--fn", fn, "Function spec");
  ito->add_option("--p", p, "Regularity exponent")->check(CLI::Range(1.0, 6.0));
  ito->add_option("--tol", tol, "Residual tolerance")
      ->check(CLI::PositiveNumber);
  add_common(ito);

  CLI::App* lw = app.add_subcommand(
      "logwealth", "Log-wealth decomposition of a positive cadlag path");
  lw->add_option("--path", path_file, "Wealth path JSON file")->required();
  lw->add_option("--p", p, "Regularity exponent")->check(CLI::Range(1.0, 6.0));
  lw->add_option("--tol", tol, "Residual tolerance")
      ->check(CLI::PositiveNumber);
  add_common(lw);

  CLI::App* sim = app.add_subcommand("simulate", "Generate a sample path");
  sim->add_option("--model", model, "fbm | cp | mixed");
  sim->add_option("--cfg", cfg_file, "Generator config JSON file");
  sim->add_option("--method", method, "fbm method: auto | cholesky | circulant");
  add_seed(sim);
  sim->add_option("--N", gencfg.N, "Grid size");
  sim->add_option("--T", gencfg.T, "Horizon");
  sim->add_option("--d", gencfg.d, "Dimension");
  sim->add_option("--H", gencfg.H, "Hurst index");
  sim->add_option("--lambda", gencfg.lambda, "Jump rate");
  sim->add_option("--drift", gencfg.drift, "Jump-part drift");
  add_common(sim);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Batch residuals over seeds, grid sizes, and p values");
  sweep->add_option("--model", model, "fbm | cp | mixed");
  sweep->add_option("--cfg", cfg_file, "Generator config JSON file");
  add_seed(sweep);
  sweep->add_option("--num-seeds", num_seeds, "Consecutive seeds starting at --seed")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--sizes", sizes, "Grid sizes (ascending, each dividing the next)")
      ->delimiter(',');
  sweep->add_option("--ps", ps, "Regularity exponents")->delimiter(',');
  sweep->add_option("--fn", fn, "Function spec");
  sweep->add_option("--tol", tol, "Convergence tolerance")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--workers", workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--format", format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  add_common(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (pvar->parsed()) return cmd_pvar(common, path_file, p);
    if (lift->parsed())
      return cmd_lift_check(common, path_file, p, samples, seed);
    if (integ->parsed()) return cmd_integrate(common, path_file, fn, p, tol);
    if (ito->parsed()) return cmd_ito(common, path_file, fn, p, tol);
    if (lw->parsed()) return cmd_logwealth(common, path_file, p, tol);
    if (sim->parsed() || sweep->parsed()) {
      GeneratorConfig cfg = load_generator_config(cfg_file);
      // Flags override file values only when given explicitly.
      if (sim->parsed()) {
        if (sim->count("--T")) cfg.T = gencfg.T;
        if (sim->count("--H")) cfg.H = gencfg.H;
        if (sim->count("--lambda")) cfg.lambda = gencfg.lambda;
        if (sim->count("--drift")) cfg.drift = gencfg.drift;
        if (sim->count("--N")) cfg.N = gencfg.N;
        if (sim->count("--d")) cfg.d = gencfg.d;
        if (sim->count("--seed") || cfg_file.empty()) cfg.seed = seed;
        return cmd_simulate(common, model, cfg, method);
      }
      SweepConfig sw;
      sw.model = model;
      sw.base = cfg;
      sw.sizes = sizes;
      sw.ps = ps;
      sw.fn = fn;
      sw.tol = tol;
      sw.workers = workers;
      return cmd_sweep(common, std::move(sw), seed, num_seeds, format);
    }
  } catch (const PathFormatError& e) {
    std::cerr << "path error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
