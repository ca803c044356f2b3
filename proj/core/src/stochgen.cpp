#include "roughjump/stochgen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace roughjump {

namespace {

// Stream salts: one fixed stream id per generator so that composite
// generators (mixed, wealth) reproduce their constituents exactly.
constexpr std::uint64_t kFbmStream = 0xf1;
constexpr std::uint64_t kJumpStream = 0xc7;

void validate(const GeneratorConfig& cfg) {
  if (cfg.N < 2) throw std::invalid_argument("generator: need N >= 2");
  if (cfg.d < 1) throw std::invalid_argument("generator: need d >= 1");
  if (!(cfg.T > 0.0)) throw std::invalid_argument("generator: need T > 0");
  if (!(cfg.H > 0.0 && cfg.H < 1.0))
    throw std::invalid_argument("generator: need H in (0,1)");
  if (!(cfg.lambda >= 0.0))
    throw std::invalid_argument("generator: need lambda >= 0");
  if (cfg.jump_law == JumpLaw::finite_set && cfg.jump_values.empty())
    throw std::invalid_argument("generator: empty jump-size support");
  if (cfg.jump_law == JumpLaw::truncated_gaussian &&
      !(cfg.jump_sd > 0.0 && cfg.jump_clip > 0.0))
    throw std::invalid_argument("generator: truncated gaussian needs sd, clip > 0");
}

std::vector<double> grid_times(const GeneratorConfig& cfg) {
  std::vector<double> t(cfg.N + 1);
  // (i*T)/N rather than i*(T/N): scaling by the power-of-two N divides
  // exactly, so coarse dyadic grids are bit-exact subsets of fine ones.
  for (int i = 0; i <= cfg.N; ++i)
    t[i] = (static_cast<double>(i) * cfg.T) / cfg.N;
  return t;
}

// Exact fGn sample of length N via circulant embedding of the autocovariance;
// the real part of the transformed complex Gaussian vector has exactly the
// target law.
std::vector<double> fgn_circulant(const GeneratorConfig& cfg, RngStream& rng,
                                  const std::vector<double>& lambda_fft) {
  const int M = static_cast<int>(lambda_fft.size());
  std::vector<std::complex<double>> a(M);
  for (int k = 0; k < M; ++k) {
    const double u = rng.normal();
    const double v = rng.normal();
    const double s = std::sqrt(lambda_fft[k]);
    a[k] = std::complex<double>(s * u, s * v);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> w;
  fft.fwd(w, a);
  std::vector<double> fgn(cfg.N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));
  for (int j = 0; j < cfg.N; ++j) fgn[j] = w[j].real() * scale;
  return fgn;
}

double jump_size(const GeneratorConfig& cfg, RngStream& rng) {
  if (cfg.jump_law == JumpLaw::finite_set) {
    const std::size_t m = cfg.jump_values.size();
    std::size_t k = static_cast<std::size_t>(rng.uniform() * m);
    if (k >= m) k = m - 1;
    return cfg.jump_values[k];
  }
  const double c = cfg.jump_clip / cfg.jump_sd;
  return cfg.jump_mean + cfg.jump_sd * rng.truncated_normal(-c, c);
}

CompoundPoissonPath gen_cp_with(const GeneratorConfig& cfg, RngStream rng) {
  validate(cfg);
  if (cfg.lambda * cfg.T > cfg.N / 4.0)
    throw std::invalid_argument(
        "compound poisson: expected jump count exceeds grid capacity N/4");

  const std::vector<double> times = grid_times(cfg);
  const double dt = cfg.T / cfg.N;

  CompoundPoissonPath out;
  out.jump_count = rng.poisson(cfg.lambda * cfg.T);
  if (out.jump_count > cfg.N - 1)
    throw std::runtime_error("compound poisson: jump count exceeds grid capacity");

  std::map<int, Vector> merged;
  for (int j = 0; j < out.jump_count; ++j) {
    const double u = rng.uniform() * cfg.T;
    int idx = static_cast<int>(std::lround(u / dt));
    idx = std::clamp(idx, 1, cfg.N - 1);
    out.snap_displacement += std::abs(u - times[idx]);
    Vector size(cfg.d);
    for (int c = 0; c < cfg.d; ++c) size[c] = jump_size(cfg, rng);
    auto [it, fresh] = merged.try_emplace(idx, std::move(size));
    if (!fresh) it->second += size;  // moved-from only when fresh
  }

  std::vector<Vector> left(cfg.N + 1), at(cfg.N + 1), right(cfg.N + 1);
  Vector cum = Vector::Zero(cfg.d);
  auto it = merged.begin();
  for (int i = 0; i <= cfg.N; ++i) {
    const Vector base = Vector::Constant(cfg.d, cfg.drift * times[i]);
    left[i] = base + cum;
    if (it != merged.end() && it->first == i) {
      cum += it->second;
      ++it;
    }
    at[i] = base + cum;
    right[i] = at[i];
  }
  left[0] = at[0];

  double var = std::abs(cfg.drift) * std::sqrt(static_cast<double>(cfg.d)) * cfg.T;
  for (const auto& [idx, size] : merged) var += size.norm();
  out.exact_one_variation = var;
  out.path = RegulatedPath::create(cfg.T, times, std::move(left), std::move(at),
                                   std::move(right));
  return out;
}

}  // namespace

GeneratorConfig generator_config_from_json(const nlohmann::json& j) {
  GeneratorConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("T")) cfg.T = j.at("T").get<double>();
  if (j.contains("N")) cfg.N = j.at("N").get<int>();
  if (j.contains("d")) cfg.d = j.at("d").get<int>();
  if (j.contains("H")) cfg.H = j.at("H").get<double>();
  if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
  if (j.contains("drift")) cfg.drift = j.at("drift").get<double>();
  if (j.contains("jump_law")) {
    const std::string law = j.at("jump_law").get<std::string>();
    if (law == "finite_set")
      cfg.jump_law = JumpLaw::finite_set;
    else if (law == "truncated_gaussian")
      cfg.jump_law = JumpLaw::truncated_gaussian;
    else
      throw std::invalid_argument("generator config: unknown jump_law " + law);
  }
  if (j.contains("jump_values"))
    cfg.jump_values = j.at("jump_values").get<std::vector<double>>();
  if (j.contains("jump_mean")) cfg.jump_mean = j.at("jump_mean").get<double>();
  if (j.contains("jump_sd")) cfg.jump_sd = j.at("jump_sd").get<double>();
  if (j.contains("jump_clip")) cfg.jump_clip = j.at("jump_clip").get<double>();
  validate(cfg);
  return cfg;
}

nlohmann::json generator_config_to_json(const GeneratorConfig& cfg) {
  return {{"seed", cfg.seed},
          {"T", cfg.T},
          {"N", cfg.N},
          {"d", cfg.d},
          {"H", cfg.H},
          {"lambda", cfg.lambda},
          {"drift", cfg.drift},
          {"jump_law", cfg.jump_law == JumpLaw::finite_set
                           ? "finite_set"
                           : "truncated_gaussian"},
          {"jump_values", cfg.jump_values},
          {"jump_mean", cfg.jump_mean},
          {"jump_sd", cfg.jump_sd},
          {"jump_clip", cfg.jump_clip}};
}

RegulatedPath gen_fbm(const GeneratorConfig& cfg, FbmMethod method) {
  validate(cfg);
  if (method == FbmMethod::automatic)
    method = cfg.N <= 1024 ? FbmMethod::cholesky : FbmMethod::circulant;
  if (method == FbmMethod::cholesky && cfg.N > (1 << 14))
    throw std::invalid_argument("fbm: Cholesky method capped at N = 2^14");

  const std::vector<double> times = grid_times(cfg);
  const double h2 = 2.0 * cfg.H;
  RngStream rng(cfg.seed, kFbmStream);

  std::vector<Vector> values(cfg.N + 1, Vector::Zero(cfg.d));

  if (method == FbmMethod::cholesky) {
    Eigen::MatrixXd C(cfg.N, cfg.N);
    for (int i = 0; i < cfg.N; ++i)
      for (int j = 0; j <= i; ++j) {
        const double s = times[i + 1], t = times[j + 1];
        const double v = 0.5 * (std::pow(s, h2) + std::pow(t, h2) -
                                std::pow(std::abs(s - t), h2));
        C(i, j) = v;
        C(j, i) = v;
      }
    const Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("fbm: covariance factorization failed");
    for (int c = 0; c < cfg.d; ++c) {
      Eigen::VectorXd z(cfg.N);
      for (int i = 0; i < cfg.N; ++i) z[i] = rng.normal();
      const Eigen::VectorXd b = llt.matrixL() * z;
      for (int i = 1; i <= cfg.N; ++i) values[i][c] = b[i - 1];
    }
  } else {
    // Autocovariance of the increments at lag k, embedded in a circulant of
    // size 2N whose eigenvalues come from one FFT of the first row.
    const double dt = cfg.T / cfg.N;
    const double scale = std::pow(dt, h2);
    auto gamma = [&](int k) {
      if (k == 0) return scale;
      return 0.5 * scale *
             (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) +
              std::pow(k - 1.0, h2));
    };
    const int M = 2 * cfg.N;
    std::vector<double> row(M);
    row[0] = gamma(0);
    row[cfg.N] = gamma(cfg.N);
    for (int k = 1; k < cfg.N; ++k) {
      row[k] = gamma(k);
      row[M - k] = row[k];
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, row);
    std::vector<double> lambda(M);
    double lmax = 0.0;
    for (int k = 0; k < M; ++k) lmax = std::max(lmax, spec[k].real());
    for (int k = 0; k < M; ++k) {
      const double l = spec[k].real();
      if (l < -1e-8 * lmax)
        throw std::runtime_error("fbm: circulant embedding not nonnegative");
      lambda[k] = std::max(l, 0.0);
    }
    for (int c = 0; c < cfg.d; ++c) {
      const std::vector<double> fgn = fgn_circulant(cfg, rng, lambda);
      double cum = 0.0;
      for (int i = 1; i <= cfg.N; ++i) {
        cum += fgn[i - 1];
        values[i][c] = cum;
      }
    }
  }
  return RegulatedPath::from_values(cfg.T, times, std::move(values));
}

CompoundPoissonPath gen_compound_poisson(const GeneratorConfig& cfg) {
  return gen_cp_with(cfg, RngStream(cfg.seed, kJumpStream));
}

MixedPath gen_mixed(const GeneratorConfig& cfg, FbmMethod method) {
  MixedPath out;
  out.continuous_part = gen_fbm(cfg, method);
  out.jump_part = gen_compound_poisson(cfg);
  out.path = add_paths(out.continuous_part, out.jump_part.path);
  return out;
}

WealthPath gen_wealth(const GeneratorConfig& cfg,
                      const std::vector<double>& strategy, double w0,
                      int max_retries) {
  validate(cfg);
  if (cfg.d != 1)
    throw std::invalid_argument("wealth: return paths must be scalar");
  if (static_cast<int>(strategy.size()) != cfg.N)
    throw std::invalid_argument("wealth: need one strategy value per grid cell");
  if (!(w0 > 0.0)) throw std::invalid_argument("wealth: need w0 > 0");

  const RngStream base(cfg.seed, kJumpStream);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    CompoundPoissonPath R =
        gen_cp_with(cfg, attempt == 0 ? base : base.split(attempt));
    const RegulatedPath& r = R.path;
    bool ok = true;
    for (int i = 1; i <= cfg.N && ok; ++i)
      ok = 1.0 + strategy[i - 1] * r.jump_minus(i)[0] > 0.0;
    if (!ok) continue;

    std::vector<Vector> left(cfg.N + 1), at(cfg.N + 1);
    double w = w0;
    at[0] = Vector::Constant(1, w);
    left[0] = at[0];
    for (int i = 1; i <= cfg.N; ++i) {
      const double open_incr = r.left(i)[0] - r.right(i - 1)[0];
      const double wl = w * std::exp(strategy[i - 1] * open_incr);
      left[i] = Vector::Constant(1, wl);
      w = wl * (1.0 + strategy[i - 1] * r.jump_minus(i)[0]);
      at[i] = Vector::Constant(1, w);
    }
    WealthPath out;
    out.retries = attempt;
    out.wealth = RegulatedPath::create(cfg.T, r.times(), std::move(left), at, at);
    out.returns = r;
    return out;
  }
  throw std::runtime_error("wealth: positivity violated after max retries");
}

}  // namespace roughjump
