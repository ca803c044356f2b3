#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughjump/path.hpp"
#include "roughjump/rng.hpp"

namespace roughjump {

enum class JumpLaw { finite_set, truncated_gaussian };
enum class FbmMethod { automatic, cholesky, circulant };

// Everything a generator run depends on; identical configs (same seed
// included) produce bit-identical paths.
struct GeneratorConfig {
  std::uint64_t seed = 0;
  double T = 1.0;
  int N = 256;  // power of two recommended for dyadic refinement studies
  int d = 1;
  double H = 0.5;       // Hurst index of the continuous part
  double lambda = 0.0;  // jump rate per unit time
  double drift = 0.0;   // linear drift of the jump part, per component
  JumpLaw jump_law = JumpLaw::finite_set;
  std::vector<double> jump_values{-0.1, 0.1};  // finite-set support
  double jump_mean = 0.0;                      // truncated-gaussian location
  double jump_sd = 0.1;                        // truncated-gaussian scale
  double jump_clip = 0.5;  // truncated-gaussian half-width around the mean
};

GeneratorConfig generator_config_from_json(const nlohmann::json& j);
nlohmann::json generator_config_to_json(const GeneratorConfig& cfg);

// Fractional Brownian motion on the uniform grid with the exact joint
// Gaussian law; components independent.  Cholesky factorizes the N x N
// covariance (exact, O(N^3), capped at N = 2^14); circulant embedding is
// O(N log N) and exact whenever the embedding stays nonnegative definite.
// automatic picks Cholesky up to N = 2^10.
RegulatedPath gen_fbm(const GeneratorConfig& cfg,
                      FbmMethod method = FbmMethod::automatic);

struct CompoundPoissonPath {
  RegulatedPath path;
  int jump_count = 0;               // sampled Poisson event count
  double exact_one_variation = 0.0; // |drift|*sqrt(d)*T + sum of jump norms
  double snap_displacement = 0.0;   // total |event time - grid time| moved
};

// Cadlag piecewise-constant jump path plus linear drift.  Event times are
// Poisson, snapped to the nearest interior grid time (collisions merge);
// sizes are i.i.d. per component from the configured law.
CompoundPoissonPath gen_compound_poisson(const GeneratorConfig& cfg);

struct MixedPath {
  RegulatedPath path;
  RegulatedPath continuous_part;
  CompoundPoissonPath jump_part;
};

// Superposition of gen_fbm and gen_compound_poisson on the same grid; the
// jump structure is exactly the jump part's.
MixedPath gen_mixed(const GeneratorConfig& cfg,
                    FbmMethod method = FbmMethod::automatic);

struct WealthPath {
  RegulatedPath wealth;   // strictly positive scalar cadlag path
  RegulatedPath returns;  // the driving return path R
  int retries = 0;        // return paths rejected for 1 + pi*jump <= 0
};

// Wealth built multiplicatively from a compound-Poisson return path: across
// a cell the continuous part compounds exponentially, and each jump scales
// wealth by 1 + strategy * jump.  strategy[i] applies on cell i and to the
// jump closing it.  Returns paths violating positivity are redrawn.
WealthPath gen_wealth(const GeneratorConfig& cfg,
                      const std::vector<double>& strategy, double w0 = 1.0,
                      int max_retries = 32);

}  // namespace roughjump
