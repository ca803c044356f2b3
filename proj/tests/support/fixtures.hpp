#pragma once

// Small hand-checkable paths plus random-instance builders shared by the unit
// and acceptance suites.

#include <memory>
#include <string>

#include "roughjump/path.hpp"
#include "roughjump/rng.hpp"
#include "roughjump/smoothfn.hpp"

namespace roughjump::fixtures {

// Scalar, values 0 -> 1 -> 3 on {0, 1/2, 1}, with a left jump at the middle
// point (left value 0.4).  Under F(x) = x^2 the compensated sum telescopes to
// 9 on every partition and the jump correction vanishes.
RegulatedPath quad();

// Scalar continuous 0 -> 1 -> 0; p-variation is 2^{1/p}.
RegulatedPath updown();

// Scalar continuous 0 -> 1 -> 3; 1-variation 3.
RegulatedPath monotone();

// Scalar cadlag step 0 -> 1 jumping at t = 1/2.
RegulatedPath step_cadlag();

// Scalar path with both a left and a right jump at interior points.
RegulatedPath twosided();

// Piecewise-linear continuous path with N cells, values from rng, scaled so
// consecutive increments are O(1/sqrt(N)).
RegulatedPath random_continuous(RngStream& rng, int N, int d);

// Random regulated path: continuous backbone plus left/right jumps inserted
// with the given per-point probability.  Always valid (endpoints one-sided
// values collapsed).
RegulatedPath random_jumpy(RngStream& rng, int N, int d, double jump_prob,
                           double jump_scale = 0.3);

// Same construction with left jumps only.
RegulatedPath random_cadlag(RngStream& rng, int N, int d, double jump_prob,
                            double jump_scale = 0.3);

// Random polynomial in d variables with total degree <= deg and a few terms.
SmoothFunction random_polynomial(RngStream& rng, int d, int deg);

// Directory holding the JSON fixture files; reads ROUGHJUMP_FIXTURES.
std::string fixture_dir();

std::shared_ptr<const RegulatedPath> shared(RegulatedPath X);

}  // namespace roughjump::fixtures
