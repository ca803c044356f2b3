#include "support/fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace roughjump::fixtures {

namespace {

Vector scalar(double v) {
  Vector x(1);
  x[0] = v;
  return x;
}

}  // namespace

RegulatedPath quad() {
  std::vector<Vector> at = {scalar(0.0), scalar(1.0), scalar(3.0)};
  std::vector<Vector> left = {scalar(0.0), scalar(0.4), scalar(3.0)};
  return RegulatedPath::create(1.0, {0.0, 0.5, 1.0}, left, at, at);
}

RegulatedPath updown() {
  return RegulatedPath::from_values(1.0, {0.0, 0.5, 1.0},
                                    {scalar(0.0), scalar(1.0), scalar(0.0)});
}

RegulatedPath monotone() {
  return RegulatedPath::from_values(1.0, {0.0, 0.5, 1.0},
                                    {scalar(0.0), scalar(1.0), scalar(3.0)});
}

RegulatedPath step_cadlag() {
  std::vector<Vector> at = {scalar(0.0), scalar(1.0), scalar(1.0)};
  std::vector<Vector> left = {scalar(0.0), scalar(0.0), scalar(1.0)};
  return RegulatedPath::create(1.0, {0.0, 0.5, 1.0}, left, at, at);
}

RegulatedPath twosided() {
  // left jump at t = 0.25 (0.2 -> 0.5), right jump at t = 0.75 (0.8 -> 1.1).
  std::vector<double> times = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<Vector> at = {scalar(0.0), scalar(0.5), scalar(0.6),
                            scalar(0.8), scalar(1.3)};
  std::vector<Vector> left = {scalar(0.0), scalar(0.2), scalar(0.6),
                              scalar(0.8), scalar(1.3)};
  std::vector<Vector> right = {scalar(0.0), scalar(0.5), scalar(0.6),
                               scalar(1.1), scalar(1.3)};
  return RegulatedPath::create(1.0, times, left, at, right);
}

RegulatedPath random_continuous(RngStream& rng, int N, int d) {
  std::vector<double> times(N + 1);
  std::vector<Vector> at(N + 1, Vector::Zero(d));
  const double step = 1.0 / std::sqrt(double(N));
  for (int i = 0; i <= N; ++i) {
    times[i] = double(i) / N;
    if (i > 0) {
      at[i] = at[i - 1];
      for (int c = 0; c < d; ++c) at[i][c] += step * rng.normal();
    }
  }
  return RegulatedPath::from_values(1.0, std::move(times), std::move(at));
}

RegulatedPath random_jumpy(RngStream& rng, int N, int d, double jump_prob,
                           double jump_scale) {
  RegulatedPath base = random_continuous(rng, N, d);
  std::vector<double> times(base.times());
  std::vector<Vector> left, at, right;
  for (int i = 0; i <= N; ++i) {
    left.push_back(base.at(i));
    at.push_back(base.at(i));
    right.push_back(base.at(i));
  }
  for (int i = 1; i <= N; ++i) {
    if (rng.uniform() < jump_prob)
      for (int c = 0; c < d; ++c)
        left[i][c] -= jump_scale * (rng.uniform() - 0.5);
    if (i < N && rng.uniform() < jump_prob)
      for (int c = 0; c < d; ++c)
        right[i][c] += jump_scale * (rng.uniform() - 0.5);
  }
  return RegulatedPath::create(1.0, std::move(times), std::move(left),
                               std::move(at), std::move(right));
}

RegulatedPath random_cadlag(RngStream& rng, int N, int d, double jump_prob,
                            double jump_scale) {
  RegulatedPath base = random_jumpy(rng, N, d, jump_prob, jump_scale);
  std::vector<Vector> left, at;
  for (int i = 0; i <= N; ++i) {
    left.push_back(base.left(i));
    at.push_back(base.at(i));
  }
  std::vector<Vector> right = at;
  return RegulatedPath::create(1.0, base.times(), std::move(left),
                               std::move(at), std::move(right));
}

SmoothFunction random_polynomial(RngStream& rng, int d, int deg) {
  const int terms = 2 + int(rng.next_u32() % 3);
  std::vector<Monomial> mono;
  for (int t = 0; t < terms; ++t) {
    Monomial m;
    m.exponents.assign(d, 0);
    int budget = deg;
    for (int c = 0; c < d && budget > 0; ++c) {
      const int e = int(rng.next_u32() % (budget + 1));
      m.exponents[c] = e;
      budget -= e;
    }
    m.coeff = 2.0 * rng.uniform() - 1.0;
    mono.push_back(std::move(m));
  }
  // Constant offset keeps the zero polynomial out of the pool.
  mono.push_back({std::vector<int>(d, 0), 1.0 + rng.uniform()});
  return make_polynomial(std::move(mono), d);
}

std::string fixture_dir() {
  const char* env = std::getenv("ROUGHJUMP_FIXTURES");
  if (!env || !*env)
    throw std::runtime_error("ROUGHJUMP_FIXTURES is not set");
  return std::string(env);
}

std::shared_ptr<const RegulatedPath> shared(RegulatedPath X) {
  return std::make_shared<const RegulatedPath>(std::move(X));
}

}  // namespace roughjump::fixtures
