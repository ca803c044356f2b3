#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "roughjump/path.hpp"
#include "roughjump/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace roughjump;
namespace fs = std::filesystem;

namespace {

Vector vec1(double x) {
  Vector v(1);
  v[0] = x;
  return v;
}

}  // namespace

TEST_CASE("construction rejects malformed presentations") {
  auto mk = [](std::vector<double> t, std::vector<double> v) {
    std::vector<Vector> at;
    for (double x : v) at.push_back(vec1(x));
    return RegulatedPath::from_values(1.0, std::move(t), std::move(at));
  };
  CHECK_THROWS_AS(mk({0.0}, {1.0}), std::invalid_argument);  // too short
  CHECK_THROWS_AS(mk({0.1, 1.0}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(mk({0.0, 0.9}, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(mk({0.0, 0.5, 0.5, 1.0}, {0.0, 1.0, 2.0, 3.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(mk({0.0, 1.0}, {0.0, std::nan("")}), std::invalid_argument);

  // Outward-pointing one-sided values at the endpoints are not representable.
  std::vector<Vector> at = {vec1(0.0), vec1(1.0)};
  std::vector<Vector> badleft = {vec1(-0.5), vec1(1.0)};
  CHECK_THROWS_AS(
      RegulatedPath::create(1.0, {0.0, 1.0}, badleft, at, at),
      std::invalid_argument);
  std::vector<Vector> badright = {vec1(0.0), vec1(1.5)};
  CHECK_THROWS_AS(
      RegulatedPath::create(1.0, {0.0, 1.0}, at, at, badright),
      std::invalid_argument);
}

TEST_CASE("increments, jumps and classification on the two-sided fixture") {
  const RegulatedPath X = fixtures::twosided();
  CHECK(X.increment(0, 4)[0] == doctest::Approx(1.3));
  CHECK(X.increment_open(1, 3)[0] == doctest::Approx(0.8 - 0.5));
  CHECK(X.jump_minus(1)[0] == doctest::Approx(0.3));
  CHECK(X.jump_plus(3)[0] == doctest::Approx(0.3));
  CHECK(X.has_jump(1));
  CHECK(X.has_jump(3));
  CHECK_FALSE(X.has_jump(2));
  CHECK_FALSE(X.is_continuous());
  CHECK_FALSE(X.is_cadlag());
  const auto js = X.jumps();
  REQUIRE(js.size() == 2);
  CHECK(js[0].index == 1);
  CHECK(js[1].index == 3);

  CHECK(fixtures::step_cadlag().is_cadlag());
  CHECK_FALSE(fixtures::step_cadlag().is_continuous());
  CHECK(fixtures::updown().is_continuous());
}

TEST_CASE("oscillation equals the pairwise interior oracle") {
  RngStream rng(31, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const RegulatedPath X = fixtures::random_jumpy(rng, 8, 2, 0.4);
    const std::pair<int, int> windows[] = {{0, 8}, {1, 7}, {2, 5}, {3, 4}};
    for (auto [i, j] : windows) {
      const double got = X.oscillation(i, j);
      const double want = oracle::oscillation_naive(X, i, j);
      CHECK(got == doctest::Approx(want).epsilon(1e-14));
    }
  }
  // No interior points: oscillation is zero by convention.
  CHECK(fixtures::updown().oscillation(0, 1) == 0.0);
}

TEST_CASE("p-variation of hand-checkable fixtures") {
  CHECK(fixtures::monotone().p_variation(1.0) == doctest::Approx(3.0));
  CHECK(fixtures::updown().p_variation(1.0) == doctest::Approx(2.0));
  CHECK(fixtures::updown().p_variation(2.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // Single cadlag step: ||jump|| for every p.
  for (double p : {1.0, 1.5, 3.0})
    CHECK(fixtures::step_cadlag().p_variation(p) == doctest::Approx(1.0));
}

TEST_CASE("p-variation DP equals the suffix-recursion oracle") {
  RngStream rng(32, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int N = 3 + int(rng.next_u32() % 8);
    const int d = 1 + int(rng.next_u32() % 2);
    const RegulatedPath X = fixtures::random_jumpy(rng, N, d, 0.35);
    for (double p : {1.0, 1.7, 2.3, 3.1}) {
      const double got = X.p_variation_pow(p, 0, N);
      const double want = oracle::p_variation_pow_suffix(X, p);
      CHECK(std::abs(got - want) <= 1e-12 * (1.0 + want));
    }
  }
}

TEST_CASE("suffix-recursion oracle agrees with exhaustive enumeration") {
  // Validates the oracle itself on tiny instances where 2^m enumeration of
  // sample chains is affordable.
  RngStream rng(33, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const RegulatedPath X = fixtures::random_jumpy(rng, 4, 1, 0.5);
    for (double p : {1.0, 2.0, 2.6}) {
      const double a = oracle::p_variation_pow_suffix(X, p);
      const double b = oracle::p_variation_pow_exhaustive(X, p);
      CHECK(a == doctest::Approx(b).epsilon(1e-13));
    }
  }
}

TEST_CASE("p-variation witness chain reproduces the value") {
  RngStream rng(34, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const RegulatedPath X = fixtures::random_jumpy(rng, 10, 1, 0.3);
    for (double p : {1.0, 2.3}) {
      const PVarResult r = X.p_variation_witness(p, 0, X.last_index());
      REQUIRE(r.chain.size() >= 2);
      auto sample = [&](const PathSample& s) -> Vector {
        switch (s.side) {
          case Side::left: return X.left(s.index);
          case Side::at: return X.at(s.index);
          default: return X.right(s.index);
        }
      };
      double sum = 0.0;
      for (std::size_t q = 0; q + 1 < r.chain.size(); ++q) {
        CHECK(r.chain[q].index <= r.chain[q + 1].index);
        sum += std::pow((sample(r.chain[q + 1]) - sample(r.chain[q])).norm(), p);
      }
      CHECK(std::pow(sum, 1.0 / p) == doctest::Approx(r.value).epsilon(1e-12));
      CHECK(r.value == doctest::Approx(X.p_variation(p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("control function: zero on diagonal, dominates increments, superadditive") {
  RngStream rng(35, 0);
  auto X = fixtures::shared(fixtures::random_jumpy(rng, 16, 2, 0.3));
  const ControlFunction c(X, 2.5);
  for (int i = 0; i <= 16; ++i) CHECK(c(i, i) == 0.0);
  for (int trial = 0; trial < 60; ++trial) {
    int i = int(rng.next_u32() % 17), j = int(rng.next_u32() % 17);
    if (i > j) std::swap(i, j);
    if (i == j) continue;
    const double cij = c(i, j);
    CHECK(cij + 1e-15 >= std::pow(X->increment(i, j).norm(), 2.5));
    const int u = i + int(rng.next_u32() % (j - i + 1));
    CHECK(c(i, u) + c(u, j) <= cij * (1 + 1e-12) + 1e-15);
  }
}

TEST_CASE("partition construction, merge and guards") {
  const Partition full = Partition::full(8);
  CHECK(full.num_cells() == 8);
  const Partition coarse = Partition::coarsest(8);
  CHECK(coarse.num_cells() == 1);
  const Partition a({0, 2, 5, 8}, 8);
  const Partition b({0, 3, 5, 8}, 8);
  const Partition m = Partition::merge(a, b);
  CHECK(m.indices() == std::vector<int>{0, 2, 3, 5, 8});
  CHECK_THROWS_AS(Partition({0, 5}, 8), std::invalid_argument);
  CHECK_THROWS_AS(Partition({1, 8}, 8), std::invalid_argument);
  CHECK_THROWS_AS(Partition({0, 5, 5, 8}, 8), std::invalid_argument);
}

TEST_CASE("subpath collapses outward one-sided endpoint values") {
  const RegulatedPath X = fixtures::twosided();
  const RegulatedPath S = subpath(X, 1, 3);
  CHECK(S.horizon() == doctest::Approx(0.5));
  CHECK(S.time(0) == 0.0);
  // The left jump at the old index 1 is dropped: a window starting at t_1
  // starts at the value X_{t_1}.
  CHECK(S.left(0)[0] == S.at(0)[0]);
  // The right jump at the old index 3 is dropped likewise.
  CHECK(S.right(S.last_index())[0] == S.at(S.last_index())[0]);
  CHECK(S.at(1)[0] == doctest::Approx(0.6));
}

TEST_CASE("restrict_grid keeps every stride-th point of the same path") {
  RngStream rng(36, 0);
  const RegulatedPath X = fixtures::random_jumpy(rng, 12, 1, 0.3);
  const RegulatedPath C = restrict_grid(X, 3);
  CHECK(C.last_index() == 4);
  for (int i = 0; i <= 4; ++i) {
    CHECK(C.time(i) == X.time(3 * i));
    CHECK((C.at(i) - X.at(3 * i)).norm() == 0.0);
    CHECK((C.left(i) - X.left(3 * i)).norm() == 0.0);
    CHECK((C.right(i) - X.right(3 * i)).norm() == 0.0);
  }
  CHECK_THROWS_AS(restrict_grid(X, 5), std::invalid_argument);
}

TEST_CASE("add_paths is pointwise on matching grids") {
  RngStream rng(37, 0);
  const RegulatedPath A = fixtures::random_jumpy(rng, 6, 2, 0.4);
  const RegulatedPath B = fixtures::random_continuous(rng, 6, 2);
  const RegulatedPath S = add_paths(A, B);
  for (int i = 0; i <= 6; ++i) {
    // Compare against the sum as computed, not a rearranged expression.
    CHECK((S.at(i) - (A.at(i) + B.at(i))).norm() == 0.0);
    CHECK((S.left(i) - (A.left(i) + B.left(i))).norm() == 0.0);
  }
  const RegulatedPath C = fixtures::random_continuous(rng, 5, 2);
  CHECK_THROWS_AS(add_paths(A, C), std::invalid_argument);
}

TEST_CASE("resample_steps extends a staircase without moving its jumps") {
  const RegulatedPath S = fixtures::step_cadlag();
  const std::vector<double> fine = {0.0, 0.25, 0.5, 0.75, 1.0};
  const RegulatedPath R = resample_steps(S, fine);
  CHECK(R.last_index() == 4);
  CHECK(R.at(1)[0] == 0.0);
  CHECK(R.left(2)[0] == 0.0);
  CHECK(R.at(2)[0] == 1.0);  // jump stays at t = 0.5
  CHECK(R.at(3)[0] == 1.0);
  CHECK(R.is_cadlag());
  CHECK(R.p_variation(1.0) == doctest::Approx(S.p_variation(1.0)));
  // Target grid must contain every original time.
  CHECK_THROWS_AS(resample_steps(S, {0.0, 0.4, 1.0}), std::invalid_argument);
}

TEST_CASE("JSON round trip preserves the presentation exactly") {
  const RegulatedPath X = fixtures::twosided();
  const RegulatedPath Y = path_from_json(path_to_json(X));
  REQUIRE(Y.last_index() == X.last_index());
  for (int i = 0; i <= X.last_index(); ++i) {
    CHECK(Y.time(i) == X.time(i));
    CHECK((Y.left(i) - X.left(i)).norm() == 0.0);
    CHECK((Y.at(i) - X.at(i)).norm() == 0.0);
    CHECK((Y.right(i) - X.right(i)).norm() == 0.0);
  }
}

TEST_CASE("fixture files load and malformed ones are rejected") {
  const std::string dir = fixtures::fixture_dir();
  const RegulatedPath q = load_path_file(dir + "/quad.json");
  CHECK(q.at(2)[0] == 3.0);
  CHECK(q.left(1)[0] == 0.4);
  CHECK_THROWS_AS(load_path_file(dir + "/malformed.json"), PathFormatError);
  CHECK_THROWS_AS(load_path_file(dir + "/bad_times.json"), PathFormatError);
  CHECK_THROWS_AS(load_path_file(dir + "/does_not_exist.json"), PathFormatError);
}

TEST_CASE("save_path_file then load_path_file is the identity") {
  const RegulatedPath X = fixtures::quad();
  const fs::path tmp =
      fs::temp_directory_path() / "roughjump_path_roundtrip.json";
  save_path_file(X, tmp.string());
  const RegulatedPath Y = load_path_file(tmp.string());
  CHECK((Y.at(1) - X.at(1)).norm() == 0.0);
  CHECK((Y.left(1) - X.left(1)).norm() == 0.0);
  fs::remove(tmp);
}
