#include <doctest.h>

#include <cmath>

#include "mamab/environment.hpp"

using namespace mamab;

TEST_CASE("gaussian env gaps and sigma") {
  const auto e = make_gaussian_env({3.0, 1.0, 2.0}, 0.5);
  CHECK(e.gaps().optimal == 0);
  CHECK(e.gaps().gap_min == 1.0);
  CHECK(e.gaps().gap_max == 2.0);
  CHECK(e.sigma() == doctest::Approx(std::sqrt(2.0)));

  const auto two = make_gaussian_env({0.0, 0.25}, 1.0);
  CHECK(two.gaps().optimal == 1);
  CHECK(two.gaps().gap_min == 0.25);
  CHECK(two.gaps().gap_max == 0.25);

  const auto v2 = make_gaussian_env({0.0, 1.0}, 2.0);
  CHECK(v2.sigma() * v2.sigma() == doctest::Approx(8.0));
}

TEST_CASE("zero variance is deterministic") {
  const auto e = make_gaussian_env({1.0, 0.5}, 0.0);
  CHECK(e.gaps().optimal == 0);
  CHECK(e.gaps().gap_min == 0.5);
  CHECK(e.gaps().gap_max == 0.5);
  for (std::int64_t t = 1; t < 50; ++t) {
    CHECK(e.sample(99, t, 0) == 1.0);
    CHECK(e.sample(99, t, 1) == 0.5);
  }
}

TEST_CASE("tied maximum and bad inputs rejected") {
  CHECK_THROWS_AS(make_gaussian_env({1.0, 1.0, 0.0}, 1.0), EnvironmentError);
  CHECK_THROWS_AS(make_gaussian_env({1.0}, 1.0), EnvironmentError);
  CHECK_THROWS_AS(make_gaussian_env({1.0, 0.0}, -1.0), EnvironmentError);
}

TEST_CASE("realizations are a pure function of (seed, t, option)") {
  const auto e = make_gaussian_env({0.0, 1.0, 2.0}, 2.0);
  for (std::int64_t t = 1; t < 100; ++t)
    for (Option i = 0; i < 3; ++i) CHECK(e.sample(5, t, i) == e.sample(5, t, i));
  const auto v = e.realize_rewards(17, 11);
  REQUIRE(v.size() == 3);
  for (Option i = 0; i < 3; ++i) CHECK(v[i] == e.sample(11, 17, i));
  CHECK(e.sample(5, 1, 0) != e.sample(6, 1, 0));
  CHECK(e.sample(5, 1, 0) != e.sample(5, 2, 0));
}

TEST_CASE("sample mean converges") {
  const double v = 2.0;
  const auto e = make_gaussian_env({0.3, 1.7}, v);
  constexpr int N = 100000;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (Option i = 0; i < 2; ++i) {
      double s = 0.0, ss = 0.0;
      for (int t = 1; t <= N; ++t) {
        const double x = e.sample(seed, t, i);
        s += x;
        ss += x * x;
      }
      const double mean = s / N;
      CHECK(std::abs(mean - e.means()[i]) <= 5.0 * std::sqrt(v / N));
      CHECK(ss / N - mean * mean == doctest::Approx(v).epsilon(0.03));
    }
  }
}

TEST_CASE("drift keeps the optimal option") {
  const auto e = make_drift_env({0.0, 1.0, 3.0}, 1.0, 0.9, 50.0);
  CHECK(e.kind() == RewardKind::bounded_drift);
  for (std::int64_t t = 1; t <= 500; ++t) {
    const double best = e.mean_at(2, t);
    CHECK(best > e.mean_at(0, t));
    CHECK(best > e.mean_at(1, t));
  }
  CHECK_THROWS_AS(make_drift_env({0.0, 1.0}, 1.0, 0.5, 50.0), EnvironmentError);
}

TEST_CASE("gradient means peak at the requested vertex") {
  const auto g = build_lattice(5, 5);
  const auto m = gradient_means(g, 24, 0.0, 4.0);
  const auto gaps = compute_gaps(m);
  CHECK(gaps.optimal == 24);
  CHECK(gaps.gap_min == doctest::Approx(0.5));
  CHECK(gaps.gap_max == doctest::Approx(4.0));
  CHECK(m[0] == doctest::Approx(0.0));
}
