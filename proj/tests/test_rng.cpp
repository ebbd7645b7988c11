#include <catch2/catch_amalgamated.hpp>

#include <adhoclab/sim/rng.hpp>

#include <cmath>
#include <set>
#include <vector>

using adhoclab::sim::RngStream;

namespace {

std::vector<std::uint64_t> draw(std::uint64_t seed, const char* label, int n) {
  RngStream s(seed, label);
  std::vector<std::uint64_t> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(s.next_u64());
  return out;
}

}  // namespace

TEST_CASE("same seed and label reproduce the sequence exactly") {
  REQUIRE(draw(42, "mac", 1000) == draw(42, "mac", 1000));
  REQUIRE(draw(0, "", 1000) == draw(0, "", 1000));
}

TEST_CASE("different labels under one seed give unrelated streams") {
  auto a = draw(42, "mac", 256);
  auto b = draw(42, "jitter", 256);
  auto c = draw(42, "mobility", 256);
  int eq_ab = 0, eq_ac = 0;
  for (int i = 0; i < 256; ++i) {
    eq_ab += a[i] == b[i];
    eq_ac += a[i] == c[i];
  }
  // a single chance collision among 256 draws is already ~2^-56
  REQUIRE(eq_ab == 0);
  REQUIRE(eq_ac == 0);
}

TEST_CASE("different seeds under one label give unrelated streams") {
  auto a = draw(1, "mac", 256);
  auto b = draw(2, "mac", 256);
  int eq = 0;
  for (int i = 0; i < 256; ++i) eq += a[i] == b[i];
  REQUIRE(eq == 0);
}

TEST_CASE("no stream prefix collisions across a seed range") {
  // 100 seeds x 2 labels, compare the first 16 draws of every stream
  std::set<std::vector<std::uint64_t>> prefixes;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    prefixes.insert(draw(seed, "mac", 16));
    prefixes.insert(draw(seed, "traffic", 16));
  }
  REQUIRE(prefixes.size() == 200);
}

TEST_CASE("uniform stays in [0,1) and fills the range") {
  RngStream s(7, "u");
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double v = s.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  REQUIRE(lo < 0.001);
  REQUIRE(hi > 0.999);
  // mean of n uniforms has sd ~ 1/sqrt(12 n) ~ 0.0009; allow 5 sigma
  REQUIRE(sum / n == Catch::Approx(0.5).margin(0.005));
}

TEST_CASE("uniform(lo, hi) respects its bounds") {
  RngStream s(7, "u2");
  for (int i = 0; i < 1000; ++i) {
    double v = s.uniform(3.0, 5.5);
    REQUIRE(v >= 3.0);
    REQUIRE(v < 5.5);
  }
}

TEST_CASE("uniform_int covers [0, n) without bias toward any residue") {
  RngStream s(11, "ui");
  const std::uint64_t n = 7;
  std::vector<int> counts(n, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    std::uint64_t v = s.uniform_int(n);
    REQUIRE(v < n);
    ++counts[v];
  }
  // chi-square, 6 dof, 0.1% critical value 22.46
  double chi2 = 0.0;
  const double expect = double(draws) / n;
  for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
  REQUIRE(chi2 < 22.46);
}

TEST_CASE("exponential has the requested mean") {
  RngStream s(13, "exp");
  const double mean = 2.5;
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = s.exponential(mean);
    REQUIRE(v >= 0.0);
    sum += v;
  }
  // sd of the sample mean is mean/sqrt(n) ~ 0.0056; allow 5 sigma
  REQUIRE(sum / n == Catch::Approx(mean).margin(0.03));
}

TEST_CASE("normal matches its first two moments") {
  RngStream s(17, "norm");
  const double mu = 1.0, sd = 3.0;
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = s.normal(mu, sd);
    sum += v;
    sumsq += v * v;
  }
  double m = sum / n;
  double var = sumsq / n - m * m;
  REQUIRE(m == Catch::Approx(mu).margin(5.0 * sd / std::sqrt(double(n))));
  REQUIRE(var == Catch::Approx(sd * sd).epsilon(0.03));
}
