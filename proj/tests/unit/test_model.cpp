#include <doctest.h>

#include <cmath>

#include "subsetsum/model.hpp"

using namespace subsetsum;

TEST_CASE("new_instance validates its inputs") {
  const auto inst = new_instance({5}, 5);
  CHECK(inst.n() == 1);
  CHECK(inst.target == 5);

  CHECK_THROWS_AS(new_instance({}, 0), Error);
  CHECK_THROWS_AS(new_instance({Amount{1} << 51}, 1), Error);

  try {
    new_instance({Amount{1} << 51}, 1);
  } catch (const Error& e) {
    CHECK(e.code == Errc::MagnitudeOverflow);
  }

  std::vector<Amount> too_many(kMaxValues + 1, 1);
  try {
    new_instance(too_many, 1);
    FAIL("expected TooManyValues");
  } catch (const Error& e) {
    CHECK(e.code == Errc::TooManyValues);
  }

  // Boundary values are accepted.
  CHECK_NOTHROW(new_instance({kMaxAmountMagnitude, -kMaxAmountMagnitude}, 0));
}

TEST_CASE("generate plants a subset that sums to the target") {
  GeneratorConfig cfg{16, 4, -10'000, 10'000, 1, 12345};
  const auto inst = generate(cfg);
  REQUIRE(inst.planted.has_value());
  CHECK(inst.planted->size() == 4);
  Amount sum = 0;
  for (auto i : *inst.planted) sum += inst.values[i];
  CHECK(sum == inst.target);

  SUBCASE("same seed reproduces the instance") {
    const auto again = generate(cfg);
    CHECK(again.values == inst.values);
    CHECK(again.target == inst.target);
    CHECK(again.planted == inst.planted);
  }

  SUBCASE("different sample index gives a different instance") {
    const auto other = generate(cfg, 1);
    CHECK(other.values != inst.values);
  }
}

TEST_CASE("generate with k=n targets the full-set sum") {
  GeneratorConfig cfg{5, 5, -100, 100, 1, 7};
  const auto inst = generate(cfg);
  Amount sum = 0;
  for (auto v : inst.values) sum += v;
  CHECK(inst.target == sum);
  CHECK(inst.planted->size() == 5);
}

TEST_CASE("planted sum property holds across random configs") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    GeneratorConfig cfg;
    cfg.n = 1 + rand_below(rng, 64);
    cfg.k = 1 + rand_below(rng, cfg.n);
    cfg.x_min = -static_cast<Amount>(1 + rand_below(rng, 100'000));
    cfg.x_max = static_cast<Amount>(1 + rand_below(rng, 100'000));
    cfg.seed = rng();
    const auto inst = generate(cfg);
    Amount sum = 0;
    for (auto i : *inst.planted) sum += inst.values[i];
    CHECK(sum == inst.target);
    for (auto v : inst.values) {
      CHECK(v >= cfg.x_min);
      CHECK(v <= cfg.x_max);
    }
  }
}

TEST_CASE("generate rejects bad configs") {
  CHECK_THROWS_AS(generate({0, 1, -1, 1, 1, 0}), Error);
  CHECK_THROWS_AS(generate({4, 5, -1, 1, 1, 0}), Error);   // k > n
  CHECK_THROWS_AS(generate({4, 2, 5, 5, 1, 0}), Error);    // x_min == x_max
  CHECK_THROWS_AS(generate({4, 2, -1, 1, 0, 0}), Error);   // samples == 0
}

TEST_CASE("solution_ratio matches the closed form") {
  const auto sr = solution_ratio(16, -10'000, 10'000);
  CHECK(sr.r == 65536.0 / 320000.0);  // 0.2048 to machine precision
  CHECK(sr.interval_lo == -160'000);
  CHECK(sr.interval_hi == 160'000);

  // Two-significant-figure checks against the published ratio table.
  auto two_sig = [](double v) {
    const double mag = std::pow(10.0, std::floor(std::log10(std::fabs(v))) - 1);
    return std::round(v / mag) * mag;
  };
  CHECK(two_sig(solution_ratio(16, -10'000, 10'000).r) == doctest::Approx(0.20));
  CHECK(two_sig(solution_ratio(32, -100'000, 100'000).r) == doctest::Approx(670.0));
  CHECK(two_sig(solution_ratio(64, -1'000'000, 1'000'000).r) == doctest::Approx(1.4e11));
}

TEST_CASE("solution_ratio interval for one-sided ranges") {
  const auto sr = solution_ratio(4, 10, 20);
  CHECK(sr.interval_lo == 0);  // no negative values reachable
  CHECK(sr.interval_hi == 80);
}

TEST_CASE("problem documents round-trip losslessly") {
  GeneratorConfig cfg{12, 3, -5'000, 5'000, 1, 31415};
  auto inst = generate(cfg);
  inst.meta.source = "unit test";
  inst.meta.decimals = 4;

  const auto text = write_problem(inst);
  const auto back = read_problem(text);
  CHECK(back.values == inst.values);
  CHECK(back.target == inst.target);
  CHECK(back.planted == inst.planted);
  CHECK(back.meta.seed == inst.meta.seed);
  CHECK(back.meta.decimals == inst.meta.decimals);
  CHECK(back.meta.source == inst.meta.source);
  CHECK(write_problem(back) == text);
}

TEST_CASE("problem documents reject malformed input") {
  CHECK_THROWS_AS(read_problem(R"({"values": [1.5, 2], "target": 3})"), Error);
  CHECK_THROWS_AS(read_problem(R"({"values": [1, 2]})"), Error);
  CHECK_THROWS_AS(read_problem(R"({"values": [1, 2], "target": 3, "extra": 1})"), Error);
  CHECK_THROWS_AS(read_problem(R"({"values": [1, 2], "target": 3, "planted": [0]})"), Error);
  CHECK_THROWS_AS(read_problem(R"({"values": [1, 2], "target": 3, "planted": [0, 0]})"), Error);
  CHECK_THROWS_AS(read_problem(R"(not json)"), Error);
  CHECK_THROWS_AS(read_problem(R"([1, 2, 3])"), Error);

  // A valid planted set is accepted.
  const auto inst = read_problem(R"({"values": [1, 2], "target": 3, "planted": [0, 1]})");
  CHECK(inst.planted->size() == 2);
}
