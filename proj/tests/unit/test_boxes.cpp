#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "nlc/boolean_function.hpp"
#include "nlc/boxes.hpp"
#include "nlc/prior.hpp"
#include "nlc/rng.hpp"

using namespace nlc;

namespace {

// Success of a single-bit-input box on the distributed task
// a xor b = x y with independent uniform inputs. This task is not the
// nonlocal computation of any f(x xor y); it gets its own scorer.
double product_task_success(const CorrelationBox& box) {
  double total = 0.0;
  for (std::uint32_t x = 0; x < 2; ++x)
    for (std::uint32_t y = 0; y < 2; ++y) {
      const int want = static_cast<int>(x & y);
      total += 0.25 * (box.prob(x, y, 0, want) + box.prob(x, y, 1, want ^ 1));
    }
  return total;
}

CorrelationBox deterministic_local_box(unsigned n, const std::vector<std::uint8_t>& g,
                                       const std::vector<std::uint8_t>& h) {
  CorrelationBox box(n, n);
  for (std::uint32_t x = 0; x < box.x_count(); ++x)
    for (std::uint32_t y = 0; y < box.y_count(); ++y) box.prob(x, y, g[x], h[y]) = 1.0;
  return box;
}

PriorDistribution random_prior(unsigned n, SplitMix64& rng) {
  std::vector<double> p(std::size_t{1} << n);
  double sum = 0.0;
  for (double& v : p) {
    v = rng.next_double();
    sum += v;
  }
  for (double& v : p) v /= sum;
  return PriorDistribution(n, std::move(p));
}

}  // namespace

TEST_CASE("PR box wins the product task and stays non-signalling") {
  const CorrelationBox pr = pr_box();
  CHECK(pr.is_valid());
  CHECK(product_task_success(pr) == 1.0);
  CHECK(is_nonsignalling(pr));
  CHECK(marginals_uniform(pr));
}

TEST_CASE("noisy PR boxes") {
  // Full-strength noise parameter reproduces the PR box.
  const CorrelationBox pr = pr_box();
  const CorrelationBox p1 = noisy_pr_box(1.0);
  for (std::uint32_t x = 0; x < 2; ++x)
    for (std::uint32_t y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) REQUIRE(p1.prob(x, y, a, b) == pr.prob(x, y, a, b));

  // Half-strength is two independent fair coins.
  const CorrelationBox half = noisy_pr_box(0.5);
  for (std::uint32_t x = 0; x < 2; ++x)
    for (std::uint32_t y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) REQUIRE(half.prob(x, y, a, b) == 0.25);

  for (int k = 0; k <= 100; ++k) {
    const double p = k / 100.0;
    const CorrelationBox box = noisy_pr_box(p);
    REQUIRE(box.is_valid());
    REQUIRE(product_task_success(box) == p);
    REQUIRE(marginals_uniform(box));
    REQUIRE(is_nonsignalling(box));
  }
  CHECK_THROWS_AS(noisy_pr_box(1.5), std::invalid_argument);
  CHECK_THROWS_AS(noisy_pr_box(-0.1), std::invalid_argument);
}

TEST_CASE("perfect task box computes any function exactly") {
  SplitMix64 rng(71);
  const BooleanFunction f_and = parse_function("and");
  const CorrelationBox box = perfect_nlc_box(f_and);
  CHECK(box.is_valid());
  CHECK(box_success_exact(box, f_and, PriorDistribution::uniform(2)) == 1.0);
  CHECK(box_success_exact(box, f_and, random_prior(2, rng)) == 1.0);
  CHECK(is_nonsignalling(box));
  CHECK(marginals_uniform(box));

  for (const char* spec : {"or", "xor", "maj3", "not"}) {
    const BooleanFunction f = parse_function(spec);
    const CorrelationBox b = perfect_nlc_box(f);
    REQUIRE(b.is_valid());
    REQUIRE(is_nonsignalling(b));
    REQUIRE(marginals_uniform(b));
    REQUIRE(box_success_exact(b, f, PriorDistribution::uniform(f.n())) == 1.0);
  }
}

TEST_CASE("signalling and deterministic boxes are classified correctly") {
  // Alice's output copies Bob's input: maximal signalling.
  CorrelationBox leak(1, 1);
  for (std::uint32_t x = 0; x < 2; ++x)
    for (std::uint32_t y = 0; y < 2; ++y) leak.prob(x, y, static_cast<int>(y), 0) = 1.0;
  CHECK(leak.is_valid());
  CHECK_FALSE(is_nonsignalling(leak));

  const CorrelationBox local = deterministic_local_box(1, {0, 1}, {1, 1});
  CHECK(local.is_valid());
  CHECK(is_nonsignalling(local));
  CHECK_FALSE(marginals_uniform(local));

  const CorrelationBox zeros = deterministic_local_box(2, {0, 0, 0, 0}, {0, 0, 0, 0});
  CHECK(is_nonsignalling(zeros));
  CHECK_FALSE(marginals_uniform(zeros));
  CHECK(box_success_exact(zeros, parse_function("and"), PriorDistribution::uniform(2)) ==
        0.75);
}

TEST_CASE("perfect boxes for non-constant tasks must have uniform marginals") {
  // Keeping success at 1 while skewing a marginal breaks no-signalling:
  // the skewed conditional sticks out against the other inputs.
  for (const char* spec : {"tt:n=1:hex=2", "and"}) {
    const BooleanFunction f = parse_function(spec);
    CorrelationBox box = perfect_nlc_box(f);
    const double eps = 0.125;
    const int c = f(0 ^ 0);
    box.prob(0, 0, 0, c) = 0.5 + eps;
    box.prob(0, 0, 1, c ^ 1) = 0.5 - eps;
    REQUIRE(box.is_valid());
    REQUIRE(box_success_exact(box, f, PriorDistribution::uniform(f.n())) == 1.0);
    REQUIRE_FALSE(marginals_uniform(box));
    REQUIRE_FALSE(is_nonsignalling(box));
  }
}

TEST_CASE("box validation catches broken tables") {
  CorrelationBox box(1, 1);
  CHECK_FALSE(box.is_valid());  // all zeros, nothing normalized
  box.prob(0, 0, 0, 0) = 1.0;
  CHECK_FALSE(box.is_valid());  // other inputs still empty
  CHECK_THROWS_AS(box.validate(), std::invalid_argument);
}

TEST_CASE("mixing non-signalling boxes preserves validity and no-signalling") {
  SplitMix64 rng(73);
  const BooleanFunction f_and = parse_function("and");
  std::vector<CorrelationBox> pool;
  pool.push_back(perfect_nlc_box(f_and));
  pool.push_back(perfect_nlc_box(parse_function("xor")));
  pool.push_back(deterministic_local_box(2, {0, 1, 0, 1}, {0, 0, 1, 1}));
  pool.push_back(deterministic_local_box(2, {1, 1, 0, 0}, {0, 1, 0, 1}));
  for (int trial = 0; trial < 20; ++trial) {
    const auto& lhs = pool[rng.next_bits(2) % pool.size()];
    const auto& rhs = pool[rng.next_bits(2) % pool.size()];
    const CorrelationBox mixed = mix_boxes(lhs, rhs, rng.next_double());
    REQUIRE(mixed.is_valid());
    REQUIRE(is_nonsignalling(mixed));
  }
}

TEST_CASE("the two-box AND protocol is exact with perfect boxes") {
  const BoxProtocol protocol = and_protocol_from_two_boxes(pr_box(), pr_box());
  protocol.validate();
  CHECK(protocol_success_exact(protocol, parse_function("and"),
                               PriorDistribution::uniform(2)) == 1.0);
  CHECK_THROWS_AS(and_protocol_from_two_boxes(pr_box(), perfect_nlc_box(parse_function("and"))),
                  std::invalid_argument);
}

TEST_CASE("noisy boxes degrade the AND protocol as p^2 + (1-p)^2") {
  const BooleanFunction f_and = parse_function("and");
  const PriorDistribution u2 = PriorDistribution::uniform(2);
  for (int k = 0; k <= 100; ++k) {
    const double p = k / 100.0;
    const BoxProtocol protocol = and_protocol_from_two_boxes(noisy_pr_box(p), noisy_pr_box(p));
    const double expected = p * p + (1.0 - p) * (1.0 - p);
    REQUIRE(std::abs(protocol_success_exact(protocol, f_and, u2) - expected) <= 1e-12);
  }
  const double p = (2.0 + std::sqrt(2.0)) / 4.0;
  const BoxProtocol critical = and_protocol_from_two_boxes(noisy_pr_box(p), noisy_pr_box(p));
  CHECK(std::abs(protocol_success_exact(critical, f_and, u2) - 0.75) <= 1e-12);
}

TEST_CASE("a protocol without boxes is just a strategy pair") {
  SplitMix64 rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const unsigned n = 1 + rng.next_bits(1);
    std::vector<std::uint8_t> fbits(std::size_t{1} << n);
    for (auto& bit : fbits) bit = static_cast<std::uint8_t>(rng.next_bits(1));
    const BooleanFunction f(n, fbits);
    const PriorDistribution prior = random_prior(n, rng);
    StrategyPair pair{n, {}, {}};
    for (std::size_t i = 0; i < f.size(); ++i) {
      pair.a_table.push_back(static_cast<std::uint8_t>(rng.next_bits(1)));
      pair.b_table.push_back(static_cast<std::uint8_t>(rng.next_bits(1)));
    }
    const BoxProtocol protocol = protocol_from_tables(pair);
    REQUIRE(std::abs(protocol_success_exact(protocol, f, prior) -
                     strategy_value_exact(pair, f, prior)) <= 1e-15);
  }
}

TEST_CASE("sampling respects the box support") {
  SplitMix64 rng(83);
  const CorrelationBox pr = pr_box();
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint32_t x = rng.next_bits(1), y = rng.next_bits(1);
    const auto [a, b] = sample_box(pr, x, y, rng);
    REQUIRE((a ^ b) == static_cast<int>(x & y));
  }

  const CorrelationBox fixed = deterministic_local_box(1, {1, 1}, {0, 0});
  for (int trial = 0; trial < 10; ++trial) {
    const auto [a, b] = sample_box(fixed, rng.next_bits(1), rng.next_bits(1), rng);
    REQUIRE(a == 1);
    REQUIRE(b == 0);
  }
}

TEST_CASE("sampling frequencies match the table") {
  SplitMix64 rng(90);
  const CorrelationBox box = noisy_pr_box(0.8);
  const int trials = 100000;
  std::array<int, 4> counts{};
  for (int t = 0; t < trials; ++t) {
    const auto [a, b] = sample_box(box, 1, 1, rng);
    ++counts[2 * a + b];
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double p = box.prob(1, 1, a, b);
      const double sigma = std::sqrt(p * (1 - p) / trials);
      REQUIRE(std::abs(static_cast<double>(counts[2 * a + b]) / trials - p) <= 4 * sigma);
    }
}

TEST_CASE("Monte Carlo agrees with the exact evaluations") {
  const BooleanFunction f_and = parse_function("and");
  const PriorDistribution u2 = PriorDistribution::uniform(2);

  // Every draw from the perfect box wins, so the estimate is exactly one.
  const MonteCarloResult perfect =
      monte_carlo_success(perfect_nlc_box(f_and), f_and, u2, 100000, 7);
  CHECK(perfect.estimate == 1.0);
  CHECK(perfect.standard_error == 0.0);

  const CorrelationBox zeros = deterministic_local_box(2, {0, 0, 0, 0}, {0, 0, 0, 0});
  const MonteCarloResult mc = monte_carlo_success(zeros, f_and, u2, 100000, 11);
  CHECK(std::abs(mc.estimate - 0.75) <= 4 * std::sqrt(0.75 * 0.25 / 100000));

  const BoxProtocol noisy =
      and_protocol_from_two_boxes(noisy_pr_box(0.9), noisy_pr_box(0.9));
  const MonteCarloResult nm = monte_carlo_success(noisy, f_and, u2, 100000, 13);
  const double expected = 0.9 * 0.9 + 0.1 * 0.1;
  CHECK(std::abs(nm.estimate - expected) <= 4 * nm.standard_error);
  CHECK_THROWS_AS(monte_carlo_success(zeros, f_and, u2, 0, 1), std::invalid_argument);
}

TEST_CASE("Monte Carlo matches the exact protocol value across seeds") {
  const BooleanFunction f_and = parse_function("and");
  const PriorDistribution u2 = PriorDistribution::uniform(2);
  const BoxProtocol protocol =
      and_protocol_from_two_boxes(noisy_pr_box(0.8), noisy_pr_box(0.8));
  const double exact = protocol_success_exact(protocol, f_and, u2);
  REQUIRE(std::abs(exact - (0.8 * 0.8 + 0.2 * 0.2)) <= 1e-12);
  int hits = 0;
  const int runs = 40, trials = 20000;
  for (int seed = 0; seed < runs; ++seed) {
    const MonteCarloResult mc = monte_carlo_success(protocol, f_and, u2, trials, seed);
    if (std::abs(mc.estimate - exact) <= 4 * mc.standard_error) ++hits;
  }
  CHECK(hits >= runs - 1);
}
