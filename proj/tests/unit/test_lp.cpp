#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "nlc/boolean_function.hpp"
#include "nlc/game.hpp"
#include "nlc/minimax.hpp"
#include "nlc/ns_value.hpp"
#include "nlc/prior.hpp"
#include "nlc/rng.hpp"
#include "nlc/simplex.hpp"
#include "nlc/value.hpp"

using namespace nlc;

namespace {

BooleanFunction random_function(unsigned n, SplitMix64& rng) {
  std::vector<std::uint8_t> t(std::size_t{1} << n);
  for (auto& bit : t) bit = static_cast<std::uint8_t>(rng.next_bits(1));
  return BooleanFunction(n, std::move(t));
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

// Feasible and bounded by construction: b is padded around a known
// nonnegative point and every variable gets a box row.
LinearProgram random_feasible_lp(SplitMix64& rng) {
  LinearProgram lp;
  const std::size_t n = 2 + rng.next_bits(2) % 3;
  const std::size_t m = 2 + rng.next_bits(2);
  lp.sense = rng.next_bits(1) ? LpSense::maximize : LpSense::minimize;
  lp.objective.resize(n);
  for (double& c : lp.objective) c = 2.0 * rng.next_double() - 1.0;

  std::vector<double> x0(n);
  for (double& v : x0) v = rng.next_double();
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> row(n);
    double ax = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = 2.0 * rng.next_double() - 1.0;
      ax += row[j] * x0[j];
    }
    const int kind = static_cast<int>(rng.next_bits(2) % 3);
    lp.rows.push_back(std::move(row));
    if (kind == 0) {
      lp.relations.push_back(LpRelation::less_equal);
      lp.rhs.push_back(ax + rng.next_double());
    } else if (kind == 1) {
      lp.relations.push_back(LpRelation::greater_equal);
      lp.rhs.push_back(ax - rng.next_double());
    } else {
      lp.relations.push_back(LpRelation::equal);
      lp.rhs.push_back(ax);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {  // box rows keep the maximum finite
    std::vector<double> row(n, 0.0);
    row[j] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.relations.push_back(LpRelation::less_equal);
    lp.rhs.push_back(10.0);
  }
  return lp;
}

}  // namespace

TEST_CASE("simplex solves the textbook cases") {
  LinearProgram lp;
  lp.sense = LpSense::maximize;
  lp.objective = {1.0};
  lp.rows = {{1.0}};
  lp.relations = {LpRelation::less_equal};
  lp.rhs = {3.0};
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == 3.0);
  CHECK(sol.x[0] == 3.0);
  CHECK(sol.dual[0] == 1.0);  // b.y matches the optimum
}

TEST_CASE("simplex reports infeasible and unbounded programs distinctly") {
  LinearProgram infeasible;
  infeasible.sense = LpSense::minimize;
  infeasible.objective = {0.0};
  infeasible.rows = {{1.0}};
  infeasible.relations = {LpRelation::less_equal};
  infeasible.rhs = {-1.0};  // x <= -1 against x >= 0
  CHECK(solve_lp(infeasible).status == LpStatus::infeasible);

  LinearProgram unbounded;
  unbounded.sense = LpSense::maximize;
  unbounded.objective = {1.0};
  unbounded.rows = {{1.0}};
  unbounded.relations = {LpRelation::greater_equal};
  unbounded.rhs = {1.0};
  CHECK(solve_lp(unbounded).status == LpStatus::unbounded);
}

TEST_CASE("simplex handles equality rows and flipped signs") {
  LinearProgram lp;
  lp.sense = LpSense::minimize;
  lp.objective = {2.0, 3.0};
  lp.rows = {{1.0, 1.0}, {-1.0, 0.0}};
  lp.relations = {LpRelation::equal, LpRelation::less_equal};
  lp.rhs = {4.0, -1.0};  // x0 + x1 = 4, x0 >= 1
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(std::abs(sol.objective - 8.0) <= 1e-12);  // all weight on x0
  CHECK(std::abs(sol.x[0] - 4.0) <= 1e-12);
  CHECK(std::abs(sol.x[1]) <= 1e-12);
  const double dual_obj = 4.0 * sol.dual[0] + (-1.0) * sol.dual[1];
  CHECK(std::abs(dual_obj - sol.objective) <= 1e-12);
}

TEST_CASE("strong duality holds on random feasible programs") {
  SplitMix64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const LinearProgram lp = random_feasible_lp(rng);
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);

    // Primal feasibility.
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
      double ax = 0.0;
      for (std::size_t j = 0; j < lp.num_vars(); ++j) ax += lp.rows[i][j] * sol.x[j];
      if (lp.relations[i] == LpRelation::less_equal) REQUIRE(ax <= lp.rhs[i] + 1e-9);
      else if (lp.relations[i] == LpRelation::greater_equal) REQUIRE(ax >= lp.rhs[i] - 1e-9);
      else REQUIRE(std::abs(ax - lp.rhs[i]) <= 1e-9);
    }
    for (double v : sol.x) REQUIRE(v >= -1e-9);

    // Dual objective equals the primal optimum.
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < lp.num_rows(); ++i) dual_obj += lp.rhs[i] * sol.dual[i];
    REQUIRE(std::abs(dual_obj - sol.objective) <= 1e-9);

    // Dual feasibility, including the multiplier sign per row type.
    const double sense = lp.sense == LpSense::maximize ? 1.0 : -1.0;
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
      if (lp.relations[i] == LpRelation::less_equal)
        REQUIRE(sense * sol.dual[i] >= -1e-9);
      else if (lp.relations[i] == LpRelation::greater_equal)
        REQUIRE(sense * sol.dual[i] <= 1e-9);
    }
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
      double aty = 0.0;
      for (std::size_t i = 0; i < lp.num_rows(); ++i) aty += lp.rows[i][j] * sol.dual[i];
      if (lp.sense == LpSense::maximize) REQUIRE(aty >= lp.objective[j] - 1e-9);
      else REQUIRE(aty <= lp.objective[j] + 1e-9);
    }
  }
}

TEST_CASE("worst-case prior for AND is uniform") {
  const MinimaxReport report = worst_case_prior(parse_function("and"));
  CHECK(std::abs(report.worst_case_value - 0.75) <= 1e-9);
  for (std::uint32_t z = 0; z < 4; ++z) CHECK(std::abs(report.worst_prior(z) - 0.25) <= 1e-9);
  CHECK(report.duality_gap <= 1e-9);

  // The mixture recovered from the duals defends 0.75 on every input.
  CHECK(mixture_worst_case_value(report.optimal_mixture, parse_function("and")) >=
        0.75 - 1e-9);
}

TEST_CASE("worst case of affine functions is certainty") {
  CHECK(std::abs(worst_case_prior(parse_function("not")).worst_case_value - 1.0) <= 1e-9);
  CHECK(std::abs(worst_case_prior(parse_function("xor")).worst_case_value - 1.0) <= 1e-9);
  const MinimaxReport const0 = worst_case_mixture(parse_function("const0"));
  CHECK(std::abs(const0.worst_case_value - 1.0) <= 1e-9);
  CHECK(mixture_worst_case_value(const0.optimal_mixture, parse_function("const0")) >=
        1.0 - 1e-9);
}

TEST_CASE("minimax duality holds exhaustively on two bits") {
  for (std::uint32_t bits = 0; bits < 16; ++bits) {
    std::vector<std::uint8_t> t(4);
    for (std::size_t z = 0; z < 4; ++z) t[z] = (bits >> z) & 1u;
    const BooleanFunction f(2, t);
    const MinimaxReport dual = worst_case_prior(f);
    const MinimaxReport primal = worst_case_mixture(f);
    REQUIRE(std::abs(dual.worst_case_value - primal.worst_case_value) <= 1e-9);
    REQUIRE(mixture_worst_case_value(primal.optimal_mixture, f) >=
            primal.worst_case_value - 1e-9);
    if (is_affine(f)) REQUIRE(std::abs(primal.worst_case_value - 1.0) <= 1e-9);
  }
}

TEST_CASE("both minimax sides agree and certify each other") {
  SplitMix64 rng(103);
  for (int trial = 0; trial < 12; ++trial) {
    const unsigned n = 1 + rng.next_bits(2) % 3;
    const BooleanFunction f = random_function(n, rng);
    const MinimaxReport dual = worst_case_prior(f);
    const MinimaxReport primal = worst_case_mixture(f);
    REQUIRE(std::abs(dual.worst_case_value - primal.worst_case_value) <= 1e-9);
    REQUIRE(primal.duality_gap <= 1e-9);

    // Independent certificates on both sides: the mixture defends the value
    // on every input, and the best response to the worst prior caps it.
    REQUIRE(mixture_worst_case_value(primal.optimal_mixture, f) >=
            primal.worst_case_value - 1e-9);
    REQUIRE(mixture_worst_case_value(dual.optimal_mixture, f) >=
            dual.worst_case_value - 1e-9);
    const double best_response = classical_optimum(f, dual.worst_prior).value;
    REQUIRE(best_response <= dual.worst_case_value + 1e-9);
    REQUIRE(best_response >= dual.worst_case_value - 1e-9);
  }
}

TEST_CASE("the worst-case value never beats a fixed prior") {
  SplitMix64 rng(107);
  for (int trial = 0; trial < 15; ++trial) {
    const unsigned n = 1 + rng.next_bits(1);
    const BooleanFunction f = random_function(n, rng);
    const double worst = worst_case_prior(f).worst_case_value;
    for (int p = 0; p < 5; ++p)
      REQUIRE(worst <= classical_optimum(f, random_prior(n, rng)).value + 1e-9);
  }
}

TEST_CASE("minimax guard rejects wide functions") {
  CHECK_THROWS_AS(worst_case_prior(BooleanFunction(11, std::vector<std::uint8_t>(2048, 0))),
                  guard_error);
}

TEST_CASE("mixture weights are a distribution over strategies") {
  const MinimaxReport report = worst_case_mixture(parse_function("maj3"));
  double sum = 0.0;
  for (double w : report.optimal_mixture) {
    REQUIRE(w >= 0.0);
    sum += w;
  }
  CHECK(std::abs(sum - 1.0) <= 1e-9);
  CHECK(report.optimal_mixture.size() == 16);  // 2^{n+1}
}

TEST_CASE("non-signalling boxes win every task game") {
  SplitMix64 rng(109);
  CHECK(std::abs(ns_value_lp(parse_function("and"), PriorDistribution::uniform(2)) - 1.0) <=
        1e-9);
  for (int trial = 0; trial < 8; ++trial) {
    const unsigned n = 1 + rng.next_bits(1);
    const BooleanFunction f = random_function(n, rng);
    const PriorDistribution prior = random_prior(n, rng);
    REQUIRE(std::abs(ns_value_lp(f, prior) - 1.0) <= 1e-9);
  }
}

TEST_CASE("the CHSH game has non-signalling value one") {
  GameMatrix chsh(2, 2);
  chsh(0, 0) = 0.25;
  chsh(0, 1) = 0.25;
  chsh(1, 0) = 0.25;
  chsh(1, 1) = -0.25;
  const NsValueResult r = ns_value_box(chsh);
  CHECK(std::abs(r.value - 1.0) <= 1e-9);
  CHECK(r.box.is_valid(1e-9));
  CHECK(is_nonsignalling(r.box, 1e-9));

  // The witness box really produces the reported bias.
  double bias = 0.0;
  for (std::uint32_t x = 0; x < 2; ++x)
    for (std::uint32_t y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          bias += chsh(x, y) * ((a ^ b) ? -1.0 : 1.0) * r.box.prob(x, y, a, b);
  CHECK(std::abs(0.5 * (1.0 + bias) - r.value) <= 1e-9);
}

TEST_CASE("non-signalling value dominates the classical value") {
  SplitMix64 rng(113);
  for (int trial = 0; trial < 10; ++trial) {
    GameMatrix g(2, 4);
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t y = 0; y < 4; ++y) g(x, y) = (2.0 * rng.next_double() - 1.0) / 8.0;
    const NsValueResult r = ns_value_box(g);
    REQUIRE(r.box.is_valid(1e-9));
    REQUIRE(is_nonsignalling(r.box, 1e-9));
    REQUIRE(r.value >= 0.5 * (1.0 + classical_bias(g).bias) - 1e-9);
  }
}

TEST_CASE("the non-signalling LP guard names its cap") {
  CHECK_THROWS_AS(ns_value_lp(GameMatrix(256, 256)), guard_error);
}
