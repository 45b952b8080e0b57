#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlc/boxes.hpp"
#include "nlc/errors.hpp"
#include "nlc/game.hpp"
#include "nlc/simplex.hpp"

namespace nlc {

struct NsValueResult {
  double value = 0.0;
  CorrelationBox box;
};

/// Maximum value (1 + bias) / 2 of a game over all valid non-signalling
/// boxes, by LP over the box entries P(a, b | x, y) with normalization,
/// nonnegativity, and both no-signalling equality families. Returns the
/// witness box along with the value. Capped at 4 |X| |Y| <= 2^16 variables.
inline NsValueResult ns_value_box(const GameMatrix& g) {
  const std::size_t X = g.rows(), Y = g.cols();
  if (4 * X * Y > (std::size_t{1} << 16))
    throw guard_error("ns_value_box: LP capped at 4|X||Y| <= 2^16 box variables, got " +
                      std::to_string(4 * X * Y));
  const auto idx = [Y](std::size_t x, std::size_t y, int a, int b) {
    return ((x * Y + y) * 2 + static_cast<std::size_t>(a)) * 2 + static_cast<std::size_t>(b);
  };
  const std::size_t nvars = 4 * X * Y;

  LinearProgram lp;
  lp.sense = LpSense::maximize;
  lp.objective.assign(nvars, 0.0);
  for (std::size_t x = 0; x < X; ++x)
    for (std::size_t y = 0; y < Y; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          lp.objective[idx(x, y, a, b)] = ((a ^ b) ? -1.0 : 1.0) * g(x, y);

  for (std::size_t x = 0; x < X; ++x)  // normalization per input pair
    for (std::size_t y = 0; y < Y; ++y) {
      std::vector<double> row(nvars, 0.0);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) row[idx(x, y, a, b)] = 1.0;
      lp.rows.push_back(std::move(row));
      lp.relations.push_back(LpRelation::equal);
      lp.rhs.push_back(1.0);
    }
  for (std::size_t x = 0; x < X; ++x)  // Alice's marginal independent of y
    for (int a = 0; a < 2; ++a)
      for (std::size_t y = 1; y < Y; ++y) {
        std::vector<double> row(nvars, 0.0);
        for (int b = 0; b < 2; ++b) {
          row[idx(x, y, a, b)] += 1.0;
          row[idx(x, 0, a, b)] -= 1.0;
        }
        lp.rows.push_back(std::move(row));
        lp.relations.push_back(LpRelation::equal);
        lp.rhs.push_back(0.0);
      }
  for (std::size_t y = 0; y < Y; ++y)  // Bob's marginal independent of x
    for (int b = 0; b < 2; ++b)
      for (std::size_t x = 1; x < X; ++x) {
        std::vector<double> row(nvars, 0.0);
        for (int a = 0; a < 2; ++a) {
          row[idx(x, y, a, b)] += 1.0;
          row[idx(0, y, a, b)] -= 1.0;
        }
        lp.rows.push_back(std::move(row));
        lp.relations.push_back(LpRelation::equal);
        lp.rhs.push_back(0.0);
      }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal)
    throw numerical_error("ns_value_box: LP did not reach an optimum");

  NsValueResult out{0.5 * (1.0 + sol.objective), CorrelationBox(g.nx(), g.ny())};
  for (std::size_t x = 0; x < X; ++x)
    for (std::size_t y = 0; y < Y; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          out.box.prob(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y), a, b) =
              std::max(sol.x[idx(x, y, a, b)], 0.0);
  return out;
}

inline double ns_value_lp(const GameMatrix& g) { return ns_value_box(g).value; }

inline double ns_value_lp(const BooleanFunction& f, const PriorDistribution& prior) {
  return ns_value_lp(game_from_nlc(f, prior));
}

}  // namespace nlc
