#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nlc/boolean_function.hpp"
#include "nlc/errors.hpp"
#include "nlc/prior.hpp"
#include "nlc/simplex.hpp"
#include "nlc/value.hpp"

namespace nlc {

/// Minimax analysis of a task: the best worst-case (over inputs) success
/// probability using mixed strategies, the adversarial prior certifying
/// it, and an optimal mixture over the 2^{n+1} affine strategies indexed
/// s = u + (delta << n).
struct MinimaxReport {
  double worst_case_value = 0.5;
  PriorDistribution worst_prior;
  std::vector<double> optimal_mixture;
  double duality_gap = 0.0;
};

/// Success indicator of affine strategy (u, delta) on input z. Affine
/// strategies answer u.z xor delta deterministically on every split of z,
/// so this is the full conditional success probability.
inline int affine_wins(std::uint32_t u, int delta, const BooleanFunction& f, std::uint32_t z) {
  return ((parity_dot(u, z) ^ delta) == f(z)) ? 1 : 0;
}

/// Worst-case (min over z) success probability of a mixture over affine
/// strategies, evaluated directly from the per-z indicator table.
inline double mixture_worst_case_value(const std::vector<double>& mixture,
                                       const BooleanFunction& f) {
  const std::size_t size = f.size();
  if (mixture.size() != 2 * size)
    throw std::invalid_argument("mixture_worst_case_value: expected 2^{n+1} weights");
  double worst = 2.0;
  for (std::uint32_t z = 0; z < size; ++z) {
    double score = 0.0;
    for (std::uint32_t u = 0; u < size; ++u) {
      if (affine_wins(u, 0, f, z)) score += mixture[u];
      else score += mixture[size + u];  // delta flips exactly the losing inputs
    }
    worst = std::min(worst, score);
  }
  return worst;
}

namespace detail {

inline void guard_minimax_width(const BooleanFunction& f) {
  if (f.n() > 10)
    throw guard_error("worst-case LP capped at n <= 10, got n=" + std::to_string(f.n()));
}

inline std::vector<double> clamp_simplex_weights(std::vector<double> w, const char* what) {
  double sum = 0.0;
  for (double& v : w) {
    if (v < -1e-9)
      throw numerical_error(std::string(what) + ": negative weight " + std::to_string(v));
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw numerical_error(std::string(what) + ": weights sum to " + std::to_string(sum));
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace detail

/// Adversarial-prior side of the minimax problem: minimizes, over priors,
/// the largest spectrum modulus max_u |sum_z (-1)^{f(z)+u.z} P(z)| as an LP
/// in (P, t) with constraints -t <= coeff(u) <= t. The report value is
/// (1 + t*) / 2; the optimal strategy mixture is read off the LP duals of
/// the two constraint blocks.
inline MinimaxReport worst_case_prior(const BooleanFunction& f) {
  detail::guard_minimax_width(f);
  const std::size_t size = f.size();
  const std::size_t t_col = size;

  LinearProgram lp;
  lp.sense = LpSense::minimize;
  lp.objective.assign(size + 1, 0.0);
  lp.objective[t_col] = 1.0;

  lp.rows.emplace_back(size + 1, 0.0);  // probabilities sum to one
  for (std::size_t z = 0; z < size; ++z) lp.rows.back()[z] = 1.0;
  lp.relations.push_back(LpRelation::equal);
  lp.rhs.push_back(1.0);

  for (int block = 0; block < 2; ++block)  // coeff(u) <= t, then -coeff(u) <= t
    for (std::uint32_t u = 0; u < size; ++u) {
      std::vector<double> row(size + 1, 0.0);
      for (std::uint32_t z = 0; z < size; ++z) {
        const double s = (f(z) ^ parity_dot(u, z)) ? -1.0 : 1.0;
        row[z] = block == 0 ? s : -s;
      }
      row[t_col] = -1.0;
      lp.rows.push_back(std::move(row));
      lp.relations.push_back(LpRelation::less_equal);
      lp.rhs.push_back(0.0);
    }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal)
    throw numerical_error("worst_case_prior: LP did not reach an optimum");

  double dual_obj = 0.0;
  for (std::size_t i = 0; i < lp.num_rows(); ++i) dual_obj += lp.rhs[i] * sol.dual[i];

  std::vector<double> prior(sol.x.begin(), sol.x.begin() + size);
  std::vector<double> mixture(2 * size, 0.0);
  for (std::uint32_t u = 0; u < size; ++u) {
    mixture[u] = -sol.dual[1 + u];                // delta = 0 block
    mixture[size + u] = -sol.dual[1 + size + u];  // delta = 1 block
  }

  MinimaxReport report{
      0.5 * (1.0 + sol.objective),
      PriorDistribution(f.n(), detail::clamp_simplex_weights(std::move(prior),
                                                             "worst_case_prior")),
      detail::clamp_simplex_weights(std::move(mixture), "worst_case_prior mixture"),
      0.5 * std::abs(sol.objective - dual_obj)};
  return report;
}

/// Strategy-mixture side: maximizes the worst per-input success of a
/// mixture over affine strategies. Restricting the support to affine
/// strategies loses nothing: for every prior the overall optimum is
/// attained by an affine pair (the spectral maximum), so the restricted
/// game has the same minimax value as the unrestricted one. The worst
/// prior is read off the LP duals; agreement with worst_case_prior within
/// 1e-9 is asserted and reported as the duality gap.
inline MinimaxReport worst_case_mixture(const BooleanFunction& f) {
  detail::guard_minimax_width(f);
  const std::size_t size = f.size();
  const std::size_t strategies = 2 * size;
  const std::size_t w_col = strategies;

  LinearProgram lp;
  lp.sense = LpSense::maximize;
  lp.objective.assign(strategies + 1, 0.0);
  lp.objective[w_col] = 1.0;

  lp.rows.emplace_back(strategies + 1, 0.0);  // mixture weights sum to one
  for (std::size_t s = 0; s < strategies; ++s) lp.rows.back()[s] = 1.0;
  lp.relations.push_back(LpRelation::equal);
  lp.rhs.push_back(1.0);

  for (std::uint32_t z = 0; z < size; ++z) {  // w <= per-z mixture success
    std::vector<double> row(strategies + 1, 0.0);
    for (std::uint32_t u = 0; u < size; ++u) {
      row[u] = -affine_wins(u, 0, f, z);
      row[size + u] = -affine_wins(u, 1, f, z);
    }
    row[w_col] = 1.0;
    lp.rows.push_back(std::move(row));
    lp.relations.push_back(LpRelation::less_equal);
    lp.rhs.push_back(0.0);
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal)
    throw numerical_error("worst_case_mixture: LP did not reach an optimum");

  std::vector<double> mixture(sol.x.begin(), sol.x.begin() + strategies);
  std::vector<double> prior(size, 0.0);
  for (std::uint32_t z = 0; z < size; ++z) prior[z] = sol.dual[1 + z];

  const MinimaxReport dual_side = worst_case_prior(f);
  const double gap = std::abs(sol.objective - dual_side.worst_case_value);
  if (gap > 1e-9)
    throw numerical_error("worst_case_mixture: disagrees with the prior-side LP by " +
                          std::to_string(gap));

  MinimaxReport report{
      sol.objective,
      PriorDistribution(f.n(), detail::clamp_simplex_weights(std::move(prior),
                                                             "worst_case_mixture prior")),
      detail::clamp_simplex_weights(std::move(mixture), "worst_case_mixture"),
      gap};
  return report;
}

}  // namespace nlc
