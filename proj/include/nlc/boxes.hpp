#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nlc/bits.hpp"
#include "nlc/boolean_function.hpp"
#include "nlc/errors.hpp"
#include "nlc/prior.hpp"
#include "nlc/rng.hpp"
#include "nlc/value.hpp"

namespace nlc {

/// A bipartite correlation box: the conditional distribution P(a, b | x, y)
/// with single-bit outputs and bit-string inputs of widths nx, ny. Boxes
/// are immutable once built; sampling takes an explicit generator.
class CorrelationBox {
 public:
  CorrelationBox(unsigned nx, unsigned ny) : nx_(nx), ny_(ny) {
    if (nx < 1 || nx > kMaxWidth || ny < 1 || ny > kMaxWidth)
      throw std::invalid_argument("CorrelationBox widths must be in [1, " +
                                  std::to_string(kMaxWidth) + "]");
    p_.assign((std::size_t{4} << nx) << ny, 0.0);
  }

  unsigned nx() const { return nx_; }
  unsigned ny() const { return ny_; }
  std::size_t x_count() const { return std::size_t{1} << nx_; }
  std::size_t y_count() const { return std::size_t{1} << ny_; }

  double prob(std::uint32_t x, std::uint32_t y, int a, int b) const {
    return p_[index(x, y, a, b)];
  }
  double& prob(std::uint32_t x, std::uint32_t y, int a, int b) {
    return p_[index(x, y, a, b)];
  }

  /// Checks nonnegativity and per-(x, y) normalization.
  bool is_valid(double tol = 1e-12) const {
    for (double v : p_)
      if (!(v >= 0.0)) return false;
    for (std::uint32_t x = 0; x < x_count(); ++x)
      for (std::uint32_t y = 0; y < y_count(); ++y) {
        const double s =
            prob(x, y, 0, 0) + prob(x, y, 0, 1) + prob(x, y, 1, 0) + prob(x, y, 1, 1);
        if (std::abs(s - 1.0) > tol) return false;
      }
    return true;
  }

  void validate(double tol = 1e-12) const {
    if (!is_valid(tol))
      throw std::invalid_argument("correlation box is not a valid conditional distribution");
  }

 private:
  std::size_t index(std::uint32_t x, std::uint32_t y, int a, int b) const {
    return ((static_cast<std::size_t>(x) << ny_ | y) << 2) |
           (static_cast<std::size_t>(a & 1) << 1) | static_cast<std::size_t>(b & 1);
  }

  unsigned nx_, ny_;
  std::vector<double> p_;
};

/// The box with a xor b = x y on single-bit inputs and uniform marginals.
inline CorrelationBox pr_box() {
  CorrelationBox box(1, 1);
  for (std::uint32_t x = 0; x < 2; ++x)
    for (std::uint32_t y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == static_cast<int>(x & y)) box.prob(x, y, a, b) = 0.5;
  return box;
}

/// Mixture p * PR + (1 - p) * anti-PR (a xor b = x y xor 1). Marginals stay
/// uniform for every p; the box wins the a xor b = x y task with
/// probability exactly p.
inline CorrelationBox noisy_pr_box(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("noisy_pr_box: p must lie in [0, 1], got " + std::to_string(p));
  CorrelationBox box(1, 1);
  for (std::uint32_t x = 0; x < 2; ++x)
    for (std::uint32_t y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          box.prob(x, y, a, b) = ((a ^ b) == static_cast<int>(x & y)) ? p / 2 : (1 - p) / 2;
  return box;
}

/// The generalized correlation that computes f perfectly: both output pairs
/// with a xor b = f(x xor y) occur with probability 1/2, so each party sees
/// a uniformly random bit and the box is non-signalling by construction.
inline CorrelationBox perfect_nlc_box(const BooleanFunction& f) {
  CorrelationBox box(f.n(), f.n());
  for (std::uint32_t x = 0; x < box.x_count(); ++x)
    for (std::uint32_t y = 0; y < box.y_count(); ++y) {
      const int c = f(x ^ y);
      box.prob(x, y, 0, c) = 0.5;
      box.prob(x, y, 1, c ^ 1) = 0.5;
    }
  return box;
}

/// True iff each party's output marginal is independent of the other
/// party's input, within tol.
inline bool is_nonsignalling(const CorrelationBox& box, double tol = 1e-9) {
  for (std::uint32_t x = 0; x < box.x_count(); ++x)
    for (int a = 0; a < 2; ++a) {
      const double ref = box.prob(x, 0, a, 0) + box.prob(x, 0, a, 1);
      for (std::uint32_t y = 1; y < box.y_count(); ++y) {
        const double m = box.prob(x, y, a, 0) + box.prob(x, y, a, 1);
        if (std::abs(m - ref) > tol) return false;
      }
    }
  for (std::uint32_t y = 0; y < box.y_count(); ++y)
    for (int b = 0; b < 2; ++b) {
      const double ref = box.prob(0, y, 0, b) + box.prob(0, y, 1, b);
      for (std::uint32_t x = 1; x < box.x_count(); ++x) {
        const double m = box.prob(x, y, 0, b) + box.prob(x, y, 1, b);
        if (std::abs(m - ref) > tol) return false;
      }
    }
  return true;
}

/// True iff both local outputs are unbiased coins for every input pair.
inline bool marginals_uniform(const CorrelationBox& box, double tol = 1e-9) {
  for (std::uint32_t x = 0; x < box.x_count(); ++x)
    for (std::uint32_t y = 0; y < box.y_count(); ++y) {
      const double pa0 = box.prob(x, y, 0, 0) + box.prob(x, y, 0, 1);
      const double pb0 = box.prob(x, y, 0, 0) + box.prob(x, y, 1, 0);
      if (std::abs(pa0 - 0.5) > tol || std::abs(pb0 - 0.5) > tol) return false;
    }
  return true;
}

/// Exact success probability of a box on a task:
///   sum_{x,y} 2^-n P(x xor y) sum_{a xor b = f(x xor y)} P(a, b | x, y).
inline double box_success_exact(const CorrelationBox& box, const BooleanFunction& f,
                                const PriorDistribution& prior) {
  if (box.nx() != f.n() || box.ny() != f.n() || f.n() != prior.n())
    throw std::invalid_argument("box_success_exact: width mismatch");
  const double scale = std::ldexp(1.0, -static_cast<int>(f.n()));
  double total = 0.0;
  for (std::uint32_t x = 0; x < box.x_count(); ++x)
    for (std::uint32_t y = 0; y < box.y_count(); ++y) {
      const int c = f(x ^ y);
      total += scale * prior(x ^ y) * (box.prob(x, y, 0, c) + box.prob(x, y, 1, c ^ 1));
    }
  return total;
}

/// One constituent box of a protocol with its input wiring. Wires map a
/// party's full input to that box's input for the same party only, so the
/// protocol stays local by construction.
struct BoxWiring {
  CorrelationBox box;
  std::vector<std::uint32_t> alice_wire;  // indexed by x, values < 2^box.nx
  std::vector<std::uint32_t> bob_wire;    // indexed by y, values < 2^box.ny
};

/// Local pre/post-processing around a set of independent boxes: each party
/// feeds wired inputs to its side of every box and outputs a base table
/// value XORed with all of its box outputs.
struct BoxProtocol {
  std::string description;
  unsigned nx = 1, ny = 1;
  std::vector<std::uint8_t> alice_base;  // indexed by x
  std::vector<std::uint8_t> bob_base;    // indexed by y
  std::vector<BoxWiring> boxes;

  void validate() const {
    const std::size_t X = std::size_t{1} << nx, Y = std::size_t{1} << ny;
    if (alice_base.size() != X || bob_base.size() != Y)
      throw std::invalid_argument("BoxProtocol: base table length mismatch");
    for (const auto& w : boxes) {
      w.box.validate();
      if (w.alice_wire.size() != X || w.bob_wire.size() != Y)
        throw std::invalid_argument("BoxProtocol: wire table length mismatch");
      for (std::uint32_t v : w.alice_wire)
        if (v >= w.box.x_count())
          throw std::invalid_argument("BoxProtocol: Alice wire value out of range");
      for (std::uint32_t v : w.bob_wire)
        if (v >= w.box.y_count())
          throw std::invalid_argument("BoxProtocol: Bob wire value out of range");
    }
  }
};

/// A protocol with no boxes: plain deterministic tables.
inline BoxProtocol protocol_from_tables(const StrategyPair& s) {
  BoxProtocol p;
  p.description = "local tables only";
  p.nx = p.ny = s.n;
  p.alice_base = s.a_table;
  p.bob_base = s.b_table;
  return p;
}

/// The two-box protocol for the distributed AND of two bits:
///   a = x1 x2 xor a1 xor a2,  b = y1 y2 xor b1 xor b2,
/// where box 1 is fed (x1, y2) and box 2 is fed (x2, y1). The two cross
/// terms of (x1 xor y1)(x2 xor y2) are exactly the tasks handed to the
/// boxes, so perfect PR boxes make the protocol exact.
inline BoxProtocol and_protocol_from_two_boxes(const CorrelationBox& box1,
                                               const CorrelationBox& box2) {
  if (box1.nx() != 1 || box1.ny() != 1 || box2.nx() != 1 || box2.ny() != 1)
    throw std::invalid_argument("and_protocol_from_two_boxes: boxes must have single-bit inputs");
  BoxProtocol p;
  p.description = "a = x1*x2 xor a1 xor a2, b = y1*y2 xor b1 xor b2; box1 <- (x1, y2), box2 <- (x2, y1)";
  p.nx = p.ny = 2;
  p.alice_base = {0, 0, 0, 1};  // x1 * x2 with x = x1 x2 (first bit most significant)
  p.bob_base = {0, 0, 0, 1};
  BoxWiring w1{box1, {0, 0, 1, 1}, {0, 1, 0, 1}};  // x1 and y2
  BoxWiring w2{box2, {0, 1, 0, 1}, {0, 0, 1, 1}};  // x2 and y1
  p.boxes.push_back(std::move(w1));
  p.boxes.push_back(std::move(w2));
  return p;
}

/// Exact protocol success on a task, summing over every combination of box
/// outcomes for every input pair. The term count 4^{#boxes} 2^{nx+ny} is
/// capped at 2^24.
inline double protocol_success_exact(const BoxProtocol& p, const BooleanFunction& f,
                                     const PriorDistribution& prior) {
  p.validate();
  if (p.nx != f.n() || p.ny != f.n() || f.n() != prior.n())
    throw std::invalid_argument("protocol_success_exact: width mismatch");
  const std::size_t X = std::size_t{1} << p.nx, Y = std::size_t{1} << p.ny;
  const std::size_t combos = std::size_t{1} << (2 * p.boxes.size());
  if (combos * X * Y > (std::size_t{1} << 24))
    throw guard_error("protocol_success_exact: enumeration capped at 2^24 terms");

  const double scale = std::ldexp(1.0, -static_cast<int>(f.n()));
  double total = 0.0;
  for (std::uint32_t x = 0; x < X; ++x)
    for (std::uint32_t y = 0; y < Y; ++y) {
      const int want = f(x ^ y);
      double win = 0.0;
      for (std::size_t combo = 0; combo < combos; ++combo) {
        double weight = 1.0;
        int a = p.alice_base[x], b = p.bob_base[y];
        for (std::size_t k = 0; k < p.boxes.size() && weight > 0.0; ++k) {
          const int ak = (combo >> (2 * k)) & 1;
          const int bk = (combo >> (2 * k + 1)) & 1;
          weight *= p.boxes[k].box.prob(p.boxes[k].alice_wire[x], p.boxes[k].bob_wire[y], ak, bk);
          a ^= ak;
          b ^= bk;
        }
        if (weight > 0.0 && (a ^ b) == want) win += weight;
      }
      total += scale * prior(x ^ y) * win;
    }
  return total;
}

/// Draws one outcome pair from P(., . | x, y).
inline std::pair<int, int> sample_box(const CorrelationBox& box, std::uint32_t x,
                                      std::uint32_t y, SplitMix64& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      acc += box.prob(x, y, a, b);
      if (u < acc) return {a, b};
    }
  return {1, 1};
}

/// Runs a protocol once on inputs (x, y), sampling each box independently.
inline std::pair<int, int> run_protocol(const BoxProtocol& p, std::uint32_t x, std::uint32_t y,
                                        SplitMix64& rng) {
  int a = p.alice_base[x], b = p.bob_base[y];
  for (const auto& w : p.boxes) {
    const auto [ak, bk] = sample_box(w.box, w.alice_wire[x], w.bob_wire[y], rng);
    a ^= ak;
    b ^= bk;
  }
  return {a, b};
}

struct MonteCarloResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  long long trials = 0;
};

namespace detail {

template <typename RunOnce>
MonteCarloResult monte_carlo_impl(const BooleanFunction& f, const PriorDistribution& prior,
                                  long long trials, std::uint64_t seed, RunOnce&& run) {
  if (trials < 1) throw std::invalid_argument("monte_carlo_success: need at least one trial");
  SplitMix64 rng(seed);
  long long wins = 0;
  for (long long t = 0; t < trials; ++t) {
    const std::uint32_t z = prior.sample(rng);
    const std::uint32_t x = rng.next_bits(f.n());
    const std::uint32_t y = z ^ x;
    const auto [a, b] = run(x, y, rng);
    if ((a ^ b) == f(z)) ++wins;
  }
  MonteCarloResult r;
  r.trials = trials;
  r.estimate = static_cast<double>(wins) / static_cast<double>(trials);
  r.standard_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(trials));
  return r;
}

}  // namespace detail

/// Samples z from the prior, splits it uniformly, runs the box, and counts
/// wins. Standard error is sqrt(p(1-p)/N).
inline MonteCarloResult monte_carlo_success(const CorrelationBox& box, const BooleanFunction& f,
                                            const PriorDistribution& prior, long long trials,
                                            std::uint64_t seed) {
  if (box.nx() != f.n() || box.ny() != f.n() || f.n() != prior.n())
    throw std::invalid_argument("monte_carlo_success: width mismatch");
  return detail::monte_carlo_impl(f, prior, trials, seed,
                                  [&](std::uint32_t x, std::uint32_t y, SplitMix64& rng) {
                                    return sample_box(box, x, y, rng);
                                  });
}

inline MonteCarloResult monte_carlo_success(const BoxProtocol& p, const BooleanFunction& f,
                                            const PriorDistribution& prior, long long trials,
                                            std::uint64_t seed) {
  p.validate();
  if (p.nx != f.n() || p.ny != f.n() || f.n() != prior.n())
    throw std::invalid_argument("monte_carlo_success: width mismatch");
  return detail::monte_carlo_impl(f, prior, trials, seed,
                                  [&](std::uint32_t x, std::uint32_t y, SplitMix64& rng) {
                                    return run_protocol(p, x, y, rng);
                                  });
}

/// Convex mixture of two boxes of matching shape.
inline CorrelationBox mix_boxes(const CorrelationBox& lhs, const CorrelationBox& rhs,
                                double weight) {
  if (lhs.nx() != rhs.nx() || lhs.ny() != rhs.ny())
    throw std::invalid_argument("mix_boxes: shape mismatch");
  if (!(weight >= 0.0 && weight <= 1.0))
    throw std::invalid_argument("mix_boxes: weight must lie in [0, 1]");
  CorrelationBox out(lhs.nx(), lhs.ny());
  for (std::uint32_t x = 0; x < out.x_count(); ++x)
    for (std::uint32_t y = 0; y < out.y_count(); ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          out.prob(x, y, a, b) =
              weight * lhs.prob(x, y, a, b) + (1.0 - weight) * rhs.prob(x, y, a, b);
  return out;
}

}  // namespace nlc
