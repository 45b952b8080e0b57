#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlc/bits.hpp"
#include "nlc/boolean_function.hpp"
#include "nlc/errors.hpp"
#include "nlc/fourier.hpp"
#include "nlc/prior.hpp"
#include "nlc/rng.hpp"

namespace nlc {

/// The strategy a_x = u.x xor delta, b_y = u.y. Realizes the best affine
/// approximation of the task when (u, delta) is chosen from the spectrum.
struct AffineStrategy {
  BitString u;
  int delta = 0;
};

/// Deterministic output tables, one bit per input, for each party.
struct StrategyPair {
  unsigned n = 1;
  std::vector<std::uint8_t> a_table;
  std::vector<std::uint8_t> b_table;
};

inline StrategyPair affine_pair(const AffineStrategy& s) {
  StrategyPair p;
  p.n = s.u.n;
  const std::size_t size = std::size_t{1} << p.n;
  p.a_table.resize(size);
  p.b_table.resize(size);
  for (std::size_t x = 0; x < size; ++x) {
    const int ux = parity_dot(s.u.value, static_cast<std::uint32_t>(x));
    p.a_table[x] = static_cast<std::uint8_t>(ux ^ (s.delta & 1));
    p.b_table[x] = static_cast<std::uint8_t>(ux);
  }
  return p;
}

/// Optimal value of a task together with the strategy achieving it.
struct TaskValueReport {
  double value = 0.5;
  AffineStrategy strategy;
  BitString spectrum_argmax;
  double coefficient = 0.0;  // signed spectrum value at the argmax
};

/// Best achievable success probability, with the witness strategy:
///   value = (1 + max_u |coeff(u)|) / 2,
/// u* the smallest argmax and delta = 1 iff coeff(u*) < 0.
inline TaskValueReport classical_optimum(const BooleanFunction& f,
                                         const PriorDistribution& prior) {
  const FourierSpectrum s = fourier_spectrum(f, prior);
  const std::uint32_t u = s.argmax_abs();
  TaskValueReport r;
  r.coefficient = s.coeff[u];
  r.value = 0.5 * (1.0 + std::abs(r.coefficient));
  r.spectrum_argmax = BitString(u, f.n());
  r.strategy = AffineStrategy{BitString(u, f.n()), r.coefficient < 0.0 ? 1 : 0};
  return r;
}

/// Upper bound on the entanglement-assisted success probability. Equal to
/// classical_optimum().value identically; it is the same spectral
/// computation, exposed separately so the equality is a testable API
/// contract.
inline double quantum_bound(const BooleanFunction& f, const PriorDistribution& prior) {
  return classical_optimum(f, prior).value;
}

/// Success probability of an affine strategy, via the spectral identity
///   value = (1 + (-1)^delta coeff(u)) / 2.
inline double affine_strategy_value(const AffineStrategy& s, const BooleanFunction& f,
                                    const PriorDistribution& prior) {
  if (s.u.n != f.n())
    throw std::invalid_argument("affine_strategy_value: width mismatch");
  const FourierSpectrum spec = fourier_spectrum(f, prior);
  const double c = spec.coeff[s.u.value];
  return 0.5 * (1.0 + (s.delta ? -c : c));
}

/// Exact average success probability of a deterministic table pair:
///   2^-n sum_{x,y} P(x xor y) [a_x xor b_y == f(x xor y)],
/// by the full double loop over (x, y). Capped at n <= 10.
inline double strategy_value_exact(const StrategyPair& s, const BooleanFunction& f,
                                   const PriorDistribution& prior) {
  if (s.n != f.n() || f.n() != prior.n())
    throw std::invalid_argument("strategy_value_exact: width mismatch");
  if (s.a_table.size() != f.size() || s.b_table.size() != f.size())
    throw std::invalid_argument("strategy_value_exact: table length mismatch");
  if (f.n() > 10)
    throw guard_error("strategy_value_exact: exact double loop capped at n <= 10, got n=" +
                      std::to_string(f.n()));
  const std::size_t size = f.size();
  double total = 0.0;
  for (std::size_t x = 0; x < size; ++x)
    for (std::size_t y = 0; y < size; ++y) {
      const std::uint32_t z = static_cast<std::uint32_t>(x ^ y);
      if ((s.a_table[x] ^ s.b_table[y]) == f(z)) total += prior(z);
    }
  return total / static_cast<double>(size);
}

struct BruteForceResult {
  double value = 0.0;
  StrategyPair best;
};

/// Exhaustive classical optimum over deterministic strategies. For each of
/// the 2^{2^n} Alice tables the Bob table is optimized in closed form (each
/// b_y independently picks the heavier conditional success weight), so the
/// cost is O(2^{2^n} 4^n). Capped at n <= 3. Ties resolve toward the
/// smallest Alice table integer, then b_y = 0.
inline BruteForceResult brute_force_optimum(const BooleanFunction& f,
                                            const PriorDistribution& prior) {
  if (f.n() != prior.n())
    throw std::invalid_argument("brute_force_optimum: width mismatch");
  if (f.n() > 3)
    throw guard_error("brute_force_optimum: exhaustive search capped at n <= 3, got n=" +
                      std::to_string(f.n()));
  const std::size_t size = f.size();
  const std::uint64_t tables = std::uint64_t{1} << size;

  BruteForceResult out;
  out.value = -1.0;
  for (std::uint64_t bits = 0; bits < tables; ++bits) {
    std::vector<std::uint8_t> a(size), b(size);
    for (std::size_t x = 0; x < size; ++x) a[x] = (bits >> x) & 1u;
    double total = 0.0;
    for (std::size_t y = 0; y < size; ++y) {
      double stay = 0.0, flip = 0.0;  // b_y = 0 vs b_y = 1
      for (std::size_t x = 0; x < size; ++x) {
        const std::uint32_t z = static_cast<std::uint32_t>(x ^ y);
        (a[x] == f(z) ? stay : flip) += prior(z);
      }
      b[y] = flip > stay ? 1 : 0;
      total += b[y] ? flip : stay;
    }
    total /= static_cast<double>(size);
    if (total > out.value) {
      out.value = total;
      out.best = StrategyPair{f.n(), std::move(a), std::move(b)};
    }
  }
  return out;
}

/// Output tables for m parties whose input shares XOR to the task input:
/// party 0 outputs u.x xor delta, parties 1..m-1 output u.x. The XOR of
/// all outputs equals u.z xor delta on every consistent split.
inline std::vector<std::vector<std::uint8_t>> multiparty_strategy(unsigned m, BitString u,
                                                                  int delta) {
  if (m < 2)
    throw std::invalid_argument("multiparty_strategy: need at least 2 parties, got " +
                                std::to_string(m));
  const std::size_t size = std::size_t{1} << u.n;
  std::vector<std::vector<std::uint8_t>> tables(m, std::vector<std::uint8_t>(size));
  for (std::size_t x = 0; x < size; ++x) {
    const std::uint8_t ux =
        static_cast<std::uint8_t>(parity_dot(u.value, static_cast<std::uint32_t>(x)));
    tables[0][x] = static_cast<std::uint8_t>(ux ^ (delta & 1));
    for (unsigned i = 1; i < m; ++i) tables[i][x] = ux;
  }
  return tables;
}

/// Exact m-party success: every split of z into m XOR shares is equally
/// probable, weighted by the prior on z. The sum has 2^{nm} terms, so the
/// caps are m <= 4 and n <= 3.
inline double multiparty_value_exact(const std::vector<std::vector<std::uint8_t>>& tables,
                                     const BooleanFunction& f, const PriorDistribution& prior,
                                     unsigned m) {
  if (m < 2) throw std::invalid_argument("multiparty_value_exact: need at least 2 parties");
  if (tables.size() != m)
    throw std::invalid_argument("multiparty_value_exact: expected " + std::to_string(m) +
                                " tables, got " + std::to_string(tables.size()));
  if (f.n() != prior.n())
    throw std::invalid_argument("multiparty_value_exact: width mismatch");
  if (m > 4 || f.n() > 3)
    throw guard_error("multiparty_value_exact: exact sum capped at m <= 4 and n <= 3, got m=" +
                      std::to_string(m) + ", n=" + std::to_string(f.n()));
  const std::size_t size = f.size();
  for (const auto& t : tables)
    if (t.size() != size)
      throw std::invalid_argument("multiparty_value_exact: table length mismatch");

  const std::size_t splits = std::size_t{1} << (f.n() * (m - 1));
  double total = 0.0;
  for (std::size_t z = 0; z < size; ++z) {
    if (prior(static_cast<std::uint32_t>(z)) == 0.0) continue;
    std::size_t good = 0;
    for (std::size_t rest = 0; rest < splits; ++rest) {
      // Shares 1..m-1 are the n-bit slices of rest; share 0 fixes the XOR.
      std::uint32_t x0 = static_cast<std::uint32_t>(z);
      int parity = 0;
      for (unsigned i = 1; i < m; ++i) {
        const std::uint32_t xi =
            static_cast<std::uint32_t>((rest >> (f.n() * (i - 1))) & (size - 1));
        x0 ^= xi;
        parity ^= tables[i][xi];
      }
      parity ^= tables[0][x0];
      if (parity == f(static_cast<std::uint32_t>(z))) ++good;
    }
    total += prior(static_cast<std::uint32_t>(z)) * static_cast<double>(good) /
             static_cast<double>(splits);
  }
  return total;
}

/// m uniformly random shares subject to XOR = z: the first m-1 are drawn
/// uniformly, the last is fixed by the XOR constraint.
inline std::vector<BitString> split_input(BitString z, unsigned m, SplitMix64& rng) {
  if (m < 2) throw std::invalid_argument("split_input: need at least 2 shares");
  std::vector<BitString> shares;
  shares.reserve(m);
  std::uint32_t acc = z.value;
  for (unsigned i = 0; i + 1 < m; ++i) {
    const std::uint32_t xi = rng.next_bits(z.n);
    shares.emplace_back(xi, z.n);
    acc ^= xi;
  }
  shares.emplace_back(acc, z.n);
  return shares;
}

}  // namespace nlc
