#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nlc/bits.hpp"
#include "nlc/boolean_function.hpp"
#include "nlc/errors.hpp"
#include "nlc/fourier.hpp"
#include "nlc/prior.hpp"
#include "nlc/rng.hpp"
#include "nlc/value.hpp"

namespace nlc {

namespace detail {

inline bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline unsigned log2_exact(std::size_t v) {
  unsigned n = 0;
  while ((std::size_t{1} << n) < v) ++n;
  return n;
}

}  // namespace detail

/// A real matrix of signed weights G(x, y) describing an XOR game / Bell
/// expression. The bias of a strategy is sum_{x,y} G(x,y) <A_x B_y> with
/// |<A_x B_y>| <= 1, so |bias| <= sum |G|. Row and column counts are powers
/// of two (at least 2) so that inputs are bit strings of widths nx, ny;
/// the matrix need not be square.
class GameMatrix {
 public:
  GameMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (!detail::is_pow2(rows) || !detail::is_pow2(cols) || rows < 2 || cols < 2)
      throw std::invalid_argument("GameMatrix dimensions must be powers of two >= 2, got " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
    if (rows > (std::size_t{1} << kMaxWidth) || cols > (std::size_t{1} << kMaxWidth) ||
        rows * cols > (std::size_t{1} << 24))
      throw guard_error("GameMatrix capped at 2^24 entries, got " + std::to_string(rows) +
                        "x" + std::to_string(cols));
    a_.assign(rows * cols, 0.0);
  }

  static GameMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("GameMatrix: no rows");
    GameMatrix g(rows.size(), rows.front().size());
    for (std::size_t x = 0; x < rows.size(); ++x) {
      if (rows[x].size() != g.cols())
        throw std::invalid_argument("GameMatrix: ragged rows");
      for (std::size_t y = 0; y < g.cols(); ++y) g(x, y) = rows[x][y];
    }
    return g;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  unsigned nx() const { return detail::log2_exact(rows_); }
  unsigned ny() const { return detail::log2_exact(cols_); }

  double operator()(std::size_t x, std::size_t y) const { return a_[x * cols_ + y]; }
  double& operator()(std::size_t x, std::size_t y) { return a_[x * cols_ + y]; }

  double abs_sum() const {
    double s = 0.0;
    for (double v : a_) s += std::abs(v);
    return s;
  }

  bool is_zero() const {
    for (double v : a_)
      if (v != 0.0) return false;
    return true;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;  // row-major
};

/// Game matrix of a nonlocal computation task:
///   G(x, y) = 2^-n (-1)^{f(x xor y)} P(x xor y).
/// The 2^-n normalization makes sum |G| = 1, so the task value is
/// (1 + bias) / 2 for every resource class.
inline GameMatrix game_from_nlc(const BooleanFunction& f, const PriorDistribution& prior) {
  if (f.n() != prior.n())
    throw std::invalid_argument("game_from_nlc: width mismatch");
  const std::size_t size = f.size();
  GameMatrix g(size, size);
  const double scale = std::ldexp(1.0, -static_cast<int>(f.n()));
  for (std::size_t x = 0; x < size; ++x)
    for (std::size_t y = 0; y < size; ++y) {
      const std::uint32_t z = static_cast<std::uint32_t>(x ^ y);
      const double w = scale * prior(z);
      g(x, y) = f(z) ? -w : w;
    }
  return g;
}

struct ClassicalBiasResult {
  double bias = 0.0;
  std::vector<int> a, b;  // optimal signs, one +-1 entry per input
};

/// Exact best classical bias max_{a,b in {+-1}} sum_{x,y} a_x G(x,y) b_y.
/// For each sign vector a the optimal b_y is the sign of the inner sum, so
/// the bias is max_a sum_y |sum_x a_x G(x,y)|; the global flip symmetry
/// fixes a_0 = +1 and the remaining 2^{|X|-1} vectors are enumerated.
/// Capped at |X| <= 16.
inline ClassicalBiasResult classical_bias(const GameMatrix& g) {
  if (g.rows() > 16)
    throw guard_error("classical_bias: enumeration capped at |X| <= 16 rows, got " +
                      std::to_string(g.rows()));
  const std::size_t X = g.rows(), Y = g.cols();
  ClassicalBiasResult best;
  best.bias = -1.0;
  std::vector<double> col(Y);
  for (std::uint32_t mask = 0; mask < (1u << (X - 1)); ++mask) {
    for (std::size_t y = 0; y < Y; ++y) {
      double s = g(0, y);  // a_0 fixed to +1
      for (std::size_t x = 1; x < X; ++x) {
        const double v = g(x, y);
        s += ((mask >> (x - 1)) & 1u) ? -v : v;
      }
      col[y] = s;
    }
    double bias = 0.0;
    for (double s : col) bias += std::abs(s);
    if (bias > best.bias) {
      best.bias = bias;
      best.a.assign(X, 1);
      for (std::size_t x = 1; x < X; ++x)
        best.a[x] = ((mask >> (x - 1)) & 1u) ? -1 : 1;
      best.b.resize(Y);
      for (std::size_t y = 0; y < Y; ++y) best.b[y] = col[y] >= 0.0 ? 1 : -1;
    }
  }
  return best;
}

/// Largest singular value by power iteration on the Gram matrix of the
/// smaller side, with a deterministic schedule of start vectors (the max
/// over runs is returned; every Rayleigh estimate is a valid lower bound,
/// so mixing runs never overshoots). Only the value is exposed; degenerate
/// top subspaces are therefore harmless.
inline double top_singular_value(const GameMatrix& g, double tol = 1e-12,
                                 int max_iters = 100000) {
  if (g.is_zero()) return 0.0;
  const bool use_cols = g.cols() <= g.rows();
  const std::size_t d = use_cols ? g.cols() : g.rows();

  // Gram matrix: G^T G (size cols^2) or G G^T (size rows^2).
  std::vector<double> gram(d * d, 0.0);
  const std::size_t other = use_cols ? g.rows() : g.cols();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < other; ++k)
        s += use_cols ? g(k, i) * g(k, j) : g(i, k) * g(j, k);
      gram[i * d + j] = s;
      gram[j * d + i] = s;
    }

  const auto matvec = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += gram[i * d + j] * v[j];
      out[i] = s;
    }
  };

  std::vector<std::vector<double>> starts;
  starts.emplace_back(d, 1.0);
  {
    std::vector<double> ramp(d);
    for (std::size_t i = 0; i < d; ++i) ramp[i] = static_cast<double>(i + 1);
    starts.push_back(std::move(ramp));
    std::vector<double> e0(d, 0.0);
    e0[0] = 1.0;
    starts.push_back(std::move(e0));
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      SplitMix64 rng(0x5eed5000 + seed);
      std::vector<double> r(d);
      for (double& v : r) v = 2.0 * rng.next_double() - 1.0;
      starts.push_back(std::move(r));
    }
  }

  double best = 0.0;
  bool any_converged = false;
  int total_iters = 0;
  double last_change = 0.0;
  for (auto& v : starts) {
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (double& c : v) c /= norm;

    std::vector<double> w(d);
    double lambda = 0.0;
    int settled = 0;
    bool converged = false;
    for (int it = 0; it < max_iters; ++it) {
      ++total_iters;
      matvec(v, w);
      double rayleigh = 0.0, wnorm = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        rayleigh += v[i] * w[i];
        wnorm += w[i] * w[i];
      }
      wnorm = std::sqrt(wnorm);
      if (wnorm == 0.0) {  // start lies in the kernel
        lambda = 0.0;
        converged = true;
        break;
      }
      for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / wnorm;
      last_change = std::abs(rayleigh - lambda);
      const bool small = last_change <= tol * std::max(std::abs(rayleigh), 1e-300);
      lambda = rayleigh;
      settled = small ? settled + 1 : 0;
      if (settled >= 2) {
        converged = true;
        break;
      }
    }
    best = std::max(best, lambda);
    any_converged = any_converged || converged;
  }
  if (!any_converged)
    throw numerical_error("top_singular_value: power iteration did not converge (" +
                          std::to_string(total_iters) + " iterations over " +
                          std::to_string(starts.size()) + " starts, last change " +
                          std::to_string(last_change) + ", tol " + std::to_string(tol) + ")");
  return std::sqrt(std::max(best, 0.0));
}

/// Upper bound on the quantum bias: sqrt(|X| |Y|) sigma_max(G).
inline double norm_bound_bias(const GameMatrix& g) {
  return std::sqrt(static_cast<double>(g.rows()) * static_cast<double>(g.cols())) *
         top_singular_value(g);
}

struct HadamardBiasResult {
  double bias = 0.0;
  BitString u, v;
};

/// Best bias over Hadamard sign vectors:
///   max_{u,v} |sum_{x,y} (-1)^{u.x + v.y} G(x,y)|,
/// by a two-sided fast Walsh-Hadamard transform of G. Smallest (u, v) on
/// ties, ordered by u then v.
inline HadamardBiasResult hadamard_bias(const GameMatrix& g) {
  const std::size_t X = g.rows(), Y = g.cols();
  std::vector<double> m(X * Y);
  for (std::size_t x = 0; x < X; ++x)
    for (std::size_t y = 0; y < Y; ++y) m[x * Y + y] = g(x, y);

  std::vector<double> buf;
  buf.resize(std::max(X, Y));
  for (std::size_t x = 0; x < X; ++x) {  // transform along y
    buf.assign(m.begin() + x * Y, m.begin() + (x + 1) * Y);
    buf.resize(Y);
    fwht_inplace(buf);
    std::copy(buf.begin(), buf.end(), m.begin() + x * Y);
  }
  for (std::size_t y = 0; y < Y; ++y) {  // transform along x
    buf.resize(X);
    for (std::size_t x = 0; x < X; ++x) buf[x] = m[x * Y + y];
    fwht_inplace(buf);
    for (std::size_t x = 0; x < X; ++x) m[x * Y + y] = buf[x];
  }

  HadamardBiasResult best;
  best.bias = -1.0;
  for (std::size_t u = 0; u < X; ++u)
    for (std::size_t v = 0; v < Y; ++v) {
      const double b = std::abs(m[u * Y + v]);
      if (b > best.bias) {
        best.bias = b;
        best.u = BitString(static_cast<std::uint32_t>(u), g.nx());
        best.v = BitString(static_cast<std::uint32_t>(v), g.ny());
      }
    }
  return best;
}

/// Certificate that quantum resources give no advantage for a game: passes
/// iff the best Hadamard pair already attains the operator-norm bound, in
/// which case classical bias = quantum bias (the Hadamard value lower-bounds
/// the classical bias, which the norm bound upper-bounds). The comparison is
/// between scalar biases, so a degenerate top singular subspace cannot
/// produce a false verdict.
struct CertificateReport {
  double hadamard_bias = 0.0;
  double norm_bound_bias = 0.0;
  bool passes = false;
  BitString witness_u, witness_v;
};

inline CertificateReport no_advantage_certificate(const GameMatrix& g, double tol = 1e-7) {
  const HadamardBiasResult h = hadamard_bias(g);
  CertificateReport r;
  r.hadamard_bias = h.bias;
  r.norm_bound_bias = norm_bound_bias(g);
  r.passes = h.bias >= r.norm_bound_bias - tol;
  r.witness_u = h.u;
  r.witness_v = h.v;
  return r;
}

/// One unit vector per input for each party; the bias of the strategy is
/// sum_{x,y} G(x,y) <u_x, v_y>.
struct VectorStrategy {
  std::vector<std::vector<double>> alice, bob;
};

struct SeesawOptions {
  int d = 0;  // 0 picks min(|X|, |Y|)
  int restarts = 16;
  int max_iters = 10000;
  std::uint64_t seed = 0;
};

struct SeesawResult {
  double bias = 0.0;
  VectorStrategy strategy;
  int best_restart = 0;
  std::vector<double> trace;  // bias after each sweep of the winning restart
};

/// Lower bound on the quantum bias by alternating maximization over unit
/// vectors: u_x <- normalize(sum_y G(x,y) v_y) and symmetrically, each
/// sweep non-decreasing, until the improvement drops below 1e-10. Restart 0
/// starts from the optimal classical sign assignment embedded on the first
/// coordinate (so the result is never below the classical bias); the rest
/// start from seeded random directions. Best bias wins, lowest restart
/// index on ties. No claim of global optimality.
inline SeesawResult seesaw_quantum_bias(const GameMatrix& g, const SeesawOptions& opts = {}) {
  const std::size_t X = g.rows(), Y = g.cols();
  const std::size_t d = opts.d == 0 ? std::min(X, Y) : static_cast<std::size_t>(opts.d);
  if (opts.d < 0 || d < 1)
    throw std::invalid_argument("seesaw_quantum_bias: dimension must be >= 1");

  SplitMix64 rng(opts.seed);
  const auto gauss = [&rng] {
    const double u1 = 1.0 - rng.next_double();  // (0, 1]
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  };

  const auto bias_of = [&](const VectorStrategy& s) {
    double b = 0.0;
    for (std::size_t x = 0; x < X; ++x)
      for (std::size_t y = 0; y < Y; ++y) {
        double dot = 0.0;
        for (std::size_t k = 0; k < d; ++k) dot += s.alice[x][k] * s.bob[y][k];
        b += g(x, y) * dot;
      }
    return b;
  };

  SeesawResult best;
  best.bias = -std::numeric_limits<double>::infinity();
  std::vector<double> acc(d);
  for (int restart = 0; restart < std::max(opts.restarts, 1); ++restart) {
    VectorStrategy s;
    s.alice.assign(X, std::vector<double>(d, 0.0));
    s.bob.assign(Y, std::vector<double>(d, 0.0));
    if (restart == 0 && X <= 16) {
      const ClassicalBiasResult c = classical_bias(g);
      for (std::size_t x = 0; x < X; ++x) s.alice[x][0] = c.a[x];
      for (std::size_t y = 0; y < Y; ++y) s.bob[y][0] = c.b[y];
    } else {
      for (auto& v : s.alice) {
        double norm = 0.0;
        for (double& c : v) {
          c = gauss();
          norm += c * c;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) v[0] = 1.0;
        else
          for (double& c : v) c /= norm;
      }
      for (auto& v : s.bob) {
        double norm = 0.0;
        for (double& c : v) {
          c = gauss();
          norm += c * c;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) v[0] = 1.0;
        else
          for (double& c : v) c /= norm;
      }
    }

    std::vector<double> trace;
    double bias = bias_of(s);
    trace.push_back(bias);
    for (int it = 0; it < opts.max_iters; ++it) {
      for (std::size_t x = 0; x < X; ++x) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t y = 0; y < Y; ++y) {
          const double w = g(x, y);
          if (w == 0.0) continue;
          for (std::size_t k = 0; k < d; ++k) acc[k] += w * s.bob[y][k];
        }
        double norm = 0.0;
        for (double c : acc) norm += c * c;
        norm = std::sqrt(norm);
        if (norm > 0.0)
          for (std::size_t k = 0; k < d; ++k) s.alice[x][k] = acc[k] / norm;
      }
      for (std::size_t y = 0; y < Y; ++y) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t x = 0; x < X; ++x) {
          const double w = g(x, y);
          if (w == 0.0) continue;
          for (std::size_t k = 0; k < d; ++k) acc[k] += w * s.alice[x][k];
        }
        double norm = 0.0;
        for (double c : acc) norm += c * c;
        norm = std::sqrt(norm);
        if (norm > 0.0)
          for (std::size_t k = 0; k < d; ++k) s.bob[y][k] = acc[k] / norm;
      }
      const double next = bias_of(s);
      trace.push_back(next);
      const double improvement = next - bias;
      bias = next;
      if (improvement < 1e-10) break;
    }

    if (bias > best.bias) {
      best.bias = bias;
      best.strategy = std::move(s);
      best.best_restart = restart;
      best.trace = std::move(trace);
    }
  }
  return best;
}

/// Bell-type inequality induced by a task: for all +-1 observables,
///   sum_{x,y} C(x,y) <A_x B_y> <= K
/// with C(x,y) = (-1)^{f(x xor y)} P(x xor y) and K = 2^n (2 P_C - 1).
/// The optimal affine strategy saturates the bound.
struct BellInequality {
  unsigned n = 1;
  std::vector<double> C;  // row-major 2^n x 2^n
  double K = 0.0;
};

inline BellInequality bell_inequality(const BooleanFunction& f, const PriorDistribution& prior) {
  if (f.n() != prior.n())
    throw std::invalid_argument("bell_inequality: width mismatch");
  if (f.n() > 12)
    throw guard_error("bell_inequality: dense coefficient matrix capped at n <= 12, got n=" +
                      std::to_string(f.n()));
  const std::size_t size = f.size();
  BellInequality bell;
  bell.n = f.n();
  bell.C.resize(size * size);
  for (std::size_t x = 0; x < size; ++x)
    for (std::size_t y = 0; y < size; ++y) {
      const std::uint32_t z = static_cast<std::uint32_t>(x ^ y);
      const double w = prior(z);
      bell.C[x * size + y] = f(z) ? -w : w;
    }
  const TaskValueReport opt = classical_optimum(f, prior);
  bell.K = std::ldexp(2.0 * opt.value - 1.0, static_cast<int>(f.n()));

  // The optimal affine strategy must saturate the bound exactly.
  const StrategyPair tables = affine_pair(opt.strategy);
  double reached = 0.0;
  for (std::size_t x = 0; x < size; ++x)
    for (std::size_t y = 0; y < size; ++y) {
      const int sign = (tables.a_table[x] ^ tables.b_table[y]) ? -1 : 1;
      reached += sign * bell.C[x * size + y];
    }
  if (std::abs(reached - bell.K) > 1e-9)
    throw numerical_error("bell_inequality: optimal strategy reaches " +
                          std::to_string(reached) + " against bound " + std::to_string(bell.K));
  return bell;
}

}  // namespace nlc
