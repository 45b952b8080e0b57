#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nlc/boolean_function.hpp"
#include "nlc/prior.hpp"

namespace nlc {

/// In-place unnormalized Walsh-Hadamard transform:
///   out(u) = sum_z (-1)^{u.z} in(z).
/// The length must be a power of two. Applying the transform twice
/// multiplies the input by its length.
template <typename T>
inline void fwht_inplace(std::vector<T>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1)
    for (std::size_t i = 0; i < v.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const T a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

/// Prior-weighted sign spectrum of a Boolean function:
///   coeff(u) = sum_z (-1)^{f(z) + u.z} P(z).
/// Every coefficient lies in [-1, 1]; the maximal modulus is the quantity
/// that fixes both the classical optimum and the quantum bound.
struct FourierSpectrum {
  unsigned n = 1;
  std::vector<double> coeff;

  /// Index of the largest-modulus coefficient, smallest index on ties.
  std::uint32_t argmax_abs() const {
    std::uint32_t best = 0;
    double best_abs = -1.0;
    for (std::size_t u = 0; u < coeff.size(); ++u)
      if (std::abs(coeff[u]) > best_abs) {
        best_abs = std::abs(coeff[u]);
        best = static_cast<std::uint32_t>(u);
      }
    return best;
  }

  double max_abs() const { return std::abs(coeff[argmax_abs()]); }
};

/// Computes the spectrum by a fast Walsh-Hadamard transform of the signed
/// vector g(z) = (-1)^{f(z)} P(z), in O(n 2^n).
inline FourierSpectrum fourier_spectrum(const BooleanFunction& f,
                                        const PriorDistribution& prior) {
  if (f.n() != prior.n())
    throw std::invalid_argument("fourier_spectrum: width mismatch (f has n=" +
                                std::to_string(f.n()) + ", prior has n=" +
                                std::to_string(prior.n()) + ")");
  FourierSpectrum s;
  s.n = f.n();
  s.coeff.resize(f.size());
  for (std::size_t z = 0; z < f.size(); ++z) {
    const double g = prior(static_cast<std::uint32_t>(z));
    s.coeff[z] = f(static_cast<std::uint32_t>(z)) ? -g : g;
  }
  fwht_inplace(s.coeff);
  return s;
}

}  // namespace nlc
