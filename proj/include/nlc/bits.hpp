#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nlc {

/// Widest supported bit string / function input.
inline constexpr unsigned kMaxWidth = 20;

/// A bit string of width n packed into an unsigned integer. The first bit
/// of the written string is the most significant bit of the value, so the
/// string "10" of width 2 has value 2.
struct BitString {
  std::uint32_t value = 0;
  unsigned n = 1;

  BitString() = default;

  BitString(std::uint32_t value_, unsigned n_) : value(value_), n(n_) {
    if (n_ < 1 || n_ > kMaxWidth)
      throw std::invalid_argument("BitString width must be in [1, " +
                                  std::to_string(kMaxWidth) + "], got " +
                                  std::to_string(n_));
    if (n_ < 32 && (value_ >> n_) != 0)
      throw std::invalid_argument("BitString value " + std::to_string(value_) +
                                  " does not fit in " + std::to_string(n_) +
                                  " bits");
  }

  /// Bit i of the written string, counted 1-based from the left.
  int bit(unsigned i) const { return static_cast<int>((value >> (n - i)) & 1u); }

  std::string to_string() const {
    std::string s(n, '0');
    for (unsigned i = 0; i < n; ++i)
      if ((value >> (n - 1 - i)) & 1u) s[i] = '1';
    return s;
  }

  friend bool operator==(const BitString&, const BitString&) = default;
};

/// Parity of a bitwise AND of raw values (assumes equal widths).
inline int parity_dot(std::uint32_t u, std::uint32_t x) {
  return std::popcount(u & x) & 1;
}

/// Inner product modulo 2 of two bit strings of equal width.
inline int dot_mod2(const BitString& u, const BitString& x) {
  if (u.n != x.n)
    throw std::invalid_argument("dot_mod2: width mismatch (" +
                                std::to_string(u.n) + " vs " +
                                std::to_string(x.n) + ")");
  return parity_dot(u.value, x.value);
}

}  // namespace nlc
