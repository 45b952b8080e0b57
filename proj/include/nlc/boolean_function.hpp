#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlc/bits.hpp"
#include "nlc/errors.hpp"

namespace nlc {

/// A Boolean function on n-bit inputs, stored as its full truth table.
/// Input index z follows the BitString convention (first written bit is
/// the most significant bit of z).
class BooleanFunction {
 public:
  BooleanFunction(unsigned n, std::vector<std::uint8_t> table)
      : n_(n), table_(std::move(table)) {
    if (n < 1 || n > kMaxWidth)
      throw std::invalid_argument("BooleanFunction width must be in [1, " +
                                  std::to_string(kMaxWidth) + "], got " +
                                  std::to_string(n));
    if (table_.size() != (std::size_t{1} << n))
      throw std::invalid_argument("BooleanFunction table has " +
                                  std::to_string(table_.size()) +
                                  " entries, expected 2^" + std::to_string(n));
    for (auto& bit : table_) bit = bit ? 1 : 0;
  }

  unsigned n() const { return n_; }
  std::size_t size() const { return table_.size(); }
  int operator()(std::uint32_t z) const { return table_[z]; }
  const std::vector<std::uint8_t>& table() const { return table_; }

  /// Truth table as hex (bit z of the value is f(z)), without leading zeros.
  std::string table_hex() const {
    std::string out;
    const std::size_t digits = (size() + 3) / 4;
    bool leading = true;
    for (std::size_t d = digits; d-- > 0;) {
      unsigned nib = 0;
      for (unsigned b = 0; b < 4; ++b) {
        const std::size_t z = 4 * d + b;
        if (z < size() && table_[z]) nib |= 1u << b;
      }
      if (nib == 0 && leading && d != 0) continue;
      leading = false;
      out += "0123456789abcdef"[nib];
    }
    return out;
  }

  friend bool operator==(const BooleanFunction&, const BooleanFunction&) = default;

 private:
  unsigned n_;
  std::vector<std::uint8_t> table_;
};

/// True iff f(z) = u.z xor delta for some (u, delta). Decided exactly with
/// an integer Walsh transform of the sign table: f is affine iff one
/// transform coefficient has modulus 2^n.
inline bool is_affine(const BooleanFunction& f) {
  std::vector<std::int64_t> v(f.size());
  for (std::size_t z = 0; z < f.size(); ++z) v[z] = f(static_cast<std::uint32_t>(z)) ? -1 : 1;
  for (std::size_t h = 1; h < v.size(); h <<= 1)
    for (std::size_t i = 0; i < v.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int64_t a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
  const auto full = static_cast<std::int64_t>(f.size());
  for (std::int64_t c : v)
    if (c == full || c == -full) return true;
  return false;
}

namespace detail {

inline BooleanFunction table_from_bits(unsigned n, std::uint32_t bits) {
  std::vector<std::uint8_t> t(std::size_t{1} << n);
  for (std::size_t z = 0; z < t.size(); ++z) t[z] = (bits >> z) & 1u;
  return BooleanFunction(n, std::move(t));
}

inline unsigned parse_width_suffix(const std::string& spec, std::size_t pos,
                                   unsigned fallback) {
  // Accepts an optional ":n=<k>" tail starting at pos.
  if (pos >= spec.size()) return fallback;
  if (spec.compare(pos, 3, ":n=") != 0)
    throw parse_error("unrecognized function spec: " + spec);
  try {
    std::size_t used = 0;
    const int k = std::stoi(spec.substr(pos + 3), &used);
    if (used != spec.size() - pos - 3 || k < 1) throw parse_error("");
    return static_cast<unsigned>(k);
  } catch (...) {
    throw parse_error("bad width in function spec: " + spec);
  }
}

}  // namespace detail

/// Parses a function spec. Named forms: "and", "or", "xor" (n=2), "not"
/// (n=1), "maj3" (n=3), "const0"/"const1" (n=1, or "const0:n=<k>").
/// Truth-table form: "tt:n=<k>:hex=<H>" where bit z of H is f(z).
inline BooleanFunction parse_function(const std::string& spec) {
  if (spec == "and") return detail::table_from_bits(2, 0x8);
  if (spec == "or") return detail::table_from_bits(2, 0xe);
  if (spec == "xor") return detail::table_from_bits(2, 0x6);
  if (spec == "not") return detail::table_from_bits(1, 0x1);
  if (spec == "maj3") return detail::table_from_bits(3, 0xe8);
  if (spec.rfind("const0", 0) == 0 || spec.rfind("const1", 0) == 0) {
    const unsigned n = detail::parse_width_suffix(spec, 6, 1);
    if (n > kMaxWidth) throw parse_error("function width exceeds " + std::to_string(kMaxWidth));
    const std::uint8_t bit = spec[5] == '1' ? 1 : 0;
    return BooleanFunction(n, std::vector<std::uint8_t>(std::size_t{1} << n, bit));
  }

  if (spec.rfind("tt:n=", 0) != 0) throw parse_error("unrecognized function spec: " + spec);
  const std::size_t hex_at = spec.find(":hex=", 5);
  if (hex_at == std::string::npos) throw parse_error("missing :hex= in function spec: " + spec);
  unsigned n = 0;
  try {
    std::size_t used = 0;
    const int k = std::stoi(spec.substr(5, hex_at - 5), &used);
    if (used != hex_at - 5 || k < 1) throw parse_error("");
    n = static_cast<unsigned>(k);
  } catch (...) {
    throw parse_error("bad width in function spec: " + spec);
  }
  if (n > kMaxWidth)
    throw parse_error("function width " + std::to_string(n) + " exceeds " +
                      std::to_string(kMaxWidth));

  std::string hex = spec.substr(hex_at + 5);
  if (hex.rfind("0x", 0) == 0 || hex.rfind("0X", 0) == 0) hex = hex.substr(2);
  if (hex.empty()) throw parse_error("empty hex in function spec: " + spec);

  const std::size_t table_bits = std::size_t{1} << n;
  std::vector<std::uint8_t> table(table_bits, 0);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char c = hex[hex.size() - 1 - d];  // digit d covers bits 4d..4d+3
    unsigned nib = 0;
    if (c >= '0' && c <= '9') nib = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') nib = static_cast<unsigned>(c - 'a') + 10;
    else if (c >= 'A' && c <= 'F') nib = static_cast<unsigned>(c - 'A') + 10;
    else throw parse_error(std::string("bad hex digit '") + c + "' in function spec");
    for (unsigned b = 0; b < 4; ++b) {
      if (!((nib >> b) & 1u)) continue;
      const std::size_t z = 4 * d + b;
      if (z >= table_bits)
        throw parse_error("hex truth table sets bit " + std::to_string(z) +
                          " beyond 2^" + std::to_string(n) + " entries");
      table[z] = 1;
    }
  }
  return BooleanFunction(n, std::move(table));
}

}  // namespace nlc
