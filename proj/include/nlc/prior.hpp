#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nlc/bits.hpp"
#include "nlc/errors.hpp"
#include "nlc/rng.hpp"

#include <json.hpp>

namespace nlc {

/// A probability distribution over the 2^n inputs of a width-n task.
/// Entries are nonnegative and sum to 1 within 1e-12.
class PriorDistribution {
 public:
  PriorDistribution(unsigned n, std::vector<double> p) : n_(n), p_(std::move(p)) {
    if (n < 1 || n > kMaxWidth)
      throw std::invalid_argument("prior width must be in [1, " +
                                  std::to_string(kMaxWidth) + "]");
    if (p_.size() != (std::size_t{1} << n))
      throw std::invalid_argument("prior has " + std::to_string(p_.size()) +
                                  " entries, expected 2^" + std::to_string(n));
    double sum = 0.0;
    for (double v : p_) {
      if (!(v >= 0.0))
        throw std::invalid_argument("prior entries must be nonnegative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("prior sums to " + std::to_string(sum) +
                                  ", expected 1 within 1e-12");
  }

  static PriorDistribution uniform(unsigned n) {
    return PriorDistribution(
        n, std::vector<double>(std::size_t{1} << n, std::ldexp(1.0, -static_cast<int>(n))));
  }

  unsigned n() const { return n_; }
  std::size_t size() const { return p_.size(); }
  double operator()(std::uint32_t z) const { return p_[z]; }
  const std::vector<double>& p() const { return p_; }

  bool full_support() const {
    for (double v : p_)
      if (v == 0.0) return false;
    return true;
  }

  /// Inverse-CDF draw of one input index.
  std::uint32_t sample(SplitMix64& rng) const {
    const double u = rng.next_double();
    double acc = 0.0;
    for (std::size_t z = 0; z + 1 < p_.size(); ++z) {
      acc += p_[z];
      if (u < acc) return static_cast<std::uint32_t>(z);
    }
    return static_cast<std::uint32_t>(p_.size() - 1);
  }

 private:
  unsigned n_;
  std::vector<double> p_;
};

namespace detail {

inline std::vector<double> prior_from_json_array(const nlohmann::json& arr,
                                                 std::size_t want) {
  if (!arr.is_array())
    throw parse_error("prior JSON must be an array of probabilities");
  if (arr.size() != want)
    throw parse_error("prior JSON has " + std::to_string(arr.size()) +
                      " entries, expected " + std::to_string(want));
  std::vector<double> p;
  p.reserve(want);
  for (const auto& v : arr) {
    if (!v.is_number()) throw parse_error("prior JSON entries must be numbers");
    p.push_back(v.get<double>());
  }
  return p;
}

inline std::vector<double> prior_from_csv(std::istream& in, std::size_t want) {
  // Rows "index,probability"; an "index,probability" header is allowed.
  // Every index must appear at most once; missing indices default to 0.
  std::vector<double> p(want, 0.0);
  std::vector<bool> seen(want, false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string idx_tok, val_tok;
    if (!std::getline(row, idx_tok, ',') || !std::getline(row, val_tok))
      throw parse_error("prior CSV line " + std::to_string(lineno) +
                        ": expected index,probability");
    if (lineno == 1 && idx_tok == "index") continue;
    try {
      std::size_t used = 0;
      const long long idx = std::stoll(idx_tok, &used);
      if (used != idx_tok.size()) throw parse_error("");
      const double val = std::stod(val_tok, &used);
      if (idx < 0 || static_cast<std::size_t>(idx) >= want)
        throw parse_error("prior CSV line " + std::to_string(lineno) +
                          ": index " + idx_tok + " out of range");
      if (seen[static_cast<std::size_t>(idx)])
        throw parse_error("prior CSV line " + std::to_string(lineno) +
                          ": duplicate index " + idx_tok);
      seen[static_cast<std::size_t>(idx)] = true;
      p[static_cast<std::size_t>(idx)] = val;
    } catch (const parse_error&) {
      throw;
    } catch (...) {
      throw parse_error("prior CSV line " + std::to_string(lineno) +
                        ": malformed row '" + line + "'");
    }
  }
  return p;
}

}  // namespace detail

/// Parses a prior spec for width n: "uniform", an inline JSON array
/// ("[0.25,0.25,0.25,0.25]"), or a path to a .csv ("index,probability"
/// rows) or .json file. With renormalize set, a sum within 1e-6 of 1 is
/// accepted and divided out; otherwise the sum must be 1 within 1e-12.
inline PriorDistribution parse_prior(const std::string& spec, unsigned n,
                                     bool renormalize = false) {
  const std::size_t want = std::size_t{1} << n;
  std::vector<double> p;
  if (spec == "uniform") {
    return PriorDistribution::uniform(n);
  } else if (!spec.empty() && spec[0] == '[') {
    nlohmann::json arr = nlohmann::json::parse(spec, nullptr, false);
    if (arr.is_discarded()) throw parse_error("invalid inline JSON prior: " + spec);
    p = detail::prior_from_json_array(arr, want);
  } else {
    std::ifstream in(spec);
    if (!in) throw parse_error("cannot open prior file: " + spec);
    if (spec.size() >= 5 && spec.compare(spec.size() - 5, 5, ".json") == 0) {
      nlohmann::json arr = nlohmann::json::parse(in, nullptr, false);
      if (arr.is_discarded()) throw parse_error("invalid JSON in prior file: " + spec);
      p = detail::prior_from_json_array(arr, want);
    } else {
      p = detail::prior_from_csv(in, want);
    }
  }

  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw parse_error("prior entries must be nonnegative");
    sum += v;
  }
  if (renormalize) {
    if (std::abs(sum - 1.0) > 1e-6)
      throw parse_error("prior sums to " + std::to_string(sum) +
                        ", outside the 1e-6 renormalization window");
    for (double& v : p) v /= sum;
  } else if (std::abs(sum - 1.0) > 1e-12) {
    throw parse_error("prior sums to " + std::to_string(sum) +
                      "; pass the renormalize flag to accept sums within 1e-6");
  }
  return PriorDistribution(n, std::move(p));
}

}  // namespace nlc
