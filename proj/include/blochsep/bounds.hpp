#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bloch.hpp"
#include "errors.hpp"
#include "quantum_state.hpp"

namespace blochsep {

/// Bound on ||T^{(j)}||^2 for one party of dimension d: 2(d-1)/d.
inline double single_party_factor(int d) {
  if (d < 2) throw DomainError("local dimension must be at least 2");
  return 2.0 * (d - 1) / d;
}

/// Bound on ||T^{(jk)}||^2 for two parties: 4(m^2-1)/m^2 with m = min(d_j, d_k).
inline double pair_factor(int dj, int dk) {
  if (dj < 2 || dk < 2) throw DomainError("local dimension must be at least 2");
  const double m = std::min(dj, dk);
  return 4.0 * (m * m - 1.0) / (m * m);
}

/// True when the largest dimension does not exceed the product of the others.
/// Blocks of one or two parties always pass.
inline bool block_constraint_ok(std::span<const int> dims) {
  if (dims.size() < 3) return true;
  const int largest = *std::max_element(dims.begin(), dims.end());
  std::int64_t rest = 1;
  bool skipped = false;
  for (int d : dims) {
    if (!skipped && d == largest) {
      skipped = true;
      continue;
    }
    rest *= d;
    if (rest >= largest) return true;
  }
  return largest <= rest;
}

/// Bound on the full correlation tensor of t >= 3 parties with sorted
/// dimensions e_1 <= ... <= e_t and e_t <= e_1...e_{t-1}:
///
///   2^t { 1 - [ sum_{(t-1)-subsets} prod - sum_i e_i + (t-2) e_t ]
///             / [ (t-2) e_1...e_{t-1} e_t^2 ] }
inline double multi_party_factor(std::span<const int> dims) {
  const std::size_t t = dims.size();
  if (t < 3) throw DomainError("multi-party factor needs at least 3 parties; use the single or pair factor");
  for (int d : dims)
    if (d < 2) throw DomainError("local dimension must be at least 2");
  if (!std::is_sorted(dims.begin(), dims.end()))
    throw DomainError("block dimensions must be sorted ascending");
  if (!block_constraint_ok(dims))
    throw DomainError("block dimension constraint violated: largest dimension exceeds the product of the others");

  std::int64_t product = 1;
  std::int64_t sum = 0;
  for (int d : dims) {
    product *= d;
    sum += d;
  }
  std::int64_t leave_one_out = 0;
  for (int d : dims) leave_one_out += product / d;
  const std::int64_t largest = dims.back();
  const auto tm2 = static_cast<std::int64_t>(t) - 2;
  const std::int64_t numerator = leave_one_out - sum + tm2 * largest;
  const std::int64_t denominator = tm2 * product * largest;
  return std::ldexp(1.0, static_cast<int>(t)) *
         (1.0 - static_cast<double>(numerator) / static_cast<double>(denominator));
}

/// Full-tensor bound for n parties of equal dimension d:
/// 2^n [(n-2) d^n - n d^{n-2} + 2] / ((n-2) d^n).
inline double uniform_full_bound(int n, int d) {
  if (n < 3) throw DomainError("uniform bound needs at least 3 parties");
  if (d < 2) throw DomainError("local dimension must be at least 2");
  const double dn = std::pow(static_cast<double>(d), n);
  const double dn2 = std::pow(static_cast<double>(d), n - 2);
  return std::ldexp(1.0, n) * ((n - 2) * dn - n * dn2 + 2.0) / ((n - 2) * dn);
}

enum class BlockRule { single, pair, multi };

inline const char* to_string(BlockRule r) {
  switch (r) {
    case BlockRule::single: return "single";
    case BlockRule::pair: return "pair";
    case BlockRule::multi: return "multi";
  }
  return "?";
}

/// The bound that applies to one block of a partition.
struct BlockFactor {
  std::vector<int> block_dims;  ///< ascending
  BlockRule rule = BlockRule::single;
  double value = 0.0;

  std::size_t size() const noexcept { return block_dims.size(); }
};

inline BlockFactor block_factor(std::vector<int> dims) {
  if (dims.empty()) throw DomainError("block must contain at least one party");
  std::sort(dims.begin(), dims.end());
  BlockFactor out;
  if (dims.size() == 1) {
    out.rule = BlockRule::single;
    out.value = single_party_factor(dims[0]);
  } else if (dims.size() == 2) {
    out.rule = BlockRule::pair;
    out.value = pair_factor(dims[0], dims[1]);
  } else {
    out.rule = BlockRule::multi;
    out.value = multi_party_factor(dims);
  }
  out.block_dims = std::move(dims);
  return out;
}

namespace detail {

inline bool all_equal(const std::vector<int>& dims) {
  return std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) == dims.end();
}

}  // namespace detail

/// E_T = (d/2)^{n/2} ||T^{(1..n)}|| - (d(d-1)/2)^{n/2} for a pure n-qudit state.
inline double entanglement_et(const MultiState& state, double purity_tolerance = 1e-9) {
  const auto& dims = state.profile().dims();
  if (!detail::all_equal(dims) || std::abs(purity(state) - 1.0) > purity_tolerance)
    throw DomainError("E_T defined for n-qudit pure states");
  const double n = static_cast<double>(dims.size());
  const double d = dims.front();
  const double norm = std::sqrt(full_correlation_tensor(state).norm_sq());
  return std::pow(d / 2.0, n / 2.0) * norm - std::pow(d * (d - 1.0) / 2.0, n / 2.0);
}

/// Upper bound on E_T over pure n-qudit states:
/// (d/2)^{n/2} [ sqrt(d^n - n/(n-2) d^{n-2} + 2/(n-2)) - (d-1)^{n/2} ].
inline double entanglement_et_bound(int n, int d) {
  if (n < 3) throw DomainError("E_T bound needs at least 3 parties");
  if (d < 2) throw DomainError("local dimension must be at least 2");
  const double nn = n;
  const double dd = d;
  const double radical =
      std::pow(dd, nn) - nn / (nn - 2.0) * std::pow(dd, nn - 2.0) + 2.0 / (nn - 2.0);
  return std::pow(dd / 2.0, nn / 2.0) * (std::sqrt(radical) - std::pow(dd - 1.0, nn / 2.0));
}

}  // namespace blochsep
