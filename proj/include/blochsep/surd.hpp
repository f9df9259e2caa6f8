#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

namespace blochsep {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Best rational approximation of a nonnegative `x` with denominator at most
/// `max_den`, accepted only when it matches to `rel_tol`.
inline std::optional<Rational> rationalize(double x, std::int64_t max_den = 1'000'000,
                                           double rel_tol = 1e-12) {
  if (!(x >= 0.0) || !std::isfinite(x)) return std::nullopt;
  // continued fraction convergents
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(r);
    if (a_real > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - x) <= rel_tol * std::max(1.0, x)) {
      const std::int64_t g = std::gcd(p1, q1);
      return Rational{p1 / g, q1 / g};
    }
    const double frac = r - a_real;
    if (frac <= 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

/// sqrt(p/q) written as "a*sqrt(r)/b" with r squarefree, e.g. sqrt(1/20) ->
/// "sqrt(5)/10", sqrt(9/20) -> "3*sqrt(5)/10", sqrt(4/9) -> "2/3".
inline std::string sqrt_of_rational(Rational q) {
  if (q.num == 0) return "0";
  std::int64_t radicand = q.num * q.den;
  std::int64_t outside = 1;
  for (std::int64_t f = 2; f * f <= radicand; ++f)
    while (radicand % (f * f) == 0) {
      radicand /= f * f;
      outside *= f;
    }
  std::int64_t den = q.den;
  const std::int64_t g = std::gcd(outside, den);
  outside /= g;
  den /= g;

  std::string s;
  if (radicand == 1) {
    s = std::to_string(outside);
  } else {
    if (outside != 1) s = std::to_string(outside) + "*";
    s += "sqrt(" + std::to_string(radicand) + ")";
  }
  if (den != 1) s += "/" + std::to_string(den);
  return s;
}

}  // namespace blochsep
