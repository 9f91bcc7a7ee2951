#ifndef QWALK_NUMBER_THEORY_HPP
#define QWALK_NUMBER_THEORY_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/error.hpp"

namespace qwalk {

inline constexpr double kRecognizeTolerance = 1e-6;
inline constexpr std::int64_t kDeltaMax = 1'000'000;
inline constexpr std::int64_t kTrialDivisionBound = 1'000'000;

/// floor(sqrt(n)) computed exactly.
inline std::uint64_t isqrt(std::uint64_t n) {
  using wide = unsigned __int128;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<wide>(r) * r > n) --r;
  while (static_cast<wide>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_perfect_square(std::uint64_t n) {
  const auto r = isqrt(n);
  return r * r == n;
}

/// N = s^2 * c with c square-free.
struct SquareFreeDecomposition {
  std::uint64_t n = 0;
  std::uint64_t c = 1;
  std::uint64_t s = 1;
};

namespace detail {

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    const auto limit = static_cast<std::size_t>(kTrialDivisionBound);
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::size_t p = 2; p <= limit; ++p) {
      if (composite[p]) continue;
      out.push_back(static_cast<std::uint32_t>(p));
      for (std::size_t q = p * p; q <= limit; q += p) composite[q] = true;
    }
    return out;
  }();
  return primes;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e > 0) {
    if (e & 1U) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1U;
  }
  return r;
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    auto x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

inline std::optional<std::uint64_t> exact_cube_root(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<long double>(n)));
  for (std::uint64_t c = r > 0 ? r - 1 : 0; c <= r + 1; ++c) {
    if (c != 0 && c * c * c == n) return c;
  }
  return std::nullopt;
}

/// A nontrivial factor of an odd composite n, or nothing if every seed fails.
inline std::optional<std::uint64_t> pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1; c < 64; ++c) {
    auto step = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
    std::uint64_t y = 2, x = 2, q = 1, g = 1, ys = 2;
    std::uint64_t r = 1;
    constexpr std::uint64_t batch = 128;
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = step(y);
      for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(batch, r - k); ++i) {
          y = step(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r *= 2;
      if (r > (std::uint64_t{1} << 26)) break;
    }
    if (g == n) {
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return std::nullopt;
}

}  // namespace detail

/// Square-free part by trial division with the primes below 10^6.
///
/// The cofactor left after trial division has only prime factors above 10^6,
/// so it has at most three of them. p^2 and p^3 are detected exactly; the
/// rest is split by Pollard-Brent. FactorizationLimitError if that fails.
inline SquareFreeDecomposition square_free_part(std::uint64_t n) {
  if (n == 0) throw ParameterError("square_free_part needs N >= 1");
  if (n > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw ParameterError("square_free_part needs N <= 2^63-1");
  }
  SquareFreeDecomposition d{n, 1, 1};
  std::uint64_t rest = n;
  for (const std::uint64_t p : detail::small_primes()) {
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) d.s *= p;
    if (e % 2 == 1) d.c *= p;
  }
  if (rest == 1) return d;

  constexpr std::uint64_t bound = static_cast<std::uint64_t>(kTrialDivisionBound);
  if (rest <= bound * bound || detail::is_prime_u64(rest)) {
    d.c *= rest;
    return d;
  }
  if (is_perfect_square(rest)) {
    d.s *= isqrt(rest);
    return d;
  }
  if (const auto cube = detail::exact_cube_root(rest)) {
    d.s *= *cube;
    d.c *= *cube;
    return d;
  }
  if (rest < bound * bound * bound) {
    // Exactly two distinct primes above the bound.
    d.c *= rest;
    return d;
  }
  // p q, p q r or p^2 q with every prime above 10^6: split once with rho.
  const auto f = detail::pollard_brent(rest);
  if (!f) {
    throw FactorizationLimitError("cannot resolve cofactor " + std::to_string(rest) + " of " +
                                  std::to_string(n) + " beyond trial division");
  }
  std::vector<std::uint64_t> primes;
  for (const std::uint64_t part : {*f, rest / *f}) {
    if (detail::is_prime_u64(part)) {
      primes.push_back(part);
      continue;
    }
    // part is a product of two primes above 10^6
    if (is_perfect_square(part)) {
      primes.insert(primes.end(), 2, isqrt(part));
      continue;
    }
    const auto g = detail::pollard_brent(part);
    if (!g) {
      throw FactorizationLimitError("cannot resolve cofactor " + std::to_string(part) + " of " +
                                    std::to_string(n));
    }
    primes.push_back(*g);
    primes.push_back(part / *g);
  }
  std::sort(primes.begin(), primes.end());
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    for (std::size_t e = 0; e < (j - i) / 2; ++e) d.s *= primes[i];
    if ((j - i) % 2 == 1) d.c *= primes[i];
    i = j;
  }
  return d;
}

/// Nearest integer to x when |x - round(x)| < tol.
inline std::optional<std::int64_t> recognize_integer(double x, double tol = kRecognizeTolerance) {
  if (!(tol > 0.0 && tol < 0.5)) throw ParameterError("recognition tolerance must lie in (0, 0.5)");
  if (!std::isfinite(x) || std::abs(x) > 9.0e15) return std::nullopt;
  const double r = std::round(x);
  if (std::abs(x - r) < tol) return static_cast<std::int64_t>(r);
  return std::nullopt;
}

/// Classification of a set of reals against the periodicity criterion: all
/// integers, or all of the form (a + b_x sqrt(Delta)) / 2 with one integer a
/// and one square-free Delta >= 2.
struct QuadraticClass {
  enum class Kind { all_integer, quadratic, unclassifiable };
  /// Why a set is unclassifiable. `refuted` means no (a, Delta) can exist;
  /// `search_bound` means the bounded search ran out before deciding.
  enum class Reason { none, refuted, search_bound };

  Kind kind = Kind::unclassifiable;
  Reason reason = Reason::none;
  std::int64_t a = 0;
  std::int64_t delta = 1;
  std::vector<std::int64_t> b;  // aligned with the input values
  double tolerance = kRecognizeTolerance;
  std::string detail;
};

namespace detail {

inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace detail

/// Searches (a, Delta). With two or more distinct values Delta is forced:
/// every (2(x_i - x_0))^2 = (b_i - b_0)^2 Delta must be an integer with that
/// square-free part, and a is then found by scanning |a| <= a_bound. A lone
/// irrational value takes the smallest Delta over the a scan. `a_bound`
/// defaults to 2 max|x| + 2.
inline QuadraticClass classify_quadratic(const std::vector<double>& values,
                                         double tol = kRecognizeTolerance,
                                         std::int64_t delta_max = kDeltaMax,
                                         std::optional<std::int64_t> a_bound = {}) {
  if (values.empty()) throw ParameterError("classify_quadratic needs at least one value");
  QuadraticClass cls;
  cls.tolerance = tol;
  double max_abs = 0.0;
  for (double x : values) {
    if (!std::isfinite(x)) throw ParameterError("classify_quadratic needs finite values");
    max_abs = std::max(max_abs, std::abs(x));
  }
  const std::int64_t bound =
      a_bound.value_or(2 * static_cast<std::int64_t>(std::ceil(max_abs)) + 2);

  if (std::all_of(values.begin(), values.end(),
                  [&](double x) { return recognize_integer(x, tol).has_value(); })) {
    cls.kind = QuadraticClass::Kind::all_integer;
    cls.a = 0;
    cls.delta = 1;
    for (double x : values) cls.b.push_back(2 * *recognize_integer(x, tol));
    return cls;
  }

  auto fits = [&](std::int64_t a, std::int64_t delta) -> std::optional<std::vector<std::int64_t>> {
    const double root = std::sqrt(static_cast<double>(delta));
    std::vector<std::int64_t> b;
    for (double x : values) {
      const auto bx = recognize_integer((2.0 * x - static_cast<double>(a)) / root, tol);
      if (!bx) return std::nullopt;
      b.push_back(*bx);
    }
    return b;
  };

  // Reference value: the first one differing from values[0].
  const double x0 = values.front();
  std::optional<std::int64_t> forced;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double diff = 2.0 * (values[i] - x0);
    if (std::abs(diff) < tol) continue;
    const auto sq = recognize_integer(diff * diff, tol * std::max(1.0, std::abs(diff)));
    if (!sq) {
      cls.reason = QuadraticClass::Reason::refuted;
      cls.detail = "(2(" + detail::fmt_double(values[i]) + " - " + detail::fmt_double(x0) +
                   "))^2 is not an integer";
      return cls;
    }
    const auto delta = static_cast<std::int64_t>(
        square_free_part(static_cast<std::uint64_t>(*sq)).c);
    if (forced && *forced != delta) {
      cls.reason = QuadraticClass::Reason::refuted;
      cls.detail = "differences need both sqrt(" + std::to_string(*forced) + ") and sqrt(" +
                   std::to_string(delta) + ")";
      return cls;
    }
    forced = delta;
  }

  if (forced) {
    if (*forced == 1) {
      cls.reason = QuadraticClass::Reason::refuted;
      cls.detail = "values differ by rationals but are not all integers";
      return cls;
    }
    if (*forced > delta_max) {
      cls.reason = QuadraticClass::Reason::search_bound;
      cls.detail = "Delta = " + std::to_string(*forced) + " exceeds the search bound";
      return cls;
    }
    for (std::int64_t a = -bound; a <= bound; ++a) {
      if (auto b = fits(a, *forced)) {
        cls.kind = QuadraticClass::Kind::quadratic;
        cls.a = a;
        cls.delta = *forced;
        cls.b = std::move(*b);
        return cls;
      }
    }
    cls.reason = QuadraticClass::Reason::search_bound;
    cls.detail = "no integer a with |a| <= " + std::to_string(bound) + " for Delta = " +
                 std::to_string(*forced);
    return cls;
  }

  // A single distinct irrational value.
  const double twice = 2.0 * x0;
  if (recognize_integer(twice, tol)) {
    cls.kind = QuadraticClass::Kind::quadratic;
    cls.a = *recognize_integer(twice, tol);
    cls.delta = 2;
    cls.b.assign(values.size(), 0);
    return cls;
  }
  std::optional<std::pair<std::int64_t, std::int64_t>> best;  // (delta, a)
  for (std::int64_t a = -bound; a <= bound; ++a) {
    const double r = twice - static_cast<double>(a);
    const auto sq = recognize_integer(r * r, tol * std::max(1.0, std::abs(r)));
    if (!sq || *sq <= 0) continue;
    const auto delta = static_cast<std::int64_t>(square_free_part(static_cast<std::uint64_t>(*sq)).c);
    if (delta < 2 || delta > delta_max) continue;
    if (!best || delta < best->first) best = {delta, a};
  }
  if (best) {
    if (auto b = fits(best->second, best->first)) {
      cls.kind = QuadraticClass::Kind::quadratic;
      cls.a = best->second;
      cls.delta = best->first;
      cls.b = std::move(*b);
      return cls;
    }
  }
  cls.reason = QuadraticClass::Reason::search_bound;
  cls.detail = "no quadratic form for " + detail::fmt_double(x0) + " within the search bounds";
  return cls;
}

/// Integers l and q_k with |l lambda_k - alpha_k - q_k| < eps for every k.
struct KroneckerWitness {
  std::int64_t l = 0;
  std::vector<std::int64_t> q;
  std::vector<double> errors;
  double eps = 0.0;

  double max_error() const {
    return errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
  }
};

/// Exhaustive scan l = l_min..l_max with q_k = round(l lambda_k - alpha_k);
/// returns the first l meeting every bound.
inline std::optional<KroneckerWitness> kronecker_witness(const std::vector<double>& lambdas,
                                                         const std::vector<double>& alphas,
                                                         double eps, std::int64_t l_max,
                                                         std::int64_t l_min = 1) {
  if (lambdas.size() != alphas.size()) throw ParameterError("lambdas and alphas differ in length");
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  if (l_max < 1 || l_min < 1) throw ParameterError("l range must start at 1 or later");
  const std::size_t dim = lambdas.size();
  for (std::int64_t l = l_min; l <= l_max; ++l) {
    const auto lf = static_cast<double>(l);
    bool ok = true;
    for (std::size_t k = 0; k < dim && ok; ++k) {
      const double x = lf * lambdas[k] - alphas[k];
      ok = std::abs(x - std::round(x)) < eps;
    }
    if (!ok) continue;
    KroneckerWitness w;
    w.l = l;
    w.eps = eps;
    for (std::size_t k = 0; k < dim; ++k) {
      const double x = lf * lambdas[k] - alphas[k];
      w.q.push_back(static_cast<std::int64_t>(std::round(x)));
      w.errors.push_back(std::abs(x - std::round(x)));
    }
    return w;
  }
  return std::nullopt;
}

/// The l in [l_min, l_max] with the smallest max_k |l lambda_k - alpha_k - q_k|,
/// whether or not it meets any bound. Earliest l wins ties.
inline KroneckerWitness kronecker_closest(const std::vector<double>& lambdas,
                                          const std::vector<double>& alphas, std::int64_t l_max,
                                          std::int64_t l_min = 1) {
  if (lambdas.size() != alphas.size()) throw ParameterError("lambdas and alphas differ in length");
  if (l_min < 1 || l_max < l_min) throw ParameterError("empty l range");
  std::int64_t best_l = l_min;
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t l = l_min; l <= l_max; ++l) {
    const auto lf = static_cast<double>(l);
    double worst = 0.0;
    for (std::size_t k = 0; k < lambdas.size() && worst < best; ++k) {
      const double x = lf * lambdas[k] - alphas[k];
      worst = std::max(worst, std::abs(x - std::round(x)));
    }
    if (worst < best) {
      best = worst;
      best_l = l;
    }
  }
  KroneckerWitness w;
  w.l = best_l;
  w.eps = best;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double x = static_cast<double>(best_l) * lambdas[k] - alphas[k];
    w.q.push_back(static_cast<std::int64_t>(std::round(x)));
    w.errors.push_back(std::abs(x - std::round(x)));
  }
  return w;
}

}  // namespace qwalk

#endif  // QWALK_NUMBER_THEORY_HPP
