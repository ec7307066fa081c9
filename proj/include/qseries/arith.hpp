#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qseries/report.hpp"
#include "qseries/rings.hpp"

namespace qseries {

// Trial division. Fine for the 64-bit inputs the congruence scans produce.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw domain_error("factorize wants n >= 1, got " + std::to_string(n));
  std::vector<std::pair<std::int64_t, int>> f;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

// sigma(n) = sum of divisors, multiplicative: prod (p^{e+1} - 1)/(p - 1).
inline std::int64_t sigma(std::int64_t n) {
  std::int64_t s = 1;
  for (const auto& [p, e] : factorize(n)) {
    std::int64_t term = 1, pk = 1;
    for (int i = 0; i < e; ++i) {
      pk *= p;
      term += pk;
    }
    s *= term;
  }
  return s;
}

// a1(n) = sigma(3n+2)/3. Always integral: 3n+2 has some prime p = 2 mod 3 to
// an odd power, whose sigma factor 1 + p + ... + p^e is divisible by 3. The
// check is kept as a tripwire anyway.
inline std::int64_t wang_a1(std::int64_t n) {
  if (n < 0) throw domain_error("wang_a1 wants n >= 0, got " + std::to_string(n));
  const std::int64_t s = sigma(3 * n + 2);
  if (s % 3 != 0)
    throw domain_error("sigma(3n+2) not divisible by 3 at n = " + std::to_string(n));
  return s / 3;
}

namespace detail {

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * b) % m);
    b = static_cast<std::uint64_t>((static_cast<unsigned __int128>(b) * b) % m);
    e >>= 1;
  }
  return r;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
    if (n % p == 0) return false;
  return true;
}

}  // namespace detail

// Legendre symbol (a/p) via Euler's criterion, p an odd prime.
inline int legendre(std::int64_t a, std::int64_t p) {
  if (p < 3 || !detail::is_prime(p))
    throw domain_error("legendre wants an odd prime, got " + std::to_string(p));
  const std::int64_t r = ((a % p) + p) % p;
  if (r == 0) return 0;
  const std::uint64_t e = detail::pow_mod(static_cast<std::uint64_t>(r),
                                          static_cast<std::uint64_t>((p - 1) / 2),
                                          static_cast<std::uint64_t>(p));
  return e == 1 ? 1 : -1;
}

// p-adic valuation of n, n != 0.
inline int nu_p(std::int64_t n, std::int64_t p) {
  if (n == 0) throw domain_error("nu_p(0) is infinite");
  if (p < 2) throw domain_error("nu_p wants p >= 2, got " + std::to_string(p));
  if (n < 0) n = -n;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

enum class quad_form { x2_plus_y2, two_x2_plus_y2 };

inline const char* to_string(quad_form f) {
  return f == quad_form::x2_plus_y2 ? "x^2+y^2" : "2x^2+y^2";
}

// Is n = x^2 + y^2 (resp. 2x^2 + y^2) with integers x, y >= 0? Exhaustive.
inline bool is_represented(quad_form form, std::int64_t n) {
  if (n < 0) return false;
  const std::int64_t lead = (form == quad_form::two_x2_plus_y2) ? 2 : 1;
  for (std::int64_t x = 0; lead * x * x <= n; ++x) {
    const std::int64_t rest = n - lead * x * x;
    std::int64_t y = 0;
    while (y * y < rest) ++y;
    if (y * y == rest) return true;
  }
  return false;
}

// For p = 7 mod 8 and n < n_max with p not dividing n, the integer
//   m(n) = 3 (p^{2k+1} n + 2 (p^{2k+2} - 1)/3) + 2 = p^{2k+1} (3n + 2p)
// must have nu_p(m) = 2k+1 exactly, and being p-odd it can be neither
// x^2 + y^2 nor 2x^2 + y^2. Violations carry m(n) as the witness value.
inline verification_report valuation_parity_audit(std::int64_t p, std::int64_t k,
                                                  std::int64_t n_max) {
  if (p % 8 != 7 || !detail::is_prime(p))
    throw domain_error("audit wants a prime p = 7 mod 8, got " + std::to_string(p));
  if (k < 0) throw domain_error("audit wants k >= 0");
  stopwatch timer;
  verification_report rep;
  rep.name = "valuation-parity p=" + std::to_string(p) + " k=" + std::to_string(k);

  std::int64_t pk1 = 1;  // p^{2k+1}
  for (std::int64_t i = 0; i < 2 * k + 1; ++i) pk1 *= p;

  for (std::int64_t n = 0; n < n_max; ++n) {
    if (n % p == 0) continue;
    const std::int64_t m = pk1 * (3 * n + 2 * p);
    ++rep.n_checked;
    const bool bad = nu_p(m, p) != 2 * k + 1 ||
                     is_represented(quad_form::x2_plus_y2, m) ||
                     is_represented(quad_form::two_x2_plus_y2, m);
    if (bad) rep.violations.push_back({n, std::to_string(m)});
  }
  rep.elapsed_ms = timer.elapsed_ms();
  return rep;
}

}  // namespace qseries
