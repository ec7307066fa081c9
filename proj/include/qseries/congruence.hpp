#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qseries/arith.hpp"
#include "qseries/report.hpp"
#include "qseries/series.hpp"

namespace qseries {

// "Coefficients of <series> along An+B vanish mod M", optionally skipping
// n = 0 mod exclude_p. B >= A is legal: the prime-power family produces
// progressions like 28n+131 whose offset exceeds the step.
struct congruence_claim {
  std::string name;
  std::string series;  // expression text, usually just a name: c5, c9, b1, ...
  std::int64_t A = 1;
  std::int64_t B = 0;
  std::uint64_t M = 2;
  std::int64_t exclude_p = 0;  // 0: no exclusion
  std::int64_t n_max = 0;      // recommended scan length

  void validate() const {
    if (A < 1) throw domain_error(name + ": progression step must be >= 1");
    if (B < 0) throw domain_error(name + ": residue must be >= 0");
    if (M < 2) throw domain_error(name + ": congruence modulus must be >= 2");
    if (exclude_p != 0 && !detail::is_prime(exclude_p))
      throw domain_error(name + ": exclusion must be a prime, got " + std::to_string(exclude_p));
  }
};

inline std::string claim_name(const std::string& series, std::int64_t A, std::int64_t B,
                              std::uint64_t M, std::int64_t exclude_p) {
  std::string s = series + "(" + std::to_string(A) + "n+" + std::to_string(B) + ") mod " +
                  std::to_string(M);
  if (exclude_p) s += " skip " + std::to_string(exclude_p) + "|n";
  return s;
}

inline congruence_claim make_claim(const std::string& series, std::int64_t A, std::int64_t B,
                                   std::uint64_t M, std::int64_t exclude_p = 0,
                                   std::int64_t n_max = 0) {
  congruence_claim c{claim_name(series, A, B, M, exclude_p), series, A, B, M, exclude_p, n_max};
  c.validate();
  return c;
}

namespace detail {

inline std::uint64_t residue_of(const exact_ring&, const mpz_class& v, std::uint64_t m) {
  return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(m));
}
inline std::uint64_t residue_of(const mod_ring&, std::uint64_t v, std::uint64_t m) {
  return v % m;
}

}  // namespace detail

// Scan coefficient(A n + B) mod M for 0 <= n < n_max. The series must reach
// order A*n_max + B (order_error names the required order otherwise), and a
// modular series must have M dividing its modulus so residues are faithful.
// Skipped indices are not counted in n_checked; every violation is recorded.
template <typename R>
verification_report check_claim(const series<R>& s, const congruence_claim& claim,
                                std::int64_t n_max) {
  claim.validate();
  if (n_max < 0) throw domain_error(claim.name + ": n_max must be >= 0");
  stopwatch timer;
  const __int128 required = static_cast<__int128>(claim.A) * n_max + claim.B;
  if (required > s.order())
    throw order_error(claim.name + ": needs order " + std::to_string(static_cast<long long>(required)) +
                      ", series has " + std::to_string(s.order()));
  if (s.ring().modulus() != 0 && s.ring().modulus() % claim.M != 0)
    throw ring_mismatch_error(claim.name + ": series modulus " +
                              std::to_string(s.ring().modulus()) + " not divisible by " +
                              std::to_string(claim.M));
  verification_report rep;
  rep.name = claim.name;
  std::int64_t skipped = 0;
  for (std::int64_t n = 0; n < n_max; ++n) {
    if (claim.exclude_p && n % claim.exclude_p == 0) {
      ++skipped;
      continue;
    }
    const std::uint64_t r = detail::residue_of(s.ring(), s[claim.A * n + claim.B], claim.M);
    ++rep.n_checked;
    if (r != 0) rep.violations.push_back({n, std::to_string(r)});
  }
  if (skipped) rep.detail = std::to_string(skipped) + " indexes excluded";
  rep.elapsed_ms = timer.elapsed_ms();
  return rep;
}

template <typename R>
verification_report check_claim(const series<R>& s, const congruence_claim& claim) {
  return check_claim(s, claim, claim.n_max);
}

// The Theorem-2 shape: for prime p = 7 mod 8 and k >= 0,
//   c5(4 p^{2k+1} n + (8 p^{2k+2} + 1)/3) = 0 mod 4 whenever p does not
// divide n. The offset is integral because p^2 = 1 mod 3.
inline congruence_claim theorem2_family(std::int64_t p, std::int64_t k) {
  if (p % 8 != 7 || !detail::is_prime(p))
    throw domain_error("theorem2_family wants a prime p = 7 mod 8, got " + std::to_string(p));
  if (k < 0) throw domain_error("theorem2_family wants k >= 0");
  __int128 pk1 = 1;
  for (std::int64_t i = 0; i < 2 * k + 1; ++i) {
    pk1 *= p;
    if (pk1 > max_order) throw domain_error("theorem2_family: p^{2k+1} exceeds any usable order");
  }
  const __int128 A = 4 * pk1;
  const __int128 B = (8 * pk1 * p + 1) / 3;
  if (A > max_order || B > max_order)
    throw domain_error("theorem2_family: progression exceeds any usable order");
  return make_claim("c5", static_cast<std::int64_t>(A), static_cast<std::int64_t>(B), 4, p);
}

// The fixed claim list: Keith's three proven congruences, the conjectured
// c5 family it extends, and the b1/b2/b3/b progressions the proof runs
// through. Recommended n_max per claim is sized so the required series order
// stays within a global budget.
inline constexpr std::int64_t claim_order_budget = 12000;

inline std::vector<congruence_claim> builtin_claims() {
  const auto claim = [](const char* series, std::int64_t A, std::int64_t B, std::uint64_t M) {
    return make_claim(series, A, B, M, 0, (claim_order_budget - B) / A);
  };
  std::vector<congruence_claim> v;
  // Proven directly: c5 mod 2 and 4, c9 mod 2.
  v.push_back(claim("c5", 8, 5, 2));
  v.push_back(claim("c5", 32, 31, 4));
  v.push_back(claim("c9", 16, 12, 2));
  // The conjectured c5 family (now proven): mod 8 on three chains, mod 4 on
  // two more and on three residues mod 196.
  v.push_back(claim("c5", 32, 31, 8));
  v.push_back(claim("c5", 128, 123, 8));
  v.push_back(claim("c5", 512, 491, 8));
  v.push_back(claim("c5", 64, 19, 4));
  v.push_back(claim("c5", 256, 75, 4));
  for (std::int64_t r : {110, 138, 194}) v.push_back(claim("c5", 196, r, 4));
  // b1 inherits the c5 progressions at the same or halved modulus.
  v.push_back(claim("b1", 32, 31, 8));
  v.push_back(claim("b1", 128, 123, 8));
  v.push_back(claim("b1", 512, 491, 8));
  v.push_back(claim("b1", 64, 19, 4));
  v.push_back(claim("b1", 256, 75, 4));
  // b2: mod 4 on the 31-chain, mod 2 on the 19-chain.
  v.push_back(claim("b2", 32, 31, 4));
  v.push_back(claim("b2", 128, 123, 4));
  v.push_back(claim("b2", 512, 491, 4));
  v.push_back(claim("b2", 32, 19, 2));
  v.push_back(claim("b2", 128, 75, 2));
  // b3: mod 2 on the halved chain.
  v.push_back(claim("b3", 16, 15, 2));
  v.push_back(claim("b3", 64, 59, 2));
  v.push_back(claim("b3", 256, 235, 2));
  // b1 and b on the mod-196 / mod-49 routes.
  for (std::int64_t r : {110, 138, 194}) v.push_back(claim("b1", 196, r, 4));
  for (std::int64_t r : {27, 34, 48}) v.push_back(claim("b", 49, r, 4));
  // b2 mod 2 on all six mod-196 residues.
  for (std::int64_t r : {26, 54, 110, 138, 166, 194}) v.push_back(claim("b2", 196, r, 2));
  return v;
}

struct density_result {
  std::int64_t count = 0;   // indices n < n_max with coefficient = 0 mod M
  double fraction = 0.0;
};

template <typename R>
density_result density_scan(const series<R>& s, std::uint64_t m, std::int64_t n_max) {
  if (m < 2) throw domain_error("density_scan wants modulus >= 2");
  if (n_max < 1) throw domain_error("density_scan wants n_max >= 1");
  if (n_max - 1 > s.order())
    throw order_error("density_scan needs order " + std::to_string(n_max - 1) + ", series has " +
                      std::to_string(s.order()));
  if (s.ring().modulus() != 0 && s.ring().modulus() % m != 0)
    throw ring_mismatch_error("density_scan: series modulus " + std::to_string(s.ring().modulus()) +
                              " not divisible by " + std::to_string(m));
  density_result r;
  for (std::int64_t n = 0; n < n_max; ++n)
    if (detail::residue_of(s.ring(), s[n], m) == 0) ++r.count;
  r.fraction = static_cast<double>(r.count) / static_cast<double>(n_max);
  return r;
}

}  // namespace qseries
