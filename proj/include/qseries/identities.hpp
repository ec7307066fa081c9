#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qseries/eval.hpp"
#include "qseries/report.hpp"

namespace qseries {

// One checkable equality between two expressions, coefficientwise to a
// truncation order. modulus 0 compares exactly; otherwise both sides are
// evaluated in Z/modulus. When dissect_m > 0 the left side is m-dissected
// (take exponents = dissect_m * n + dissect_r) before comparing, which is how
// statements about subsequences like "the even-index part of b1" are encoded.
struct identity_entry {
  std::string name;
  std::string lhs;
  std::string rhs;
  std::uint64_t modulus = 0;
  std::int64_t default_order = 1500;
  std::int64_t dissect_m = 0;
  std::int64_t dissect_r = 0;
};

// Every series identity the verification suites rely on. Exact entries carry
// default order 1500, congruence entries 2000. Names are stable identifiers;
// the CLI exposes them via `verify-id NAME` and `catalog`.
inline const std::vector<identity_entry>& catalog() {
  static const std::vector<identity_entry> entries = {
      // Triple-product specializations: f(-q,-q^2), f(-q,-q), f(-q,-q^3).
      {"jtp-f1", "theta(-q^1,-q^2)", "f1"},
      {"jtp-phi", "theta(-q^1,-q^1)", "f1^2/f2"},
      {"jtp-psiodd", "theta(-q^1,-q^3)", "f1*f4/f2"},

      // A + B as a single signed-base product.
      {"AB-product", "A+B", "poch(-q^1;-q^6)*poch(q^5;-q^6)*poch(-q^6;-q^6)"},

      // The reciprocal 1/(A+B) as eta quotient times two thetas, the theta
      // product it contains, and the fully reduced closed form.
      {"recip-form", "b1", "f4*f6^2*f24/(f2*f12^6)*theta(-q^1,-q^11)*theta(q^5,q^7)"},
      {"theta-mult", "theta(-q^1,-q^11)*theta(q^5,q^7)",
       "f6*f8*f24/f12-q^1*f4*f6*f24^3/(f8*f12^2)"},
      {"b1-closed", "b1", "f4*f6^3*f24^2/(f2*f12^7)*(f8-q^1*f4*f24^2/(f8*f12))"},

      // 2-dissections of f3^3/f1, f1^2, 1/f1^2, f3^2/f1^2 and its q -> -q
      // image, and f1^3/f3.
      {"xia-yao-cube", "f3^3/f1", "f4^3*f6^2/(f2^2*f12)+q^1*f12^3/f4"},
      {"square-2dissect", "f1^2", "f2*f8^5/(f4^2*f16^2)-2*q^1*f2*f16^2/f8"},
      {"inv-square-2dissect", "1/f1^2", "f8^5/(f2^5*f16^2)+2*q^1*f4^2*f16^2/(f2^5*f8)"},
      {"ratio-3-29", "f3^2/f1^2",
       "f4^4*f6*f12^2/(f2^5*f8*f24)+2*q^1*f4*f6^2*f8*f24/(f2^4*f12)"},
      {"ratio-3-29-neg", "f1^2/f3^2",
       "f2*f4^2*f12^4/(f6^5*f8*f24)-2*q^1*f2^2*f8*f12*f24/(f4*f6^4)"},
      {"cube-ratio", "f1^3/f3", "f4^3/f12-3*q^1*f2^2*f12^3/(f4*f6^2)"},

      // (q,q^5,q^6;q^6)-type product as an eta quotient.
      {"eta-6", "poch(q^1;q^6)*poch(q^5;q^6)*poch(q^6;q^6)", "f1*f6^2/(f2*f3)"},

      // Reindexed splittings of quadratic-exponent sums: even/odd halves and
      // the seven residue classes mod 7 of the summation index.
      {"split-3n2p2n", "quadsum(3,2,0;plus;n>=0)",
       "quadsum(12,4,0;plus;n>=0)+q^5*quadsum(12,16,0;plus;n>=0)"},
      {"split-3n2p4n", "quadsum(3,4,0;plus;n>=0)",
       "quadsum(12,8,0;plus;n>=0)+q^7*quadsum(12,20,0;plus;n>=0)"},
      {"split-mod7-bilateral", "quadsum(3,2,0;plus;all)",
       "quadsum(147,14,0;plus;all)+quadsum(147,-28,1;plus;all)+quadsum(147,56,5;plus;all)"
       "+quadsum(147,-70,8;plus;all)+quadsum(147,98,16;plus;all)"
       "+quadsum(147,-112,21;plus;all)+quadsum(147,140,33;plus;all)"},
      {"split-mod7-positive", "quadsum(3,-1,0;plus;n>=1)",
       "quadsum(147,-7,0;plus;n>=1)+quadsum(147,35,2;plus;n>=0)"
       "+quadsum(147,77,10;plus;n>=0)+quadsum(147,119,24;plus;n>=0)"
       "+quadsum(147,161,44;plus;n>=0)+quadsum(147,203,70;plus;n>=0)"
       "+quadsum(147,245,102;plus;n>=0)"},

      // Even and 4n+2 subsequences of b1, as eta quotients.
      {"b1-even", "b1", "f3^3/f1*f2*f4*f12^2/f6^7", 0, 1500, 2, 0},
      {"b1-4n2", "b1", "f1*f6^5/f3^7", 0, 1500, 4, 2},

      // The bilateral sum of q^{3n^2+2n} is itself an eta quotient.
      {"bilateral-eta", "quadsum(3,2,0;plus;all)", "f2^2*f3*f12/(f1*f4*f6)"},

      // Congruence identities.
      {"AB-mod2", "A+B", "f1*f6^2/(f2*f3)", 2, 2000},
      {"cube-mod2", "f3^3/f1", "quadsum(3,2,0;plus;all)", 2, 2000},
      {"half-cube-mod2", "f3/f1", "f8/f6+q^1*f6*f24/f4", 2, 2000},

      // f_k^{2^m} = f_{2k}^{2^{m-1}} mod 2^m, the freshman's-dream square.
      {"freshman-mod2-f1", "f1^2", "f2", 2, 2000},
      {"freshman-mod2-f2", "f2^2", "f4", 2, 2000},
      {"freshman-mod2-f3", "f3^2", "f6", 2, 2000},
      {"freshman-mod4-f1", "f1^4", "f2^2", 4, 2000},
      {"freshman-mod4-f2", "f2^4", "f4^2", 4, 2000},
      {"freshman-mod4-f3", "f3^4", "f6^2", 4, 2000},
      {"freshman-mod8-f1", "f1^8", "f2^4", 8, 2000},
      {"freshman-mod8-f2", "f2^8", "f4^4", 8, 2000},
      {"freshman-mod8-f3", "f3^8", "f6^4", 8, 2000},
  };
  return entries;
}

inline const identity_entry* find_identity(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

namespace detail {

// At most this many mismatches are itemized per identity; the total count
// still lands in the detail string. Congruence claims are different: they
// record every violation (see congruence.hpp).
inline constexpr std::size_t max_identity_violations = 16;

template <typename R>
verification_report compare_series(const std::string& name, const series<R>& lhs,
                                   const series<R>& rhs, stopwatch timer) {
  verification_report rep;
  rep.name = name;
  const std::int64_t n = std::min(lhs.order(), rhs.order());
  rep.n_checked = n + 1;
  const auto& ring = lhs.ring();
  std::int64_t first = -1, total = 0;
  for (std::int64_t i = 0; i <= n; ++i) {
    auto d = lhs[i];
    ring.sub_assign(d, rhs[i]);
    if (ring.is_zero(d)) continue;
    if (first < 0) first = i;
    ++total;
    if (rep.violations.size() < max_identity_violations)
      rep.violations.push_back({i, ring.to_string(d)});
  }
  if (first >= 0) {
    std::string window = "first mismatch at n=" + std::to_string(first) + " of " +
                         std::to_string(total) + " total; lhs/rhs near it:";
    for (std::int64_t i = std::max<std::int64_t>(0, first - 2);
         i <= std::min(n, first + 2); ++i)
      window += " [" + std::to_string(i) + "] " + ring.to_string(lhs[i]) + "/" +
                ring.to_string(rhs[i]);
    rep.detail = window;
  } else {
    rep.detail = "coefficients 0.." + std::to_string(n) + " agree";
  }
  rep.elapsed_ms = timer.elapsed_ms();
  return rep;
}

}  // namespace detail

// Evaluate both sides to order N and compare coefficientwise, mod M when
// M > 0. The violation value is the coefficient difference (canonical residue
// in the modular case); the detail string shows both sides around the first
// mismatch.
inline verification_report verify_identity(const identity_entry& entry, std::int64_t order) {
  stopwatch timer;
  try {
    if (entry.modulus == 0) {
      series<exact_ring> lhs = evaluate_exact(entry.lhs, order);
      if (entry.dissect_m > 0) lhs = dissect(lhs, entry.dissect_m, entry.dissect_r);
      const series<exact_ring> rhs = evaluate_exact(entry.rhs, order);
      return detail::compare_series(entry.name, lhs, rhs, timer);
    }
    series<mod_ring> lhs = evaluate_mod(entry.lhs, order, entry.modulus);
    if (entry.dissect_m > 0) lhs = dissect(lhs, entry.dissect_m, entry.dissect_r);
    const series<mod_ring> rhs = evaluate_mod(entry.rhs, order, entry.modulus);
    return detail::compare_series(entry.name, lhs, rhs, timer);
  } catch (const error& e) {
    throw error(entry.name + ": " + e.what());
  }
}

inline verification_report verify_identity(const identity_entry& entry) {
  return verify_identity(entry, entry.default_order);
}

// Ad-hoc pair form, for `verify-id --lhs ... --rhs ...`.
inline verification_report verify_identity(const std::string& lhs, const std::string& rhs,
                                           std::uint64_t modulus, std::int64_t order) {
  identity_entry e;
  e.name = lhs + (modulus ? " = " + rhs + " mod " + std::to_string(modulus) : " = " + rhs);
  e.lhs = lhs;
  e.rhs = rhs;
  e.modulus = modulus;
  return verify_identity(e, order);
}

}  // namespace qseries
