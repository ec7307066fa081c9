#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qseries/series.hpp"

namespace qseries {

// +-q^e. Arguments and bases of Pochhammer products and theta functions.
struct signed_monomial {
  int sign;               // +1 or -1
  std::int64_t exponent;  // >= 0

  signed_monomial(int s, std::int64_t e) : sign(s), exponent(e) {
    if (s != 1 && s != -1) throw domain_error("monomial sign must be +-1");
    if (e < 0) throw domain_error("monomial exponent must be >= 0, got " + std::to_string(e));
  }
  std::string str() const { return (sign < 0 ? "-q^" : "q^") + std::to_string(exponent); }
};

enum class sign_mode { plus, alt_n, alt_tri_up, alt_tri_down };
enum class sum_range { n_ge_0, n_ge_1, n_le_m1, bilateral };

// Exponent polynomial a n^2 + b n + c summed with a sign pattern over a range.
// Houses A, B and every reindexed splitting used by the dissection lemmas.
struct quad_sum_spec {
  std::int64_t a, b, c;
  sign_mode sign;
  sum_range range;
};

// Eta quotient prod f_m^e with f_m = (q^m; q^m)_inf.
using eta_quotient_spec = std::vector<std::pair<std::int64_t, std::int64_t>>;

namespace detail {

// n(n+1)/2 and n(n-1)/2 are nonnegative for every integer n; their parities
// drive all sign bookkeeping below. Values stay far below 2^63 because
// enumeration stops once exponents pass max_order.
inline std::int64_t tri_up(std::int64_t n) { return n * (n + 1) / 2; }
inline std::int64_t tri_down(std::int64_t n) { return n * (n - 1) / 2; }

inline int pow_sign(int s, std::int64_t parity_count) { return (parity_count % 2 != 0) ? s : 1; }

}  // namespace detail

// prod_{k>=0} (1 - arg*base^k), where base^k carries sign(base)^k. Each factor
// 1 - s q^e is folded in with one top-down pass, so the whole product is
// O(N^2 / base.exponent).
template <typename R>
series<R> pochhammer(signed_monomial arg, signed_monomial base, std::int64_t order, const R& ring) {
  if (base.exponent < 1)
    throw domain_error("pochhammer base exponent must be >= 1 (divergent product)");
  series<R> r = one_series(ring, checked_order(order));
  for (std::int64_t k = 0;; ++k) {
    const __int128 e128 = static_cast<__int128>(arg.exponent) + static_cast<__int128>(k) * base.exponent;
    if (e128 > order) break;
    const std::int64_t e = static_cast<std::int64_t>(e128);
    const int s = arg.sign * detail::pow_sign(base.sign, k);
    // r *= (1 - s q^e); e == 0 degenerates to scaling by (1 - s).
    if (e == 0) {
      r = scale(r, 1 - s);
      continue;
    }
    for (std::int64_t i = order; i >= e; --i) {
      if (s > 0)
        ring.sub_assign(r.mutable_at(i), r[i - e]);
      else
        ring.add_assign(r.mutable_at(i), r[i - e]);
    }
  }
  return r;
}

inline series<exact_ring> pochhammer(signed_monomial arg, signed_monomial base, std::int64_t order) {
  return pochhammer(arg, base, order, exact_ring{});
}

// prod f_m^e. Negative exponents go through invert; f_m has unit constant.
template <typename R>
series<R> eta_quotient(const eta_quotient_spec& spec, std::int64_t order, const R& ring) {
  series<R> r = one_series(ring, checked_order(order));
  for (const auto& [m, e] : spec) {
    if (m < 1) throw domain_error("eta index must be >= 1, got " + std::to_string(m));
    if (e == 0) throw domain_error("eta exponent must be nonzero (drop the factor instead)");
    const series<R> fm = pochhammer(signed_monomial(+1, m), signed_monomial(+1, m), order, ring);
    r = mul(r, pow(fm, e));
  }
  return r;
}

inline series<exact_ring> eta_quotient(const eta_quotient_spec& spec, std::int64_t order) {
  return eta_quotient(spec, order, exact_ring{});
}

enum class theta_form { sum, product };

// f(a,b) = sum_{n in Z} a^{n(n+1)/2} b^{n(n-1)/2}. The sum form enumerates
// both directions until exponents pass the order (they are nondecreasing in
// |n| because exponent(a)+exponent(b) >= 1); the product form is the Jacobi
// triple product (-a, -b, ab; ab)_inf.
template <typename R>
series<R> theta_f(signed_monomial a, signed_monomial b, std::int64_t order, theta_form form,
                  const R& ring) {
  if (a.exponent + b.exponent < 1)
    throw domain_error("theta_f wants exponent(a)+exponent(b) >= 1 (|ab| < 1 analogue)");
  checked_order(order);
  if (form == theta_form::product) {
    const signed_monomial ab(a.sign * b.sign, a.exponent + b.exponent);
    series<R> r = pochhammer(signed_monomial(-a.sign, a.exponent), ab, order, ring);
    r = mul(r, pochhammer(signed_monomial(-b.sign, b.exponent), ab, order, ring));
    r = mul(r, pochhammer(ab, ab, order, ring));
    return r;
  }
  series<R> r(ring, order);
  const auto place = [&](std::int64_t n) -> bool {
    const std::int64_t tu = detail::tri_up(n), td = detail::tri_down(n);
    const __int128 e = static_cast<__int128>(a.exponent) * tu + static_cast<__int128>(b.exponent) * td;
    if (e > order) return false;
    const int s = detail::pow_sign(a.sign, tu) * detail::pow_sign(b.sign, td);
    const auto sv = ring.from_int(s);
    ring.add_assign(r.mutable_at(static_cast<std::int64_t>(e)), sv);
    return true;
  };
  for (std::int64_t n = 0; place(n); ++n) {}
  for (std::int64_t n = -1; place(n); --n) {}
  return r;
}

inline series<exact_ring> theta_f(signed_monomial a, signed_monomial b, std::int64_t order,
                                  theta_form form) {
  return theta_f(a, b, order, form, exact_ring{});
}

// Psi(a,b) = sum_{n>=0} - sum_{n<=-1} of the theta summand: the false theta.
template <typename R>
series<R> false_theta_psi(signed_monomial a, signed_monomial b, std::int64_t order, const R& ring) {
  if (a.exponent + b.exponent < 1)
    throw domain_error("false_theta_psi wants exponent(a)+exponent(b) >= 1");
  checked_order(order);
  series<R> r(ring, order);
  const auto place = [&](std::int64_t n, int weight) -> bool {
    const std::int64_t tu = detail::tri_up(n), td = detail::tri_down(n);
    const __int128 e = static_cast<__int128>(a.exponent) * tu + static_cast<__int128>(b.exponent) * td;
    if (e > order) return false;
    const int s = weight * detail::pow_sign(a.sign, tu) * detail::pow_sign(b.sign, td);
    const auto sv = ring.from_int(s);
    ring.add_assign(r.mutable_at(static_cast<std::int64_t>(e)), sv);
    return true;
  };
  for (std::int64_t n = 0; place(n, +1); ++n) {}
  for (std::int64_t n = -1; place(n, -1); --n) {}
  return r;
}

inline series<exact_ring> false_theta_psi(signed_monomial a, signed_monomial b, std::int64_t order) {
  return false_theta_psi(a, b, order, exact_ring{});
}

namespace detail {

inline std::int64_t isqrt64(std::int64_t v) {
  if (v < 0) return -1;
  std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

inline int quad_sign(sign_mode mode, std::int64_t n) {
  switch (mode) {
    case sign_mode::plus: return 1;
    case sign_mode::alt_n: return (n % 2 != 0) ? -1 : 1;
    case sign_mode::alt_tri_up: return (tri_up(n) % 2 != 0) ? -1 : 1;
    case sign_mode::alt_tri_down: return (tri_down(n) % 2 != 0) ? -1 : 1;
  }
  return 1;
}

}  // namespace detail

// Direct summation of sign(n) q^{a n^2 + b n + c} over the range. Enumeration
// brackets the n with exponent <= order by the real roots of the parabola; any
// contributing n with a negative exponent is a build error, per the spec of
// the exponent polynomial.
template <typename R>
series<R> quad_sum(const quad_sum_spec& spec, std::int64_t order, const R& ring) {
  if (spec.a <= 0) throw domain_error("quad_sum wants a > 0, got " + std::to_string(spec.a));
  checked_order(order);
  series<R> r(ring, order);

  const __int128 disc = static_cast<__int128>(spec.b) * spec.b +
                        static_cast<__int128>(4) * spec.a * (static_cast<__int128>(order) - spec.c);
  if (disc < 0) return r;  // exponent > order for every real n: empty sum
  // disc <= b^2 + 4*a*(order+|c|) stays well inside int64 at desk scale.
  const std::int64_t root = detail::isqrt64(static_cast<std::int64_t>(disc));
  std::int64_t lo = (-spec.b - root) / (2 * spec.a) - 2;
  std::int64_t hi = (-spec.b + root) / (2 * spec.a) + 2;
  switch (spec.range) {
    case sum_range::n_ge_0: lo = std::max<std::int64_t>(lo, 0); break;
    case sum_range::n_ge_1: lo = std::max<std::int64_t>(lo, 1); break;
    case sum_range::n_le_m1: hi = std::min<std::int64_t>(hi, -1); break;
    case sum_range::bilateral: break;
  }
  for (std::int64_t n = lo; n <= hi; ++n) {
    const __int128 e = static_cast<__int128>(spec.a) * n * n + static_cast<__int128>(spec.b) * n + spec.c;
    if (e > order) continue;
    if (e < 0)
      throw domain_error("quad_sum exponent " + std::to_string(static_cast<std::int64_t>(e)) +
                         " negative at n = " + std::to_string(n));
    const auto sv = ring.from_int(detail::quad_sign(spec.sign, n));
    ring.add_assign(r.mutable_at(static_cast<std::int64_t>(e)), sv);
  }
  return r;
}

inline series<exact_ring> quad_sum(const quad_sum_spec& spec, std::int64_t order) {
  return quad_sum(spec, order, exact_ring{});
}

// 1 / Psi(-q^t, q): the coefficient family c_t(n).
template <typename R>
series<R> c_t_series(std::int64_t t, std::int64_t order, const R& ring) {
  if (t < 1) throw domain_error("c_t_series wants t >= 1, got " + std::to_string(t));
  return invert(false_theta_psi(signed_monomial(-1, t), signed_monomial(+1, 1), order, ring));
}

inline series<exact_ring> c_t_series(std::int64_t t, std::int64_t order) {
  return c_t_series(t, order, exact_ring{});
}

enum class series_name { A, B, b1, b2, b3, a1, a2, b };

inline const char* to_string(series_name n) {
  switch (n) {
    case series_name::A: return "A";
    case series_name::B: return "B";
    case series_name::b1: return "b1";
    case series_name::b2: return "b2";
    case series_name::b3: return "b3";
    case series_name::a1: return "a1";
    case series_name::a2: return "a2";
    case series_name::b: return "b";
  }
  return "?";
}

// The derived series the dissection lemmas revolve around:
//   A, B     halves of f(-q^5, q), exponents 3n^2+2n over n>=0 / n<=-1
//   b1       1/(A+B)
//   b2       B/(A+B)^2
//   b3       (A^2 B + A B^2)/(A+B)^4
//   a1       f3^6/f1^2
//   a2       (f6^3/f2) sum_{n>=1} q^{3n^2}
//   b        f1 f3 f6
template <typename R>
series<R> named_series(series_name name, std::int64_t order, const R& ring) {
  const auto build_A = [&] {
    return quad_sum({3, 2, 0, sign_mode::alt_tri_up, sum_range::n_ge_0}, order, ring);
  };
  const auto build_B = [&] {
    return quad_sum({3, 2, 0, sign_mode::alt_tri_up, sum_range::n_le_m1}, order, ring);
  };
  switch (name) {
    case series_name::A: return build_A();
    case series_name::B: return build_B();
    case series_name::b1: return invert(add(build_A(), build_B()));
    case series_name::b2: {
      const auto AB = add(build_A(), build_B());
      return mul(build_B(), invert(mul(AB, AB)));
    }
    case series_name::b3: {
      const auto A = build_A(), B = build_B();
      const auto AB = add(A, B);
      const auto num = add(mul(mul(A, A), B), mul(A, mul(B, B)));
      return mul(num, invert(pow(AB, 4)));
    }
    case series_name::a1: return eta_quotient({{3, 6}, {1, -2}}, order, ring);
    case series_name::a2:
      return mul(eta_quotient({{6, 3}, {2, -1}}, order, ring),
                 quad_sum({3, 0, 0, sign_mode::plus, sum_range::n_ge_1}, order, ring));
    case series_name::b: return eta_quotient({{1, 1}, {3, 1}, {6, 1}}, order, ring);
  }
  throw domain_error("unknown named series");
}

inline series<exact_ring> named_series(series_name name, std::int64_t order) {
  return named_series(name, order, exact_ring{});
}

}  // namespace qseries
