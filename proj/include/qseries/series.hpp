#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qseries/rings.hpp"

namespace qseries {

// Hard ceiling on truncation orders. Quadratic-exponent enumeration and the
// 64-bit exponent checks are calibrated against this.
inline constexpr std::int64_t max_order = std::int64_t{1} << 20;

inline std::int64_t checked_order(std::int64_t order) {
  if (order < 0) throw domain_error("series order must be >= 0, got " + std::to_string(order));
  if (order > max_order)
    throw domain_error("series order " + std::to_string(order) + " exceeds cap " +
                       std::to_string(max_order));
  return order;
}

// Truncated formal power series sum_{n=0}^{order} c_n q^n over ring R.
// Immutable by convention: every operation below is a pure function returning
// a fresh series; nothing mutates its inputs after construction.
template <typename R>
class series {
public:
  using ring_type = R;
  using value_type = typename R::value_type;

  series(R ring, std::int64_t order)
      : ring_(std::move(ring)), order_(checked_order(order)), c_(static_cast<std::size_t>(order_ + 1), ring_.zero()) {}

  const R& ring() const { return ring_; }
  std::int64_t order() const { return order_; }

  // Unchecked access for the operations in this header; coeff() is the
  // bounds-checked public accessor.
  const value_type& operator[](std::int64_t n) const { return c_[static_cast<std::size_t>(n)]; }
  value_type& mutable_at(std::int64_t n) { return c_[static_cast<std::size_t>(n)]; }

  bool operator==(const series& o) const {
    if (!ring_.same(o.ring_) || order_ != o.order_) return false;
    for (std::int64_t n = 0; n <= order_; ++n)
      if (!ring_.equal(c_[static_cast<std::size_t>(n)], o.c_[static_cast<std::size_t>(n)])) return false;
    return true;
  }
  bool operator!=(const series& o) const { return !(*this == o); }

private:
  R ring_;
  std::int64_t order_;
  std::vector<value_type> c_;
};

template <typename R>
series<R> zero_series(const R& ring, std::int64_t order) {
  return series<R>(ring, order);
}

template <typename R>
series<R> constant_series(const R& ring, std::int64_t order, long long v) {
  series<R> r(ring, order);
  r.mutable_at(0) = ring.from_int(v);
  return r;
}

template <typename R>
series<R> one_series(const R& ring, std::int64_t order) {
  return constant_series(ring, order, 1);
}

// q^k truncated at `order` (the zero series when k > order).
template <typename R>
series<R> monomial(const R& ring, std::int64_t order, std::int64_t k) {
  series<R> r(ring, order);
  if (k >= 0 && k <= order) r.mutable_at(k) = ring.from_int(1);
  return r;
}

template <typename R>
const typename R::value_type& coeff(const series<R>& x, std::int64_t n) {
  if (n < 0 || n > x.order())
    throw order_error("coefficient index " + std::to_string(n) + " beyond truncation order " +
                      std::to_string(x.order()));
  return x[n];
}

template <typename R>
series<R> add(const series<R>& x, const series<R>& y) {
  check_same_ring(x.ring(), y.ring());
  const std::int64_t n = std::min(x.order(), y.order());
  series<R> r(x.ring(), n);
  for (std::int64_t i = 0; i <= n; ++i) {
    r.mutable_at(i) = x[i];
    x.ring().add_assign(r.mutable_at(i), y[i]);
  }
  return r;
}

template <typename R>
series<R> sub(const series<R>& x, const series<R>& y) {
  check_same_ring(x.ring(), y.ring());
  const std::int64_t n = std::min(x.order(), y.order());
  series<R> r(x.ring(), n);
  for (std::int64_t i = 0; i <= n; ++i) {
    r.mutable_at(i) = x[i];
    x.ring().sub_assign(r.mutable_at(i), y[i]);
  }
  return r;
}

template <typename R>
series<R> neg(const series<R>& x) {
  series<R> r = x;
  for (std::int64_t i = 0; i <= r.order(); ++i) x.ring().neg_assign(r.mutable_at(i));
  return r;
}

template <typename R>
series<R> scale(const series<R>& x, long long c) {
  series<R> r(x.ring(), x.order());
  const auto cv = x.ring().from_int(c);
  for (std::int64_t i = 0; i <= x.order(); ++i) r.mutable_at(i) = x.ring().mul(x[i], cv);
  return r;
}

// Plain O(N^2) Cauchy convolution, truncated to the smaller order. Outer loop
// skips zero coefficients, which makes products with sparse theta series cheap
// without changing the result.
template <typename R>
series<R> mul(const series<R>& x, const series<R>& y) {
  check_same_ring(x.ring(), y.ring());
  const auto& ring = x.ring();
  const std::int64_t n = std::min(x.order(), y.order());
  series<R> r(ring, n);
  for (std::int64_t i = 0; i <= n; ++i) {
    if (ring.is_zero(x[i])) continue;
    for (std::int64_t j = 0; j + i <= n; ++j) ring.addmul(r.mutable_at(i + j), x[i], y[j]);
  }
  return r;
}

// Reciprocal by the forward-substitution recurrence
//   y_0 = x_0^{-1},  y_n = -x_0^{-1} * sum_{k=1..n} x_k y_{n-k}.
// Iterating only the nonzero x_k is the same sum with the zero summands
// dropped, so the output is bit-identical to the dense recurrence.
template <typename R>
series<R> invert(const series<R>& x) {
  const auto& ring = x.ring();
  typename R::value_type c0inv;
  if (!ring.try_invert(x[0], c0inv))
    throw non_unit_error("cannot invert series: constant term " + ring.to_string(x[0]) +
                         " is not a unit (mod " + std::to_string(ring.modulus()) + ")");
  std::vector<std::int64_t> nz;
  for (std::int64_t k = 1; k <= x.order(); ++k)
    if (!ring.is_zero(x[k])) nz.push_back(k);

  series<R> y(ring, x.order());
  y.mutable_at(0) = c0inv;
  auto acc = ring.zero();
  for (std::int64_t n = 1; n <= x.order(); ++n) {
    acc = ring.zero();
    for (std::int64_t k : nz) {
      if (k > n) break;
      ring.addmul(acc, x[k], y[n - k]);
    }
    acc = ring.mul(acc, c0inv);
    ring.neg_assign(acc);
    y.mutable_at(n) = acc;
  }
  return y;
}

// Repeated squaring; pow(x, -e) = invert(pow(x, e)) per the series contract.
template <typename R>
series<R> pow(const series<R>& x, std::int64_t e) {
  if (e < 0) return invert(pow(x, -e));
  series<R> r = one_series(x.ring(), x.order());
  series<R> b = x;
  std::uint64_t k = static_cast<std::uint64_t>(e);
  while (k != 0) {
    if (k & 1) r = mul(r, b);
    k >>= 1;
    if (k != 0) b = mul(b, b);
  }
  return r;
}

// Multiply by q^k: coefficients move up, the top k fall off the truncation.
template <typename R>
series<R> shift(const series<R>& x, std::int64_t k) {
  if (k < 0) throw domain_error("shift wants k >= 0, got " + std::to_string(k));
  series<R> r(x.ring(), x.order());
  for (std::int64_t i = 0; i + k <= x.order(); ++i) r.mutable_at(i + k) = x[i];
  return r;
}

// q -> q^m. The truncation order scales to m*order (capped) so that no
// retained coefficient is lost; substitute_power(x, 1) == x.
template <typename R>
series<R> substitute_power(const series<R>& x, std::int64_t m) {
  if (m < 1) throw domain_error("substitute_power wants m >= 1, got " + std::to_string(m));
  const std::int64_t n = std::min(x.order() * m, max_order);
  series<R> r(x.ring(), n);
  for (std::int64_t i = 0; i <= x.order() && i * m <= n; ++i) r.mutable_at(i * m) = x[i];
  return r;
}

// sum_n x_{mn+r} q^n, order floor((N-r)/m). When r exceeds the truncation
// there is nothing to extract: the zero series of order 0.
template <typename R>
series<R> dissect(const series<R>& x, std::int64_t m, std::int64_t r) {
  if (m < 1) throw domain_error("dissect wants m >= 1, got " + std::to_string(m));
  if (r < 0 || r >= m)
    throw domain_error("dissect residue " + std::to_string(r) + " outside 0.." + std::to_string(m - 1));
  if (r > x.order()) return series<R>(x.ring(), 0);
  series<R> out(x.ring(), (x.order() - r) / m);
  for (std::int64_t i = 0; i <= out.order(); ++i) out.mutable_at(i) = x[m * i + r];
  return out;
}

// First n+1 coefficients as a series of order n <= x.order().
template <typename R>
series<R> truncate(const series<R>& x, std::int64_t n) {
  if (n > x.order())
    throw order_error("cannot truncate to order " + std::to_string(n) + " from order " +
                      std::to_string(x.order()));
  series<R> r(x.ring(), n);
  for (std::int64_t i = 0; i <= n; ++i) r.mutable_at(i) = x[i];
  return r;
}

inline series<mod_ring> reduce_mod(const series<exact_ring>& x, std::uint64_t m) {
  mod_ring ring(m);
  series<mod_ring> r(ring, x.order());
  for (std::int64_t i = 0; i <= x.order(); ++i) r.mutable_at(i) = ring.from_mpz(x[i]);
  return r;
}

inline series<mod_ring> reduce_mod(const series<mod_ring>& x, std::uint64_t m) {
  if (m < 2 || x.ring().modulus() % m != 0)
    throw ring_mismatch_error("cannot reduce mod " + std::to_string(m) + " from mod " +
                              std::to_string(x.ring().modulus()) + " (not a divisor)");
  mod_ring ring(m);
  series<mod_ring> r(ring, x.order());
  for (std::int64_t i = 0; i <= x.order(); ++i) r.mutable_at(i) = x[i] % m;
  return r;
}

}  // namespace qseries
