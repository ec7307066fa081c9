#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace qseries {

// Every engine failure derives from qseries::error so callers (and the CLI
// exit-code mapping) can treat the taxonomy uniformly.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two series over different coefficient rings met in one operation.
struct ring_mismatch_error : error {
  using error::error;
};

// Inversion/division hit a constant term that is not a unit of the ring.
struct non_unit_error : error {
  using error::error;
};

// Coefficient access or a checker demanded more terms than a series holds.
struct order_error : error {
  using error::error;
};

// Bad argument outside any series: zero base exponent, composite "prime", ...
struct domain_error : error {
  using error::error;
};

// Exact arbitrary-precision integers. modulus() == 0 marks the exact ring.
class exact_ring {
public:
  using value_type = mpz_class;

  std::uint64_t modulus() const { return 0; }
  bool same(const exact_ring&) const { return true; }

  value_type zero() const { return value_type(0); }
  value_type from_int(long long v) const { return value_type(static_cast<long>(v)); }

  void add_assign(value_type& a, const value_type& b) const { a += b; }
  void sub_assign(value_type& a, const value_type& b) const { a -= b; }
  void neg_assign(value_type& a) const { a = -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  // a += b*c without a temporary; the hot spot of every convolution.
  void addmul(value_type& a, const value_type& b, const value_type& c) const {
    mpz_addmul(a.get_mpz_t(), b.get_mpz_t(), c.get_mpz_t());
  }

  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }

  // Units of Z are +-1; false signals a non-unit (caller owns the error text).
  bool try_invert(const value_type& a, value_type& out) const {
    if (a == 1 || a == -1) {
      out = a;
      return true;
    }
    return false;
  }

  std::string to_string(const value_type& a) const { return a.get_str(); }
};

// Integers mod M, canonical representatives 0..M-1. M fits in 63 bits so a
// product of two residues fits in unsigned __int128.
class mod_ring {
public:
  using value_type = std::uint64_t;

  explicit mod_ring(std::uint64_t m) : m_(m) {
    if (m < 2) throw domain_error("modulus must be 0 (exact) or >= 2, got " + std::to_string(m));
    if (m >> 63) throw domain_error("modulus too large: " + std::to_string(m));
  }

  std::uint64_t modulus() const { return m_; }
  bool same(const mod_ring& o) const { return m_ == o.m_; }

  value_type zero() const { return 0; }
  value_type from_int(long long v) const {
    long long r = v % static_cast<long long>(m_);
    if (r < 0) r += static_cast<long long>(m_);
    return static_cast<value_type>(r);
  }
  value_type from_mpz(const mpz_class& v) const {
    return mpz_fdiv_ui(v.get_mpz_t(), m_);  // floor division: always canonical
  }

  void add_assign(value_type& a, const value_type& b) const {
    a += b;
    if (a >= m_) a -= m_;
  }
  void sub_assign(value_type& a, const value_type& b) const {
    a = (a >= b) ? a - b : a + m_ - b;
  }
  void neg_assign(value_type& a) const {
    if (a != 0) a = m_ - a;
  }
  value_type mul(const value_type& a, const value_type& b) const {
    return static_cast<value_type>((static_cast<unsigned __int128>(a) * b) % m_);
  }
  void addmul(value_type& a, const value_type& b, const value_type& c) const {
    add_assign(a, mul(b, c));
  }

  bool is_zero(const value_type& a) const { return a == 0; }
  bool equal(const value_type& a, const value_type& b) const { return a == b; }

  // Unit iff gcd(a, M) = 1; inverse by extended Euclid.
  bool try_invert(const value_type& a, value_type& out) const {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m_), new_r = static_cast<std::int64_t>(a % m_);
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      t = std::exchange(new_t, t - q * new_t);
      r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) return false;
    out = static_cast<value_type>(t < 0 ? t + static_cast<std::int64_t>(m_) : t);
    return true;
  }

  std::string to_string(const value_type& a) const { return std::to_string(a); }

private:
  std::uint64_t m_;
};

template <typename R>
void check_same_ring(const R& a, const R& b) {
  if (!a.same(b))
    throw ring_mismatch_error("ring mismatch: mod " + std::to_string(a.modulus()) + " vs mod " +
                              std::to_string(b.modulus()));
}

}  // namespace qseries
