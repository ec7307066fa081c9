#pragma once

#include <cstdint>
#include <string>

#include "qseries/expr.hpp"

namespace qseries {

// Bottom-up evaluation of a parsed expression at truncation order N over a
// given ring. Division inverts the denominator, so it demands a unit constant
// term (non_unit_error otherwise); integer powers route through series pow,
// which handles negatives the same way.
template <typename R>
series<R> evaluate(const expr_ptr& e, std::int64_t order, const R& ring) {
  if (!e) throw domain_error("evaluate: empty expression");
  switch (e->kind) {
    case expr_kind::int_lit:
      return constant_series(ring, order, static_cast<long long>(e->value));
    case expr_kind::q_pow: return monomial(ring, order, e->value);
    case expr_kind::eta: return eta_quotient(eta_quotient_spec{{e->value, 1}}, order, ring);
    case expr_kind::psi:
      return false_theta_psi(signed_monomial(-1, e->value), signed_monomial(+1, 1), order, ring);
    case expr_kind::theta: return theta_f(e->m1, e->m2, order, theta_form::sum, ring);
    case expr_kind::poch: return pochhammer(e->m1, e->m2, order, ring);
    case expr_kind::quadsum:
      return quad_sum({e->qa, e->qb, e->qc, e->smode, e->srange}, order, ring);
    case expr_kind::named: return named_series(e->name, order, ring);
    case expr_kind::named_c: return c_t_series(e->value, order, ring);
    case expr_kind::neg: return neg(evaluate(e->lhs, order, ring));
    case expr_kind::add: return add(evaluate(e->lhs, order, ring), evaluate(e->rhs, order, ring));
    case expr_kind::sub: return sub(evaluate(e->lhs, order, ring), evaluate(e->rhs, order, ring));
    case expr_kind::mul_: return mul(evaluate(e->lhs, order, ring), evaluate(e->rhs, order, ring));
    case expr_kind::div_:
      return mul(evaluate(e->lhs, order, ring), invert(evaluate(e->rhs, order, ring)));
    case expr_kind::pow_: return pow(evaluate(e->lhs, order, ring), e->value);
  }
  throw domain_error("evaluate: unhandled node");
}

inline series<exact_ring> evaluate_exact(const expr_ptr& e, std::int64_t order) {
  return evaluate(e, order, exact_ring{});
}

inline series<mod_ring> evaluate_mod(const expr_ptr& e, std::int64_t order, std::uint64_t modulus) {
  return evaluate(e, order, mod_ring(modulus));
}

inline series<exact_ring> evaluate_exact(const std::string& text, std::int64_t order) {
  return evaluate_exact(parse(text), order);
}

inline series<mod_ring> evaluate_mod(const std::string& text, std::int64_t order,
                                     std::uint64_t modulus) {
  return evaluate_mod(parse(text), order, modulus);
}

}  // namespace qseries
