#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "qseries/qfactory.hpp"

namespace qseries {

// Expression language over the builders:
//   expr    := '-'? term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := atom ('^' int)?
//   atom    := 'f' int | 'psi(' int ')' | 'theta(' smon ',' smon ')'
//            | 'poch(' smon ';' smon ')'
//            | 'quadsum(' int ',' int ',' int ';' sign ';' range ')'
//            | name | 'q' '^' int | int | '(' expr ')'
//   smon    := ('+'|'-')? 'q' '^' int
//   sign    := 'plus' | 'altn' | 'alt-tri-up' | 'alt-tri-down'
//   range   := 'n>=0' | 'n>=1' | 'n<=-1' | 'all'
//   name    := 'A' | 'B' | 'b1' | 'b2' | 'b3' | 'a1' | 'a2' | 'b' | 'c' int
// Integer tokens directly after '^' and inside quadsum(...) may carry a
// leading '-'; standalone literals are unsigned (negation is the operator).
// Parentheses group only; they do not appear in the tree, and serialize()
// re-inserts exactly the ones the grammar needs, so parse(serialize(e)) == e.

struct parse_error : error {
  int line, column;
  parse_error(const std::string& what, int l, int c)
      : error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " + what),
        line(l),
        column(c) {}
};

enum class expr_kind {
  int_lit,   // value
  q_pow,     // value = exponent
  eta,       // value = index m
  psi,       // value = t, meaning the false theta at (-q^t, q)
  theta,     // m1, m2
  poch,      // m1, m2 (argument; base)
  quadsum,   // qa, qb, qc, smode, srange
  named,     // name
  named_c,   // value = t
  neg,       // lhs
  add, sub, mul_, div_,  // lhs, rhs
  pow_,      // lhs, value = integer exponent
};

struct expr_node;
using expr_ptr = std::shared_ptr<const expr_node>;

struct expr_node {
  expr_kind kind;
  std::int64_t value = 0;
  std::int64_t qa = 0, qb = 0, qc = 0;
  signed_monomial m1{+1, 0}, m2{+1, 0};
  sign_mode smode = sign_mode::plus;
  sum_range srange = sum_range::n_ge_0;
  series_name name = series_name::A;
  expr_ptr lhs, rhs;

  explicit expr_node(expr_kind k) : kind(k) {}
};

inline bool expr_equal(const expr_ptr& x, const expr_ptr& y) {
  if (x == y) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case expr_kind::int_lit:
    case expr_kind::q_pow:
    case expr_kind::eta:
    case expr_kind::psi:
    case expr_kind::named_c:
      return x->value == y->value;
    case expr_kind::theta:
    case expr_kind::poch:
      return x->m1.sign == y->m1.sign && x->m1.exponent == y->m1.exponent &&
             x->m2.sign == y->m2.sign && x->m2.exponent == y->m2.exponent;
    case expr_kind::quadsum:
      return x->qa == y->qa && x->qb == y->qb && x->qc == y->qc && x->smode == y->smode &&
             x->srange == y->srange;
    case expr_kind::named:
      return x->name == y->name;
    case expr_kind::neg:
      return expr_equal(x->lhs, y->lhs);
    case expr_kind::add:
    case expr_kind::sub:
    case expr_kind::mul_:
    case expr_kind::div_:
      return expr_equal(x->lhs, y->lhs) && expr_equal(x->rhs, y->rhs);
    case expr_kind::pow_:
      return x->value == y->value && expr_equal(x->lhs, y->lhs);
  }
  return false;
}

namespace detail {

inline const char* to_word(sign_mode m) {
  switch (m) {
    case sign_mode::plus: return "plus";
    case sign_mode::alt_n: return "altn";
    case sign_mode::alt_tri_up: return "alt-tri-up";
    case sign_mode::alt_tri_down: return "alt-tri-down";
  }
  return "?";
}

inline const char* to_word(sum_range r) {
  switch (r) {
    case sum_range::n_ge_0: return "n>=0";
    case sum_range::n_ge_1: return "n>=1";
    case sum_range::n_le_m1: return "n<=-1";
    case sum_range::bilateral: return "all";
  }
  return "?";
}

inline std::string smon_text(const signed_monomial& m) {
  return (m.sign < 0 ? "-q^" : "q^") + std::to_string(m.exponent);
}

// Grammar position, low to high: 0 expr head (bare neg legal), 1 expr,
// 2 term, 3 factor, 4 atom. A node whose own level is below the position's
// requirement gets parenthesized, which resets the inside to level 0.
inline int expr_level(expr_kind k) {
  switch (k) {
    case expr_kind::neg: return 0;
    case expr_kind::add:
    case expr_kind::sub: return 1;
    case expr_kind::mul_:
    case expr_kind::div_: return 2;
    case expr_kind::pow_: return 3;
    default: return 4;
  }
}

inline void serialize_to(const expr_ptr& e, int min_level, std::string& out) {
  if (!e) throw domain_error("serialize: empty expression");
  if (expr_level(e->kind) < min_level) {
    out += '(';
    serialize_to(e, 0, out);
    out += ')';
    return;
  }
  switch (e->kind) {
    case expr_kind::int_lit:
      if (e->value < 0) throw domain_error("serialize: negative literal (wrap in neg)");
      out += std::to_string(e->value);
      return;
    case expr_kind::q_pow: out += "q^" + std::to_string(e->value); return;
    case expr_kind::eta: out += "f" + std::to_string(e->value); return;
    case expr_kind::psi: out += "psi(" + std::to_string(e->value) + ")"; return;
    case expr_kind::theta:
      out += "theta(" + smon_text(e->m1) + "," + smon_text(e->m2) + ")";
      return;
    case expr_kind::poch:
      out += "poch(" + smon_text(e->m1) + ";" + smon_text(e->m2) + ")";
      return;
    case expr_kind::quadsum:
      out += "quadsum(" + std::to_string(e->qa) + "," + std::to_string(e->qb) + "," +
             std::to_string(e->qc) + ";" + to_word(e->smode) + ";" + to_word(e->srange) + ")";
      return;
    case expr_kind::named: out += to_string(e->name); return;
    case expr_kind::named_c: out += "c" + std::to_string(e->value); return;
    case expr_kind::neg:
      out += '-';
      serialize_to(e->lhs, 2, out);
      return;
    case expr_kind::add:
    case expr_kind::sub:
      serialize_to(e->lhs, min_level, out);
      out += (e->kind == expr_kind::add) ? '+' : '-';
      serialize_to(e->rhs, 2, out);
      return;
    case expr_kind::mul_:
    case expr_kind::div_:
      serialize_to(e->lhs, 2, out);
      out += (e->kind == expr_kind::mul_) ? '*' : '/';
      serialize_to(e->rhs, 3, out);
      return;
    case expr_kind::pow_:
      serialize_to(e->lhs, 4, out);
      out += "^" + std::to_string(e->value);
      return;
  }
}

}  // namespace detail

// Canonical text: whitespace-free, '+' signs implicit, minimal parentheses.
// Unique per tree, hence usable as a cache key.
inline std::string serialize(const expr_ptr& e) {
  std::string out;
  detail::serialize_to(e, 0, out);
  return out;
}

namespace detail {

class parser {
 public:
  explicit parser(std::string text) : text_(std::move(text)) {}

  expr_ptr run() {
    expr_ptr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("expected end of input");
    return e;
  }

 private:
  std::string text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1;
    std::size_t bol = 0;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i)
      if (text_[i] == '\n') {
        ++line;
        bol = i + 1;
      }
    throw parse_error(msg, line, static_cast<int>(pos_ - bol + 1));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool eat(char c) {
    skip_ws();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::int64_t parse_int(bool allow_sign) {
    skip_ws();
    bool negative = false;
    if (allow_sign && peek() == '-') {
      negative = true;
      ++pos_;
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
    std::int64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v < 0) fail("integer literal overflows");
      ++pos_;
    }
    return negative ? -v : v;
  }

  std::string parse_word() {
    skip_ws();
    std::size_t start = pos_;
    while (std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }

  signed_monomial parse_smon() {
    skip_ws();
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      if (text_[pos_] == '-') sign = -1;
      ++pos_;
    }
    skip_ws();
    if (peek() != 'q') fail("expected 'q' in monomial");
    ++pos_;
    expect('^');
    const std::int64_t e = parse_int(false);
    return signed_monomial(sign, e);
  }

  // Reads raw characters up to (not past) the delimiter, trimmed. Used for
  // the sign/range words, whose spellings contain '-', '<', '>', '='.
  std::string read_until(char delim) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != delim) ++pos_;
    if (pos_ == text_.size()) fail(std::string("expected '") + delim + "'");
    std::size_t end = pos_;
    while (end > start && std::isspace(static_cast<unsigned char>(text_[end - 1]))) --end;
    return text_.substr(start, end - start);
  }

  sign_mode parse_sign_word() {
    const std::string w = read_until(';');
    if (w == "plus") return sign_mode::plus;
    if (w == "altn") return sign_mode::alt_n;
    if (w == "alt-tri-up") return sign_mode::alt_tri_up;
    if (w == "alt-tri-down") return sign_mode::alt_tri_down;
    fail("unknown sign mode '" + w + "'");
  }

  sum_range parse_range_word() {
    const std::string w = read_until(')');
    if (w == "n>=0") return sum_range::n_ge_0;
    if (w == "n>=1") return sum_range::n_ge_1;
    if (w == "n<=-1") return sum_range::n_le_m1;
    if (w == "all") return sum_range::bilateral;
    fail("unknown range '" + w + "'");
  }

  expr_ptr leaf(expr_kind k, std::int64_t v) {
    auto n = std::make_shared<expr_node>(k);
    n->value = v;
    return n;
  }

  expr_ptr parse_atom() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      expr_ptr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return leaf(expr_kind::int_lit, parse_int(false));
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected an atom");

    const std::string w = parse_word();
    if (w == "q") {
      expect('^');
      const std::int64_t e = parse_int(false);
      return leaf(expr_kind::q_pow, e);
    }
    if (w == "psi") {
      expect('(');
      const std::int64_t t = parse_int(false);
      expect(')');
      return leaf(expr_kind::psi, t);
    }
    if (w == "theta" || w == "poch") {
      auto n = std::make_shared<expr_node>(w == "theta" ? expr_kind::theta : expr_kind::poch);
      expect('(');
      n->m1 = parse_smon();
      expect(w == "theta" ? ',' : ';');
      n->m2 = parse_smon();
      expect(')');
      return n;
    }
    if (w == "quadsum") {
      auto n = std::make_shared<expr_node>(expr_kind::quadsum);
      expect('(');
      n->qa = parse_int(true);
      expect(',');
      n->qb = parse_int(true);
      expect(',');
      n->qc = parse_int(true);
      expect(';');
      n->smode = parse_sign_word();
      expect(';');
      n->srange = parse_range_word();
      expect(')');
      return n;
    }
    const auto named = [&](series_name nm) {
      auto n = std::make_shared<expr_node>(expr_kind::named);
      n->name = nm;
      return n;
    };
    const bool digits_follow = std::isdigit(static_cast<unsigned char>(peek()));
    if (w == "f") {
      if (!digits_follow) fail("eta symbol wants an index, like f1");
      const std::int64_t m = parse_int(false);
      if (m < 1) fail("eta index must be >= 1");
      return leaf(expr_kind::eta, m);
    }
    if (w == "c") {
      if (!digits_follow) fail("c wants an index, like c5");
      const std::int64_t t = parse_int(false);
      if (t < 1) fail("c index must be >= 1");
      return leaf(expr_kind::named_c, t);
    }
    if (w == "A" && !digits_follow) return named(series_name::A);
    if (w == "B" && !digits_follow) return named(series_name::B);
    if (w == "b") {
      if (!digits_follow) return named(series_name::b);
      const std::int64_t i = parse_int(false);
      if (i == 1) return named(series_name::b1);
      if (i == 2) return named(series_name::b2);
      if (i == 3) return named(series_name::b3);
      fail("unknown name b" + std::to_string(i));
    }
    if (w == "a" && digits_follow) {
      const std::int64_t i = parse_int(false);
      if (i == 1) return named(series_name::a1);
      if (i == 2) return named(series_name::a2);
      fail("unknown name a" + std::to_string(i));
    }
    fail("unknown symbol '" + w + "'");
  }

  expr_ptr parse_factor() {
    expr_ptr base = parse_atom();
    skip_ws();
    if (peek() != '^') return base;
    ++pos_;
    auto n = std::make_shared<expr_node>(expr_kind::pow_);
    n->lhs = base;
    n->value = parse_int(true);
    return n;
  }

  expr_ptr parse_term() {
    expr_ptr e = parse_factor();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '*' && c != '/') return e;
      ++pos_;
      auto n = std::make_shared<expr_node>(c == '*' ? expr_kind::mul_ : expr_kind::div_);
      n->lhs = e;
      n->rhs = parse_factor();
      e = n;
    }
  }

  expr_ptr parse_expr() {
    skip_ws();
    expr_ptr e;
    if (peek() == '-') {
      ++pos_;
      auto n = std::make_shared<expr_node>(expr_kind::neg);
      n->lhs = parse_term();
      e = n;
    } else {
      e = parse_term();
    }
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') return e;
      ++pos_;
      auto n = std::make_shared<expr_node>(c == '+' ? expr_kind::add : expr_kind::sub);
      n->lhs = e;
      n->rhs = parse_term();
      e = n;
    }
  }
};

}  // namespace detail

inline expr_ptr parse(const std::string& text) { return detail::parser(text).run(); }

}  // namespace qseries
