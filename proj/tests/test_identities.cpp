#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <string>

#include <qseries/arith.hpp>
#include <qseries/identities.hpp>

using namespace qseries;

TEST_CASE("catalog shape") {
  const auto& entries = catalog();
  CHECK(entries.size() == 33);

  std::set<std::string> names;
  for (const auto& e : entries) {
    CHECK(names.insert(e.name).second);
    CHECK(!e.lhs.empty());
    CHECK(!e.rhs.empty());
    // every side parses
    CHECK_NOTHROW(parse(e.lhs));
    CHECK_NOTHROW(parse(e.rhs));
    CHECK(e.default_order == (e.modulus == 0 ? 1500 : 2000));
  }

  const identity_entry* cube = find_identity("xia-yao-cube");
  REQUIRE(cube != nullptr);
  CHECK(cube->modulus == 0);
  CHECK(cube->lhs == "f3^3/f1");

  const identity_entry* ab2 = find_identity("AB-mod2");
  REQUIRE(ab2 != nullptr);
  CHECK(ab2->modulus == 2);

  const identity_entry* even = find_identity("b1-even");
  REQUIRE(even != nullptr);
  CHECK(even->dissect_m == 2);
  CHECK(even->dissect_r == 0);

  const identity_entry* four = find_identity("b1-4n2");
  REQUIRE(four != nullptr);
  CHECK(four->dissect_m == 4);
  CHECK(four->dissect_r == 2);

  CHECK(find_identity("no-such-identity") == nullptr);
}

TEST_CASE("every catalog entry verifies at a reduced order") {
  // test-scale pass; the acceptance run drives the full default orders
  for (const auto& e : catalog()) {
    const auto rep = verify_identity(e, 400);
    INFO(e.name << ": " << rep.detail);
    CHECK(rep.pass());
    CHECK(rep.n_checked >= 100);
    CHECK(rep.violations.empty());
  }
}

TEST_CASE("a failing comparison reports the first mismatch") {
  const auto rep = verify_identity("f1", "f2", 0, 10);
  CHECK_FALSE(rep.pass());
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations[0].n == 1);
  CHECK(rep.violations[0].value == "-1");  // difference lhs - rhs
  CHECK_THAT(rep.detail, Catch::Matchers::ContainsSubstring("first mismatch at n=1"));
  CHECK_THAT(rep.detail, Catch::Matchers::ContainsSubstring("[1] -1/0"));
}

TEST_CASE("mismatch window shows both sides near the first difference") {
  const auto rep = verify_identity("f1", "f1+q^5*f2", 0, 40);
  CHECK_FALSE(rep.pass());
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations[0].n == 5);
  CHECK_THAT(rep.detail, Catch::Matchers::ContainsSubstring("first mismatch at n=5"));
}

TEST_CASE("violation itemization is capped but counted in full") {
  const auto rep = verify_identity("f1", "f1+f2", 0, 200);  // differs almost everywhere
  CHECK_FALSE(rep.pass());
  CHECK(rep.violations.size() == 16);
  CHECK_THAT(rep.detail, Catch::Matchers::ContainsSubstring("total"));
}

TEST_CASE("evaluation errors carry the entry name") {
  identity_entry e;
  e.name = "bad-entry";
  e.lhs = "f1/2";
  e.rhs = "f1";
  CHECK_THROWS_WITH(verify_identity(e, 10),
                    Catch::Matchers::ContainsSubstring("bad-entry:"));
}

TEST_CASE("modular comparison uses canonical residues") {
  const auto rep = verify_identity("f1", "f2", 2, 50);
  CHECK_FALSE(rep.pass());
  for (const auto& v : rep.violations) CHECK(v.value == "1");
}

TEST_CASE("odd part of the reciprocal reduces to an eta quotient mod 8") {
  const auto lhs = dissect(evaluate_mod("b1", 1000, 8), 2, 1);
  CHECK(lhs.order() == 499);
  CHECK(lhs == evaluate_mod("-f3^3*f2^2/(f1*f4)", lhs.order(), 8));
}

TEST_CASE("4n+2 part of the reciprocal is an exact eta quotient") {
  const auto lhs = dissect(evaluate_exact("b1", 1000), 4, 2);
  CHECK(lhs.order() == 249);
  CHECK(lhs == evaluate_exact("f1*f6^5/f3^7", lhs.order()));
}

TEST_CASE("4n+3 part of the reciprocal reduces to an eta quotient mod 8") {
  const auto lhs = dissect(evaluate_mod("b1", 1000, 8), 4, 3);
  CHECK(lhs.order() == 249);
  CHECK(lhs == evaluate_mod("-f1^2*f6^3/f2^2", lhs.order(), 8));
}

TEST_CASE("4n+2 part of the reciprocal matches f1*f3*f6 mod 4") {
  const std::int64_t n_max = 2000;
  const auto lhs = dissect(evaluate_mod("b1", 4 * n_max + 2, 4), 4, 2);
  REQUIRE(lhs.order() == n_max);
  CHECK(lhs == evaluate_mod("b", n_max, 4));
}

TEST_CASE("iterated squaring collapses eta indices mod powers of two") {
  for (const int m : {1, 2, 3}) {
    const std::uint64_t mod = 1ull << m;
    for (const int k : {1, 2, 3}) {
      const std::string lhs = "f" + std::to_string(k) + "^" + std::to_string(1 << m);
      const std::string rhs = "f" + std::to_string(2 * k) + "^" + std::to_string(1 << (m - 1));
      INFO(lhs << " vs " << rhs << " mod " << mod);
      CHECK(evaluate_mod(lhs, 1000, mod) == evaluate_mod(rhs, 1000, mod));
    }
  }
}

TEST_CASE("odd coefficients of a2 force 2x^2+y^2 representations") {
  const auto s = evaluate_mod("a2", 2000, 2);
  int odd = 0;
  for (std::int64_t n = 0; n <= 2000; ++n) {
    if (s[n] == 0) continue;
    ++odd;
    INFO("n=" << n);
    CHECK(is_represented(quad_form::two_x2_plus_y2, 3 * n + 2));
  }
  CHECK(odd > 100);  // the statement is not vacuous
}

TEST_CASE("odd coefficients of b2 on 4n+3 force x^2+y^2 representations") {
  const auto s = dissect(evaluate_mod("b2", 4 * 2000 + 3, 2), 4, 3);
  REQUIRE(s.order() >= 2000);
  int odd = 0;
  for (std::int64_t n = 0; n <= 2000; ++n) {
    if (s[n] == 0) continue;
    ++odd;
    INFO("n=" << n);
    CHECK(is_represented(quad_form::x2_plus_y2, 3 * n + 2));
  }
  CHECK(odd > 100);
}

TEST_CASE("default order is used when none is given") {
  const identity_entry* e = find_identity("jtp-f1");
  REQUIRE(e != nullptr);
  const auto rep = verify_identity(*e);
  CHECK(rep.pass());
  CHECK(rep.n_checked == e->default_order + 1);
}
