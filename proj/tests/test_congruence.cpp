#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include <qseries/congruence.hpp>
#include <qseries/eval.hpp>

using namespace qseries;

namespace {

// Shared expensive builds, computed once per binary.
const series<mod_ring>& c5_mod4_deep() {
  static const auto s = evaluate_mod("c5", 10611, 4);  // covers 92n+1411 to n=100
  return s;
}

const series<mod_ring>& c5_mod8_mid() {
  static const auto s = evaluate_mod("c5", 3231, 8);  // covers 32n+31 to n=100
  return s;
}

}  // namespace

TEST_CASE("claim construction and validation") {
  const auto c = make_claim("c5", 8, 5, 2);
  CHECK(c.name == "c5(8n+5) mod 2");
  CHECK(c.A == 8);
  CHECK(c.B == 5);
  CHECK(c.M == 2);
  CHECK(c.exclude_p == 0);

  const auto t = make_claim("c5", 28, 131, 4, 7, 280);
  CHECK(t.name == "c5(28n+131) mod 4 skip 7|n");
  CHECK(t.B > t.A);  // offsets above the step are legal
  CHECK(t.n_max == 280);

  CHECK_THROWS_AS(make_claim("c5", 0, 5, 2), domain_error);
  CHECK_THROWS_AS(make_claim("c5", -8, 5, 2), domain_error);
  CHECK_THROWS_AS(make_claim("c5", 8, -1, 2), domain_error);
  CHECK_THROWS_AS(make_claim("c5", 8, 5, 1), domain_error);
  CHECK_THROWS_AS(make_claim("c5", 8, 5, 2, 4), domain_error);   // 4 is not prime
  CHECK_THROWS_AS(make_claim("c5", 8, 5, 2, 15), domain_error);  // neither is 15
  CHECK_NOTHROW(make_claim("c5", 8, 5, 2, 7));
}

TEST_CASE("scan preconditions") {
  const auto s = evaluate_mod("c5", 100, 8);
  CHECK_THROWS_AS(check_claim(s, make_claim("c5", 8, 5, 8), -1), domain_error);
  CHECK_THROWS_WITH(check_claim(s, make_claim("c5", 8, 5, 8), 100),
                    Catch::Matchers::ContainsSubstring("needs order 805, series has 100"));
  CHECK_THROWS_AS(check_claim(evaluate_mod("c5", 100, 3), make_claim("c5", 8, 5, 2), 5),
                  ring_mismatch_error);
  // modulus 8 carries mod-4 and mod-2 claims faithfully
  CHECK_NOTHROW(check_claim(s, make_claim("c5", 8, 5, 4), 10));
  CHECK_NOTHROW(check_claim(s, make_claim("c5", 8, 5, 2), 10));
  // n_max 0 checks nothing and passes
  const auto rep = check_claim(s, make_claim("c5", 8, 4, 8), 0);
  CHECK(rep.pass());
  CHECK(rep.n_checked == 0);
}

TEST_CASE("violations carry index and canonical residue") {
  const auto s = evaluate_mod("c5", 100, 8);
  const auto rep = check_claim(s, make_claim("c5", 8, 4, 8), 10);
  CHECK_FALSE(rep.pass());
  CHECK(rep.n_checked == 10);
  const std::vector<std::int64_t> want_n = {0, 1, 2, 3, 4, 5, 7, 8, 9};
  const std::vector<std::string> want_v = {"1", "2", "5", "5", "1", "1", "7", "6", "1"};
  REQUIRE(rep.violations.size() == want_n.size());
  for (std::size_t i = 0; i < want_n.size(); ++i) {
    CHECK(rep.violations[i].n == want_n[i]);
    CHECK(rep.violations[i].value == want_v[i]);
  }
}

TEST_CASE("a failing scan names the offending start") {
  const auto s = evaluate_mod("1/psi(5)", 100, 2);
  const auto rep = check_claim(s, make_claim("1/psi(5)", 8, 0, 2), 10);
  CHECK_FALSE(rep.pass());
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations[0].n == 0);
  CHECK(rep.violations[0].value == "1");
  std::vector<std::int64_t> ns;
  for (const auto& v : rep.violations) ns.push_back(v.n);
  CHECK(ns == std::vector<std::int64_t>{0, 3, 6, 8});
}

TEST_CASE("exact and modular scans agree") {
  const auto exact = evaluate_exact("c5", 500);
  const auto modular = reduce_mod(exact, 8);
  for (const auto& claim : {make_claim("c5", 8, 5, 2), make_claim("c5", 32, 31, 8),
                            make_claim("c5", 8, 4, 8)}) {
    const std::int64_t n_max = (500 - claim.B) / claim.A;
    const auto a = check_claim(exact, claim, n_max);
    const auto b = check_claim(modular, claim, n_max);
    CHECK(a.n_checked == b.n_checked);
    REQUIRE(a.violations.size() == b.violations.size());
    for (std::size_t i = 0; i < a.violations.size(); ++i) {
      CHECK(a.violations[i].n == b.violations[i].n);
      CHECK(a.violations[i].value == b.violations[i].value);
    }
  }
}

TEST_CASE("prime-power progression for p=7, k=0") {
  const auto claim = theorem2_family(7, 0);
  CHECK(claim.A == 28);
  CHECK(claim.B == 131);
  CHECK(claim.M == 4);
  CHECK(claim.exclude_p == 7);

  const auto rep = check_claim(c5_mod4_deep(), claim, 280);
  CHECK(rep.pass());
  CHECK(rep.n_checked == 240);  // 40 multiples of 7 skipped
  CHECK_THAT(rep.detail, Catch::Matchers::ContainsSubstring("40 indexes excluded"));
}

TEST_CASE("the excluded indices really do fail") {
  // same progressions without the exclusion: every violation sits on p | n
  const auto rep7 = check_claim(c5_mod4_deep(), make_claim("c5", 28, 131, 4), 280);
  CHECK(rep7.n_checked == 280);
  REQUIRE(rep7.violations.size() == 18);
  for (const auto& v : rep7.violations) CHECK(v.n % 7 == 0);
  const std::vector<std::int64_t> want7_n = {0, 14, 21, 63, 70};
  const std::vector<std::string> want7_v = {"1", "3", "2", "2", "1"};
  for (std::size_t i = 0; i < want7_n.size(); ++i) {
    CHECK(rep7.violations[i].n == want7_n[i]);
    CHECK(rep7.violations[i].value == want7_v[i]);
  }

  const auto rep23 = check_claim(c5_mod4_deep(), make_claim("c5", 92, 1411, 4), 100);
  REQUIRE(rep23.violations.size() == 3);
  const std::vector<std::int64_t> want_n = {0, 46, 69};
  const std::vector<std::string> want_v = {"3", "1", "2"};
  for (std::size_t i = 0; i < want_n.size(); ++i) {
    CHECK(rep23.violations[i].n == want_n[i]);
    CHECK(rep23.violations[i].value == want_v[i]);
    CHECK(rep23.violations[i].n % 23 == 0);
  }
}

TEST_CASE("prime-power progression for p=23, k=0") {
  const auto claim = theorem2_family(23, 0);
  CHECK(claim.A == 92);
  CHECK(claim.B == 1411);
  const auto rep = check_claim(c5_mod4_deep(), claim, 100);
  CHECK(rep.pass());
  CHECK(rep.n_checked == 95);  // 5 multiples of 23 below 100
}

TEST_CASE("prime-power family parameters") {
  const auto c71 = theorem2_family(7, 1);
  CHECK(c71.A == 1372);
  CHECK(c71.B == 6403);
  const auto c31 = theorem2_family(31, 0);
  CHECK(c31.A == 124);
  CHECK(c31.B == 2563);

  CHECK_THROWS_AS(theorem2_family(5, 0), domain_error);   // 5 = 5 mod 8
  CHECK_THROWS_AS(theorem2_family(17, 0), domain_error);  // 17 = 1 mod 8
  CHECK_THROWS_AS(theorem2_family(15, 0), domain_error);  // 15 = 7 mod 8 but composite
  CHECK_THROWS_AS(theorem2_family(7, -1), domain_error);
  CHECK_THROWS_AS(theorem2_family(7, 10), domain_error);  // progression beyond any order
}

TEST_CASE("builtin claim list") {
  const auto claims = builtin_claims();
  CHECK(claims.size() == 36);

  const auto has = [&](const char* series, std::int64_t A, std::int64_t B, std::uint64_t M,
                       std::int64_t n_max) {
    for (const auto& c : claims)
      if (c.series == series && c.A == A && c.B == B && c.M == M) return c.n_max == n_max;
    return false;
  };
  CHECK(has("c5", 8, 5, 2, 1499));
  CHECK(has("c5", 512, 491, 8, 22));
  CHECK(has("c9", 16, 12, 2, 749));
  CHECK(has("b2", 196, 26, 2, 61));
  CHECK(has("b", 49, 27, 4, 244));
  CHECK(has("b3", 256, 235, 2, 45));

  for (const auto& c : claims) {
    CHECK_NOTHROW(c.validate());
    CHECK(c.exclude_p == 0);
    // recommended scan length saturates the shared order budget
    CHECK(c.A * c.n_max + c.B <= claim_order_budget);
    CHECK(c.A * (c.n_max + 1) + c.B > claim_order_budget);
  }
}

TEST_CASE("mod-8 chains subsume their refinements") {
  const auto& s = c5_mod8_mid();
  CHECK(check_claim(s, make_claim("c5", 32, 31, 8), 100).pass());
  // split n even/odd: 64n+31 and 64n+63 inherit the congruence
  CHECK(check_claim(s, make_claim("c5", 64, 31, 8), 50).pass());
  CHECK(check_claim(s, make_claim("c5", 64, 63, 8), 49).pass());
  // and mod 8 implies mod 4 and mod 2 on the same progression
  CHECK(check_claim(s, make_claim("c5", 32, 31, 4), 100).pass());
  CHECK(check_claim(s, make_claim("c5", 32, 31, 2), 100).pass());
}

TEST_CASE("residue-zero density of the c5 table") {
  const auto s = evaluate_mod("1/psi(5)", 1999, 2);
  const auto r = density_scan(s, 2, 2000);
  CHECK(r.count == 1495);
  CHECK(r.fraction == Catch::Approx(0.7475));

  // a coarser modulus can only lose zeros
  const auto s8 = evaluate_mod("1/psi(5)", 1999, 8);
  CHECK(density_scan(s8, 8, 2000).count <= r.count);
  CHECK(density_scan(s8, 2, 2000).count == r.count);
}

TEST_CASE("density of the zero series is 1") {
  const auto z = evaluate_mod("0", 99, 4);
  const auto r = density_scan(z, 2, 100);
  CHECK(r.count == 100);
  CHECK(r.fraction == 1.0);
}

TEST_CASE("density preconditions") {
  const auto s = evaluate_mod("f1", 50, 4);
  CHECK_THROWS_AS(density_scan(s, 1, 10), domain_error);
  CHECK_THROWS_AS(density_scan(s, 2, 0), domain_error);
  CHECK_THROWS_AS(density_scan(s, 2, 52), order_error);
  CHECK_THROWS_AS(density_scan(evaluate_mod("f1", 50, 3), 2, 10), ring_mismatch_error);
  CHECK_NOTHROW(density_scan(s, 2, 51));
  CHECK_NOTHROW(density_scan(evaluate_exact("f1", 50), 5, 51));
}

TEST_CASE("the remaining mod-196 residues fail mod 4") {
  // c5 vanishes mod 2 on all six residues of interest mod 196, but mod 4
  // only on the three that unfold from the 28n+131 progression; the other
  // three miss in exactly the same way: residue 2, 23 times in 40.
  const auto s = evaluate_mod("c5", 196 * 40 + 194, 4);
  for (const std::int64_t r : {110, 138, 194})
    CHECK(check_claim(s, make_claim("c5", 196, r, 4), 40).pass());
  for (const std::int64_t r : {26, 54, 166}) {
    const auto rep = check_claim(s, make_claim("c5", 196, r, 4), 40);
    INFO("residue " << r);
    CHECK(rep.violations.size() == 23);
    for (const auto& v : rep.violations) CHECK(v.value == "2");
    CHECK(check_claim(s, make_claim("c5", 196, r, 2), 40).pass());
  }
}
