#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qseries/cache.hpp"
#include "qseries/congruence.hpp"
#include "qseries/identities.hpp"

// Command-line surface. Everything routes through run(args, out, err), which
// the binary wraps and the tests call directly. Exit codes: 0 all checks
// passed, 1 at least one violation, 2 usage or expression-syntax error,
// 3 evaluation failure (insufficient order, non-unit division, ...).

namespace qseries::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_violation = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_failure = 3;

enum class out_format { text, json, csv };

namespace detail {

using nlohmann::json;

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string r = "\"";
  for (const char c : s) {
    if (c == '"') r += '"';
    r += c;
  }
  r += '"';
  return r;
}

// How many violations the human-readable format itemizes; json/csv carry all.
inline constexpr std::size_t text_violation_limit = 10;

inline void emit_text(const std::vector<verification_report>& reports, std::ostream& out,
                      bool detail_on_pass = false) {
  std::size_t passed = 0;
  for (const auto& r : reports) {
    out << (r.pass() ? "PASS " : "FAIL ") << r.name << "  checked=" << r.n_checked;
    if (!r.pass()) out << "  violations=" << r.violations.size();
    out << "  (" << r.elapsed_ms << " ms)\n";
    if (r.pass() && detail_on_pass && !r.detail.empty()) out << "    " << r.detail << "\n";
    if (!r.pass()) {
      std::size_t shown = 0;
      for (const auto& v : r.violations) {
        if (shown == text_violation_limit) {
          out << "    ... " << (r.violations.size() - shown) << " more\n";
          break;
        }
        out << "    n=" << v.n << " value=" << v.value << "\n";
        ++shown;
      }
      if (!r.detail.empty()) out << "    " << r.detail << "\n";
    }
    if (r.pass()) ++passed;
  }
  if (reports.size() > 1)
    out << passed << "/" << reports.size() << " passed\n";
}

inline json report_json(const verification_report& r) {
  json jr;
  jr["name"] = r.name;
  jr["status"] = r.pass() ? "pass" : "fail";
  jr["n_checked"] = r.n_checked;
  jr["violations"] = json::array();
  for (const auto& v : r.violations) jr["violations"].push_back({{"n", v.n}, {"value", v.value}});
  jr["elapsed_ms"] = r.elapsed_ms;
  if (!r.detail.empty()) jr["detail"] = r.detail;
  return jr;
}

inline void emit_json(const std::string& command, const json& params,
                      const std::vector<verification_report>& reports, std::ostream& out,
                      const json& extra_result_fields = json()) {
  json j;
  j["command"] = command;
  j["params"] = params;
  j["results"] = json::array();
  for (const auto& r : reports) j["results"].push_back(report_json(r));
  if (extra_result_fields.is_object() && !j["results"].empty())
    for (auto it = extra_result_fields.begin(); it != extra_result_fields.end(); ++it)
      j["results"][0][it.key()] = it.value();
  out << j.dump(2) << "\n";
}

inline void emit_csv(const std::vector<verification_report>& reports, std::ostream& out) {
  out << "name,status,n_checked,violations,elapsed_ms\n";
  for (const auto& r : reports) {
    std::string vio;
    for (const auto& v : r.violations) {
      if (!vio.empty()) vio += "; ";
      vio += "n=" + std::to_string(v.n) + " value=" + v.value;
    }
    out << csv_escape(r.name) << "," << (r.pass() ? "pass" : "fail") << "," << r.n_checked << ","
        << csv_escape(vio) << "," << r.elapsed_ms << "\n";
  }
}

inline int emit_reports(const std::string& command, const json& params,
                        const std::vector<verification_report>& reports, out_format fmt,
                        std::ostream& out, const json& extra = json(),
                        bool detail_on_pass = false) {
  switch (fmt) {
    case out_format::text: emit_text(reports, out, detail_on_pass); break;
    case out_format::json: emit_json(command, params, reports, out, extra); break;
    case out_format::csv: emit_csv(reports, out); break;
  }
  for (const auto& r : reports)
    if (!r.pass()) return exit_violation;
  return exit_ok;
}

// Index-parallel runner: tasks may throw; the first failure (by index, not by
// time) is rethrown after all workers finish, keeping diagnostics ordered.
template <typename F>
void run_indexed(std::int64_t count, int jobs, F&& body) {
  if (count <= 0) return;
  const int workers =
      static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(jobs, count)));
  if (workers == 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::int64_t derived_n_max(std::int64_t terms, std::int64_t A, std::int64_t B) {
  return std::max<std::int64_t>(0, (terms - B) / A);
}

}  // namespace detail

using nlohmann::json;

// Shared option state; each subcommand registers the subset it understands.
struct settings {
  std::int64_t terms = -1;  // -1: not set, resolve per command
  std::uint64_t mod = 0;
  bool mod_set = false;
  std::string format_word = "text";
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string cache_dir;

  out_format format() const {
    if (format_word == "json") return out_format::json;
    if (format_word == "csv") return out_format::csv;
    return out_format::text;
  }
  std::int64_t terms_or(std::int64_t fallback) const { return terms >= 0 ? terms : fallback; }
};

// s.mod stays 0 until the user passes --mod; commands with another default
// (theorem1: 8, theorem2: 4, density: 2) apply it themselves via mod_set.
inline void add_common_options(CLI::App* sub, settings& s, bool with_mod) {
  sub->add_option("--terms", s.terms, "truncation order of every series expansion")
      ->check(CLI::Range(std::int64_t{0}, max_order));
  if (with_mod)
    sub->add_option("--mod", s.mod, "coefficient ring modulus (0 = exact integers)");
  sub->add_option("--format", s.format_word, "output format")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  sub->add_option("--jobs", s.jobs, "max parallel evaluations")->check(CLI::PositiveNumber);
  sub->add_option("--cache-dir", s.cache_dir, "coefficient cache directory (default: no cache)");
}

// ---- expand ----

inline int cmd_expand(const std::string& expr_text, const settings& s, std::ostream& out) {
  const std::int64_t order = s.terms_or(2000);
  const expr_ptr ast = parse(expr_text);
  std::vector<std::string> coeffs;
  coeffs.reserve(static_cast<std::size_t>(order) + 1);
  if (s.mod == 0) {
    const auto ser = cached_evaluate_exact(ast, order, s.cache_dir);
    for (std::int64_t n = 0; n <= ser.order(); ++n) coeffs.push_back(ser.ring().to_string(ser[n]));
  } else {
    const auto ser = cached_evaluate_mod(ast, order, s.mod, s.cache_dir);
    for (std::int64_t n = 0; n <= ser.order(); ++n) coeffs.push_back(ser.ring().to_string(ser[n]));
  }
  switch (s.format()) {
    case out_format::text:
      for (std::size_t n = 0; n < coeffs.size(); ++n) out << n << "\t" << coeffs[n] << "\n";
      break;
    case out_format::json: {
      json j;
      j["command"] = "expand";
      j["params"] = {{"expr", expr_text}, {"terms", order}, {"mod", s.mod}};
      j["coefficients"] = coeffs;
      out << j.dump(2) << "\n";
      break;
    }
    case out_format::csv:
      out << "n,coefficient\n";
      for (std::size_t n = 0; n < coeffs.size(); ++n) out << n << "," << coeffs[n] << "\n";
      break;
  }
  return exit_ok;
}

// ---- catalog ----

inline int cmd_catalog(const settings& s, std::ostream& out) {
  const auto& entries = catalog();
  switch (s.format()) {
    case out_format::text:
      for (const auto& e : entries) {
        out << e.name << "  ";
        out << (e.modulus ? "mod " + std::to_string(e.modulus) : std::string("exact"));
        out << "  N=" << e.default_order << "  ";
        if (e.dissect_m > 0)
          out << "[" << e.dissect_m << "n+" << e.dissect_r << " part of] ";
        out << e.lhs << " = " << e.rhs << "\n";
      }
      break;
    case out_format::json: {
      json j;
      j["command"] = "catalog";
      j["entries"] = json::array();
      for (const auto& e : entries) {
        json je{{"name", e.name},       {"lhs", e.lhs},
                {"rhs", e.rhs},         {"modulus", e.modulus},
                {"default_order", e.default_order}};
        if (e.dissect_m > 0) {
          je["dissect_m"] = e.dissect_m;
          je["dissect_r"] = e.dissect_r;
        }
        j["entries"].push_back(je);
      }
      out << j.dump(2) << "\n";
      break;
    }
    case out_format::csv:
      out << "name,modulus,default_order,lhs,rhs\n";
      for (const auto& e : entries)
        out << e.name << "," << e.modulus << "," << e.default_order << ","
            << detail::csv_escape(e.lhs) << "," << detail::csv_escape(e.rhs) << "\n";
      break;
  }
  return exit_ok;
}

// ---- verify-id ----

inline int cmd_verify_id(const std::string& name, const std::string& lhs, const std::string& rhs,
                         const settings& s, std::ostream& out) {
  std::vector<verification_report> reports;
  json params;
  if (!lhs.empty() || !rhs.empty()) {
    if (lhs.empty() || rhs.empty())
      throw CLI::ValidationError("verify-id", "--lhs and --rhs go together");
    if (!name.empty())
      throw CLI::ValidationError("verify-id", "give a catalog name or --lhs/--rhs, not both");
    const std::int64_t order = s.terms_or(2000);
    reports.push_back(verify_identity(lhs, rhs, s.mod, order));
    params = {{"lhs", lhs}, {"rhs", rhs}, {"mod", s.mod}, {"terms", order}};
  } else if (!name.empty()) {
    const identity_entry* e = find_identity(name);
    if (!e) throw CLI::ValidationError("verify-id", "no catalog entry named '" + name + "'");
    reports.push_back(verify_identity(*e, s.terms_or(e->default_order)));
    params = {{"name", name}, {"terms", s.terms_or(e->default_order)}};
  } else {
    const auto& entries = catalog();
    reports.resize(entries.size());
    detail::run_indexed(static_cast<std::int64_t>(entries.size()), s.jobs, [&](std::int64_t i) {
      const auto& e = entries[static_cast<std::size_t>(i)];
      reports[static_cast<std::size_t>(i)] = verify_identity(e, s.terms_or(e.default_order));
    });
    params = {{"entries", entries.size()}};
    if (s.terms >= 0) params["terms"] = s.terms;
  }
  return detail::emit_reports("verify-id", params, reports, s.format(), out);
}

// ---- verify-cong ----

// With --A/--B/--M: one claim against --series. Without them: the whole
// builtin claim list, with n_max rescaled when --terms shrinks the budget.
inline int cmd_verify_cong(const std::string& series_text, std::int64_t A, std::int64_t B,
                           std::uint64_t M, std::int64_t exclude_p, std::int64_t n_max_opt,
                           bool single, const settings& s, std::ostream& out) {
  std::vector<verification_report> reports;
  json params;
  if (single) {
    congruence_claim claim = make_claim(series_text, A, B, M, exclude_p);
    const std::int64_t n_max =
        n_max_opt >= 0 ? n_max_opt : detail::derived_n_max(s.terms_or(2000), A, B);
    const std::int64_t order =
        s.terms >= 0 ? s.terms
                     : checked_order(static_cast<std::int64_t>(
                           std::min<__int128>(static_cast<__int128>(A) * n_max + B, max_order)));
    const std::uint64_t ring_mod = s.mod_set ? s.mod : M;
    const expr_ptr ast = parse(series_text);
    verification_report rep;
    if (ring_mod == 0)
      rep = check_claim(cached_evaluate_exact(ast, order, s.cache_dir), claim, n_max);
    else
      rep = check_claim(cached_evaluate_mod(ast, order, ring_mod, s.cache_dir), claim, n_max);
    reports.push_back(std::move(rep));
    params = {{"series", series_text}, {"A", A},         {"B", B},
              {"M", M},                {"nmax", n_max},  {"terms", order}};
    if (exclude_p) params["exclude_p"] = exclude_p;
  } else {
    const std::int64_t budget = s.terms_or(claim_order_budget);
    auto claims = builtin_claims();
    for (auto& c : claims) c.n_max = detail::derived_n_max(budget, c.A, c.B);
    // One series per (name, ring): the largest claim modulus per series
    // covers the smaller ones, residues being compatible under divisibility.
    struct series_slot {
      std::string name;
      std::uint64_t mod;
      series<mod_ring> ser{mod_ring(2), 0};
    };
    std::vector<series_slot> slots;
    for (const auto& c : claims) {
      auto it = std::find_if(slots.begin(), slots.end(),
                             [&](const series_slot& sl) { return sl.name == c.series; });
      if (it == slots.end())
        slots.push_back({c.series, c.M, series<mod_ring>(mod_ring(2), 0)});
      else
        it->mod = std::max(it->mod, static_cast<std::uint64_t>(c.M));
    }
    detail::run_indexed(static_cast<std::int64_t>(slots.size()), s.jobs, [&](std::int64_t i) {
      auto& sl = slots[static_cast<std::size_t>(i)];
      sl.ser = cached_evaluate_mod(parse(sl.name), budget, sl.mod, s.cache_dir);
    });
    for (const auto& c : claims) {
      const auto it = std::find_if(slots.begin(), slots.end(),
                                   [&](const series_slot& sl) { return sl.name == c.series; });
      reports.push_back(check_claim(it->ser, c));
    }
    params = {{"claims", claims.size()}, {"terms", budget}};
  }
  return detail::emit_reports("verify-cong", params, reports, s.format(), out);
}

// ---- theorem1 ----

inline std::vector<congruence_claim> theorem1_claims(std::int64_t terms) {
  std::vector<congruence_claim> claims;
  const auto add = [&](std::int64_t A, std::int64_t B, std::uint64_t M) {
    claims.push_back(make_claim("c5", A, B, M, 0, detail::derived_n_max(terms, A, B)));
  };
  add(32, 31, 8);
  add(128, 123, 8);
  add(512, 491, 8);
  add(64, 19, 4);
  add(256, 75, 4);
  for (std::int64_t r : {110, 138, 194, 19, 47, 75, 103, 159, 187}) add(196, r, 4);
  return claims;
}

inline int cmd_theorem1(const settings& s, std::ostream& out) {
  const std::int64_t terms = s.terms_or(8192);
  const std::uint64_t mod = s.mod_set ? s.mod : 8;
  const auto c5 = cached_evaluate_mod(parse("c5"), terms, mod, s.cache_dir);
  std::vector<verification_report> reports;
  for (const auto& c : theorem1_claims(terms)) reports.push_back(check_claim(c5, c));
  const json params = {{"terms", terms}, {"mod", mod}};
  return detail::emit_reports("theorem1", params, reports, s.format(), out);
}

// ---- theorem2 ----

inline int cmd_theorem2(std::int64_t p, std::int64_t k, std::int64_t n_max_opt, const settings& s,
                        std::ostream& out) {
  congruence_claim claim = theorem2_family(p, k);
  const std::int64_t n_max = n_max_opt >= 0
                                 ? n_max_opt
                                 : detail::derived_n_max(s.terms_or(2000), claim.A, claim.B);
  const std::int64_t order =
      s.terms >= 0 ? s.terms
                   : checked_order(static_cast<std::int64_t>(std::min<__int128>(
                         static_cast<__int128>(claim.A) * n_max + claim.B, max_order)));
  const std::uint64_t mod = s.mod_set ? s.mod : 4;
  const auto c5 = cached_evaluate_mod(parse("c5"), order, mod, s.cache_dir);
  std::vector<verification_report> reports{check_claim(c5, claim, n_max)};
  const json params = {{"p", p}, {"k", k}, {"nmax", n_max}, {"terms", order}, {"mod", mod}};
  return detail::emit_reports("theorem2", params, reports, s.format(), out);
}

// ---- wang ----

inline int cmd_wang(std::int64_t n_max, const settings& s, std::ostream& out) {
  stopwatch timer;
  const auto ser = evaluate_exact("f3^6/f1^2", n_max);
  verification_report rep;
  rep.name = "a1(n) = sigma(3n+2)/3 vs f3^6/f1^2";
  for (std::int64_t n = 0; n <= n_max; ++n) {
    const std::int64_t closed = wang_a1(n);
    ++rep.n_checked;
    if (ser[n] != closed)
      rep.violations.push_back({n, ser.ring().to_string(ser[n]) + " vs a1=" + std::to_string(closed)});
  }
  rep.elapsed_ms = timer.elapsed_ms();
  const json params = {{"nmax", n_max}};
  return detail::emit_reports("wang", params, {rep}, s.format(), out);
}

// ---- audit-valuation ----

inline int cmd_audit(std::int64_t p, std::int64_t k, std::int64_t n_max, const settings& s,
                     std::ostream& out) {
  const verification_report rep = valuation_parity_audit(p, k, n_max);
  const json params = {{"p", p}, {"k", k}, {"nmax", n_max}};
  return detail::emit_reports("audit-valuation", params, {rep}, s.format(), out);
}

// ---- density ----

inline int cmd_density(const std::string& series_text, std::int64_t n_max, const settings& s,
                       std::ostream& out) {
  if (s.mod < 2) throw CLI::ValidationError("density", "--mod must be >= 2");
  stopwatch timer;
  const std::int64_t order = std::max(s.terms_or(n_max - 1), n_max - 1);
  const auto ser = cached_evaluate_mod(parse(series_text), order, s.mod, s.cache_dir);
  const density_result d = density_scan(ser, s.mod, n_max);
  verification_report rep;
  rep.name = "density " + series_text + " mod " + std::to_string(s.mod);
  rep.n_checked = n_max;
  rep.elapsed_ms = timer.elapsed_ms();
  char frac[32];
  std::snprintf(frac, sizeof frac, "%.6f", d.fraction);
  rep.detail = "count=" + std::to_string(d.count) + " fraction=" + frac;
  const json params = {{"series", series_text}, {"mod", s.mod}, {"nmax", n_max}};
  json extra;
  extra["count"] = d.count;
  extra["fraction"] = d.fraction;
  return detail::emit_reports("density", params, {rep}, s.format(), out, extra, true);
}

// ---- dispatcher ----

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"q-series expansion and congruence verification"};
  app.require_subcommand(1);

  settings s;
  std::string expr_text, id_name, id_lhs, id_rhs, cong_series = "c5";
  std::int64_t A = -1, B = -1, p = 0, k = 0;
  std::uint64_t M = 0;
  std::int64_t exclude_p = 0, n_max = -1, wang_n_max = 2000, density_n_max = 2000;

  auto* c_expand = app.add_subcommand("expand", "print series coefficients");
  c_expand->add_option("--expr", expr_text, "expression to expand")->required();
  add_common_options(c_expand, s, true);

  auto* c_vid = app.add_subcommand("verify-id", "check catalog identities or an ad-hoc pair");
  c_vid->add_option("name", id_name, "catalog entry (omit to run the whole catalog)");
  c_vid->add_option("--lhs", id_lhs, "left expression");
  c_vid->add_option("--rhs", id_rhs, "right expression");
  add_common_options(c_vid, s, true);

  auto* c_vc = app.add_subcommand("verify-cong",
                                  "check one progression claim, or all builtin claims");
  c_vc->add_option("--series", cong_series, "series expression (default c5)");
  auto* optA = c_vc->add_option("--A", A, "progression step");
  auto* optB = c_vc->add_option("--B", B, "progression offset");
  auto* optM = c_vc->add_option("--M", M, "congruence modulus");
  optA->needs(optB)->needs(optM);
  optB->needs(optA);
  optM->needs(optA);
  c_vc->add_option("--exclude-p", exclude_p, "skip indexes n divisible by this prime");
  c_vc->add_option("--nmax", n_max, "progression scan length");
  add_common_options(c_vc, s, true);

  auto* c_t1 = app.add_subcommand("theorem1", "the c5 congruence family on mod-8/mod-4 chains");
  add_common_options(c_t1, s, true);

  auto* c_t2 = app.add_subcommand("theorem2", "prime-power progression instance");
  c_t2->add_option("--p", p, "prime = 7 mod 8")->required();
  c_t2->add_option("--k", k, "power index >= 0")->required();
  c_t2->add_option("--nmax", n_max, "progression scan length");
  add_common_options(c_t2, s, true);

  auto* c_wang = app.add_subcommand("wang", "divisor-sum closed form against f3^6/f1^2");
  c_wang->add_option("--nmax", wang_n_max, "check n = 0..nmax inclusive");
  add_common_options(c_wang, s, false);

  auto* c_audit = app.add_subcommand("audit-valuation", "p-adic valuation and form audit");
  c_audit->add_option("--p", p, "prime = 7 mod 8")->required();
  c_audit->add_option("--k", k, "power index >= 0")->required();
  c_audit->add_option("--nmax", n_max, "scan length")->required();
  add_common_options(c_audit, s, false);

  auto* c_density = app.add_subcommand("density", "fraction of vanishing coefficients mod M");
  c_density->add_option("--series", cong_series, "series expression")->required();
  c_density->add_option("--nmax", density_n_max, "scan length");
  add_common_options(c_density, s, true);

  auto* c_cat = app.add_subcommand("catalog", "list the identity catalog");
  add_common_options(c_cat, s, false);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  for (CLI::App* sub : {c_expand, c_vid, c_vc, c_t1, c_t2, c_density})
    if (sub->parsed() && sub->count("--mod") > 0) s.mod_set = true;
  if (c_density->parsed() && !s.mod_set) s.mod = 2;

  try {
    if (c_expand->parsed()) return cmd_expand(expr_text, s, out);
    if (c_vid->parsed()) return cmd_verify_id(id_name, id_lhs, id_rhs, s, out);
    if (c_vc->parsed()) {
      const bool single = optA->count() > 0;
      if (single && (A < 1 || B < 0 || M < 2))
        throw CLI::ValidationError("verify-cong", "need --A >= 1, --B >= 0, --M >= 2");
      return cmd_verify_cong(cong_series, A, B, M, exclude_p, n_max, single, s, out);
    }
    if (c_t1->parsed()) return cmd_theorem1(s, out);
    if (c_t2->parsed()) return cmd_theorem2(p, k, n_max, s, out);
    if (c_wang->parsed()) return cmd_wang(wang_n_max, s, out);
    if (c_audit->parsed()) return cmd_audit(p, k, n_max, s, out);
    if (c_density->parsed()) return cmd_density(cong_series, density_n_max, s, out);
    if (c_cat->parsed()) return cmd_catalog(s, out);
    err << "error: no subcommand\n";
    return exit_usage;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const parse_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace qseries::cli
