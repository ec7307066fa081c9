#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "qseries/eval.hpp"

namespace qseries {

// On-disk coefficient store, one file per (expression, order, modulus):
//
//   QSC1
//   expr=<canonical serialization>
//   terms=<N>
//   mod=<M>          (0 marks the exact ring)
//   <N+1 decimal coefficient lines, canonical residues when M > 0>
//
// Files are named by a hash of the key but trusted only after the header
// matches field-for-field; anything unexpected is a miss, never an error.
// Writes land in a temp file first and rename into place, so readers only
// ever see complete entries.

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string cache_key(const std::string& expr_text, std::int64_t order,
                             std::uint64_t modulus) {
  return expr_text + "\n" + std::to_string(order) + "\n" + std::to_string(modulus);
}

}  // namespace detail

inline std::filesystem::path cache_path(const std::filesystem::path& dir,
                                        const std::string& expr_text, std::int64_t order,
                                        std::uint64_t modulus) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.qsc",
                static_cast<unsigned long long>(
                    detail::fnv1a64(detail::cache_key(expr_text, order, modulus))));
  return dir / name;
}

template <typename R>
void cache_store(const std::filesystem::path& dir, const std::string& expr_text,
                 const series<R>& s) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);  // best effort; open() reports real failures

  static std::atomic<unsigned> temp_seq{0};
  const std::filesystem::path final_path = cache_path(dir, expr_text, s.order(), s.ring().modulus());
  const std::filesystem::path temp_path =
      final_path.string() + ".tmp" + std::to_string(temp_seq.fetch_add(1));

  {
    std::ofstream out(temp_path);
    if (!out) throw error("cannot write cache file " + temp_path.string());
    out << "QSC1\n";
    out << "expr=" << expr_text << "\n";
    out << "terms=" << s.order() << "\n";
    out << "mod=" << s.ring().modulus() << "\n";
    for (std::int64_t i = 0; i <= s.order(); ++i) out << s.ring().to_string(s[i]) << "\n";
    out.flush();
    if (!out) throw error("short write to cache file " + temp_path.string());
  }
  std::filesystem::rename(temp_path, final_path);
}

namespace detail {

// Header check shared by both loaders; returns the open stream positioned at
// the first coefficient line, or nothing on any mismatch.
inline std::optional<std::ifstream> open_cache_entry(const std::filesystem::path& dir,
                                                     const std::string& expr_text,
                                                     std::int64_t order, std::uint64_t modulus) {
  std::ifstream in(cache_path(dir, expr_text, order, modulus));
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line) || line != "QSC1") return std::nullopt;
  if (!std::getline(in, line) || line != "expr=" + expr_text) return std::nullopt;
  if (!std::getline(in, line) || line != "terms=" + std::to_string(order)) return std::nullopt;
  if (!std::getline(in, line) || line != "mod=" + std::to_string(modulus)) return std::nullopt;
  return in;
}

}  // namespace detail

inline std::optional<series<exact_ring>> cache_load_exact(const std::filesystem::path& dir,
                                                          const std::string& expr_text,
                                                          std::int64_t order) {
  auto in = detail::open_cache_entry(dir, expr_text, order, 0);
  if (!in) return std::nullopt;
  series<exact_ring> s(exact_ring{}, order);
  std::string line;
  for (std::int64_t i = 0; i <= order; ++i) {
    if (!std::getline(*in, line)) return std::nullopt;
    if (mpz_set_str(s.mutable_at(i).get_mpz_t(), line.c_str(), 10) != 0) return std::nullopt;
  }
  return s;
}

inline std::optional<series<mod_ring>> cache_load_mod(const std::filesystem::path& dir,
                                                      const std::string& expr_text,
                                                      std::int64_t order, std::uint64_t modulus) {
  auto in = detail::open_cache_entry(dir, expr_text, order, modulus);
  if (!in) return std::nullopt;
  mod_ring ring(modulus);
  series<mod_ring> s(ring, order);
  std::string line;
  for (std::int64_t i = 0; i <= order; ++i) {
    if (!std::getline(*in, line) || line.empty()) return std::nullopt;
    unsigned __int128 v = 0;
    for (const char c : line) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + static_cast<unsigned>(c - '0');
      if (v >= modulus) return std::nullopt;  // residues are canonical, so this is corruption
    }
    s.mutable_at(i) = static_cast<std::uint64_t>(v);
  }
  return s;
}

// Evaluation with the disk cache in front. An empty dir disables caching.
inline series<exact_ring> cached_evaluate_exact(const expr_ptr& e, std::int64_t order,
                                                const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return evaluate_exact(e, order);
  const std::string text = serialize(e);
  if (auto hit = cache_load_exact(cache_dir, text, order)) return *std::move(hit);
  series<exact_ring> s = evaluate_exact(e, order);
  cache_store(cache_dir, text, s);
  return s;
}

inline series<mod_ring> cached_evaluate_mod(const expr_ptr& e, std::int64_t order,
                                            std::uint64_t modulus,
                                            const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return evaluate_mod(e, order, modulus);
  const std::string text = serialize(e);
  if (auto hit = cache_load_mod(cache_dir, text, order, modulus)) return *std::move(hit);
  series<mod_ring> s = evaluate_mod(e, order, modulus);
  cache_store(cache_dir, text, s);
  return s;
}

}  // namespace qseries
