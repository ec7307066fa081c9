#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace qseries {

// Witness for one failed check: index n and the offending coefficient,
// rendered as a decimal string so exact and modular rings share one shape.
struct violation {
  std::int64_t n;
  std::string value;
};

// Outcome of one claim / identity / audit run. pass() iff no violations,
// so a report can never claim success while holding witnesses.
struct verification_report {
  std::string name;
  std::int64_t n_checked = 0;
  std::vector<violation> violations;
  std::int64_t elapsed_ms = 0;
  std::string detail;  // optional context: first-mismatch window, skip counts

  bool pass() const { return violations.empty(); }
};

// Wall-clock helper so every runner stamps elapsed_ms the same way.
class stopwatch {
 public:
  stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t elapsed_ms() const {
    const auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace qseries
