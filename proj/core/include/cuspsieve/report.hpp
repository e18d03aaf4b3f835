#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cuspsieve {

enum class CheckStatus { pass, fail, not_applicable, report_only };

std::string_view to_string(CheckStatus s);

/// One row of a verification report: a named inequality, the parameters at its
/// worst observed case, both sides there, and margin = rhs - lhs (for "<=" checks).
struct CheckRow {
  std::string lemma;
  std::vector<std::pair<std::string, double>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  CheckStatus status = CheckStatus::pass;
  std::string note;
};

using CheckReport = std::vector<CheckRow>;

/// True iff no row has status fail.
bool all_passed(const CheckReport& report);

/// Tracks the worst case of a "lhs <= rhs" family while scanning a grid.
class WorstCase {
 public:
  /// An instance violates the check when lhs > rhs + tol * max(1, |rhs|).
  explicit WorstCase(std::string lemma, double tol = 0.0) : tol_(tol) {
    row_.lemma = std::move(lemma);
  }

  /// Records one instance; keeps it if its margin is the smallest so far.
  void observe(double lhs, double rhs,
               std::vector<std::pair<std::string, double>> params);

  std::size_t instances() const { return instances_; }
  std::size_t violations() const { return violations_; }

  /// Finalised row: pass iff no violation, or not_applicable if nothing was observed.
  CheckRow finish(std::string note = {}) const;

 private:
  CheckRow row_;
  double tol_ = 0.0;
  bool have_ = false;
  std::size_t instances_ = 0;
  std::size_t violations_ = 0;
};

CheckRow not_applicable(std::string lemma, std::string reason,
                        std::vector<std::pair<std::string, double>> params = {});

}  // namespace cuspsieve
