#include "cuspsieve/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cuspsieve {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::fail: return "FAIL";
    case CheckStatus::not_applicable: return "NOT-APPLICABLE";
    case CheckStatus::report_only: return "REPORT";
  }
  return "?";
}

bool all_passed(const CheckReport& report) {
  for (const auto& row : report)
    if (row.status == CheckStatus::fail) return false;
  return true;
}

void WorstCase::observe(double lhs, double rhs,
                        std::vector<std::pair<std::string, double>> params) {
  ++instances_;
  const double margin = rhs - lhs;
  if (margin < -tol_ * std::max(1.0, std::abs(rhs))) ++violations_;
  if (!have_ || margin < row_.margin) {
    have_ = true;
    row_.lhs = lhs;
    row_.rhs = rhs;
    row_.margin = margin;
    row_.params = std::move(params);
  }
}

CheckRow WorstCase::finish(std::string note) const {
  CheckRow out = row_;
  out.note = std::move(note);
  if (!have_) {
    out.status = CheckStatus::not_applicable;
    if (out.note.empty()) out.note = "no instance inside the scanned range";
    return out;
  }
  out.status = violations_ == 0 ? CheckStatus::pass : CheckStatus::fail;
  out.params.emplace_back("instances", static_cast<double>(instances_));
  out.params.emplace_back("violations", static_cast<double>(violations_));
  return out;
}

CheckRow not_applicable(std::string lemma, std::string reason,
                        std::vector<std::pair<std::string, double>> params) {
  CheckRow row;
  row.lemma = std::move(lemma);
  row.params = std::move(params);
  row.status = CheckStatus::not_applicable;
  row.lhs = row.rhs = row.margin = std::numeric_limits<double>::quiet_NaN();
  row.note = std::move(reason);
  return row;
}

}  // namespace cuspsieve
