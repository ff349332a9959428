#pragma once

#include <optional>
#include <string>
#include <vector>

namespace kgkms {

enum class CheckStatus { pass, fail, skipped };

/// One verification record. `anchor` names the identity or relation the check
/// verifies, so a failure points straight at the statement it contradicts.
struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::skipped;
  std::string value;      // rendered value(s)
  std::string tolerance;  // rendered tolerance, empty when structural
  std::optional<double> tail_bound;
  std::string anchor;
};

struct Report {
  std::vector<CheckRecord> records;

  bool all_pass() const;
  void add(CheckRecord rec) { records.push_back(std::move(rec)); }
  void pass(std::string name, std::string value, std::string tol, std::string anchor,
            std::optional<double> tail = std::nullopt);
  void fail(std::string name, std::string value, std::string tol, std::string anchor,
            std::optional<double> tail = std::nullopt);
  void check(bool ok, std::string name, std::string value, std::string tol, std::string anchor,
             std::optional<double> tail = std::nullopt);
  void skip(std::string name, std::string reason, std::string anchor);
};

std::string format_double(double v);
std::string render_human(const Report& r);
std::string render_jsonl(const Report& r);

}  // namespace kgkms
