#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kgkms {

enum class Errc {
  no_sources,
  not_bijective,
  endpoint_mismatch,
  cube_inconsistent,
  not_composable,
  out_of_range,
  cap_exceeded,
  commutation_failure,
  not_irreducible,
  no_convergence,
  not_coordinatewise_irreducible,
  degenerate_critical_beta,
  hypothesis_unchecked,
  degree_mismatch,
  constraint_violated,
  diverges,
  kgraph_is_cycle,
  precondition_violated,
  bad_params,
  parse_error,
  overflow,
  internal_check_failed,
};

std::string_view errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

/// One violated validation check, with the offending ids in `detail`.
struct ValidationIssue {
  Errc code;
  std::string detail;
};

/// Thrown by validate(); carries the full list of violations.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<ValidationIssue> issues)
      : Error(issues.empty() ? Errc::internal_check_failed : issues.front().code,
              summarize(issues)),
        issues_(std::move(issues)) {}

  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
  static std::string summarize(const std::vector<ValidationIssue>& issues);
  std::vector<ValidationIssue> issues_;
};

}  // namespace kgkms
