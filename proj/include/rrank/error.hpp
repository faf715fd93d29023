#pragma once

#include <stdexcept>
#include <string>

namespace rrank {

/// Failure taxonomy shared by every module. The CLI maps these onto process
/// exit codes (data vs numerical vs usage), so new values should be added to
/// exactly one of those groups.
enum class errc {
  non_finite,
  duplicate_identifier,
  too_few_rows_or_cols,
  dimension_mismatch,
  invalid_capacity,
  zero_variance,
  non_convergence,
  degenerate_input,
  infeasible_capacity,
  invalid_config,
  parse_error,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::non_finite: return "non_finite";
    case errc::duplicate_identifier: return "duplicate_identifier";
    case errc::too_few_rows_or_cols: return "too_few_rows_or_cols";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::invalid_capacity: return "invalid_capacity";
    case errc::zero_variance: return "zero_variance";
    case errc::non_convergence: return "non_convergence";
    case errc::degenerate_input: return "degenerate_input";
    case errc::infeasible_capacity: return "infeasible_capacity";
    case errc::invalid_config: return "invalid_config";
    case errc::parse_error: return "parse_error";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace rrank
