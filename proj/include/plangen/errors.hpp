#pragma once

#include <stdexcept>
#include <string>

namespace plangen {

// Every failure surfaced by the library carries one of these codes so
// callers (CLI, bindings, tests) can dispatch without string matching.
enum class Errc {
  lex_error,
  structure_error,
  unsupported_feature,
  binding_error,
  domain_mismatch,
  plan_format,
  non_monotonic_timestamps,
  unknown_action,
  arity_mismatch,
  type_mismatch,
  precondition_violation,
  invalid_inputs,
  empty_input,
  grounding_explosion,
  external_failure,
  conversion_failure,
  invalid_external_plan,
  sampling_failure,
  batch_exhausted,
  inconsistent_tuple,
  decode_failure,
  degenerate_split,
  manifest_mismatch,
  io_failure,
  incompatible_params,
  internal,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, int line = 0, int column = 0);

  Errc code() const noexcept { return code_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  Errc code_;
  int line_;
  int column_;
};

[[noreturn]] void fail(Errc code, const std::string& message, int line = 0,
                       int column = 0);

}  // namespace plangen
