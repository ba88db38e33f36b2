#include "plangen/errors.hpp"

namespace plangen {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::lex_error: return "LexError";
    case Errc::structure_error: return "StructureError";
    case Errc::unsupported_feature: return "UnsupportedFeature";
    case Errc::binding_error: return "BindingError";
    case Errc::domain_mismatch: return "DomainMismatch";
    case Errc::plan_format: return "PlanFormatError";
    case Errc::non_monotonic_timestamps: return "NonMonotonicTimestamps";
    case Errc::unknown_action: return "UnknownAction";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::type_mismatch: return "TypeMismatch";
    case Errc::precondition_violation: return "PreconditionViolation";
    case Errc::invalid_inputs: return "InvalidInputs";
    case Errc::empty_input: return "EmptyInput";
    case Errc::grounding_explosion: return "GroundingExplosion";
    case Errc::external_failure: return "ExternalFailure";
    case Errc::conversion_failure: return "ConversionFailure";
    case Errc::invalid_external_plan: return "InvalidExternalPlan";
    case Errc::sampling_failure: return "SamplingFailure";
    case Errc::batch_exhausted: return "BatchExhausted";
    case Errc::inconsistent_tuple: return "InconsistentTuple";
    case Errc::decode_failure: return "DecodeFailure";
    case Errc::degenerate_split: return "DegenerateSplit";
    case Errc::manifest_mismatch: return "ManifestMismatch";
    case Errc::io_failure: return "IoFailure";
    case Errc::incompatible_params: return "IncompatibleParams";
    case Errc::internal: return "InternalError";
  }
  return "UnknownError";
}

namespace {

std::string format_message(Errc code, const std::string& message, int line,
                           int column) {
  std::string out = errc_name(code);
  if (line > 0) {
    out += " at ";
    out += std::to_string(line);
    out += ':';
    out += std::to_string(column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message, int line, int column)
    : std::runtime_error(format_message(code, message, line, column)),
      code_(code),
      line_(line),
      column_(column) {}

void fail(Errc code, const std::string& message, int line, int column) {
  throw Error(code, message, line, column);
}

}  // namespace plangen
