#include "cavimode/error.hpp"

namespace cavimode {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::invalid_config: return "config-invalid";
    case ErrorCode::singular_system: return "singular-system";
    case ErrorCode::singular_configuration: return "singular-configuration";
    case ErrorCode::no_root: return "no-root-in-window";
    case ErrorCode::divergent_correction: return "divergent-correction";
    case ErrorCode::out_of_validity: return "out-of-validity";
    case ErrorCode::stencil_crosses_branch: return "stencil-crosses-branch";
    case ErrorCode::peak_overlap: return "peak-overlap";
    case ErrorCode::non_convergence: return "non-convergence";
    case ErrorCode::nonzero_q: return "nonzero-Q";
    case ErrorCode::missing_damping: return "missing-gamma_m";
    case ErrorCode::unknown_preset: return "unknown-preset";
    case ErrorCode::io: return "io-error";
  }
  return "unknown";
}

}  // namespace cavimode
