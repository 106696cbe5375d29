#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cavimode {

enum class ErrorCode {
  invalid_spec,
  invalid_config,
  singular_system,
  singular_configuration,
  no_root,
  divergent_correction,
  out_of_validity,
  stencil_crosses_branch,
  peak_overlap,
  non_convergence,
  nonzero_q,
  missing_damping,
  unknown_preset,
  io,
};

std::string_view to_string(ErrorCode code);

class CavityError : public std::runtime_error {
 public:
  CavityError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cavimode
