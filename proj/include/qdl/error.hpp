#pragma once

#include <stdexcept>
#include <string>

namespace qdl {

enum class Errc {
  invalid_argument,
  incomplete_params,
  characteristic_unusable,
  distinguisher_invalid,
  invalid_bias,
  no_applicable_attack,
  impossible_characteristic,
  not_found,
  attack_failed,
  schema_violation,
  infeasible,
};

const char* to_string(Errc code);

/// Single exception type for the library; `code()` tells callers (and the CLI
/// exit-code mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qdl
