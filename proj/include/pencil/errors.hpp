#pragma once

#include <stdexcept>
#include <string>

namespace pencil {

enum class ErrorCode {
  DIM_MISMATCH,
  NOT_HERMITIAN,
  BAD_INPUT,
  EIG_NO_CONVERGENCE,
  NOT_INDEFINITE,
  BAD_SIGNS,
  NO_ROOT,
  BAD_ROOT,
  SAMPLER_STARVED,
  UNBOUNDED_BRACKET,
  NOT_FEASIBLE,
  GRID_TOO_LARGE,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DIM_MISMATCH: return "DIM_MISMATCH";
    case ErrorCode::NOT_HERMITIAN: return "NOT_HERMITIAN";
    case ErrorCode::BAD_INPUT: return "BAD_INPUT";
    case ErrorCode::EIG_NO_CONVERGENCE: return "EIG_NO_CONVERGENCE";
    case ErrorCode::NOT_INDEFINITE: return "NOT_INDEFINITE";
    case ErrorCode::BAD_SIGNS: return "BAD_SIGNS";
    case ErrorCode::NO_ROOT: return "NO_ROOT";
    case ErrorCode::BAD_ROOT: return "BAD_ROOT";
    case ErrorCode::SAMPLER_STARVED: return "SAMPLER_STARVED";
    case ErrorCode::UNBOUNDED_BRACKET: return "UNBOUNDED_BRACKET";
    case ErrorCode::NOT_FEASIBLE: return "NOT_FEASIBLE";
    case ErrorCode::GRID_TOO_LARGE: return "GRID_TOO_LARGE";
  }
  return "UNKNOWN";
}

class PencilError : public std::runtime_error {
 public:
  PencilError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw PencilError(code, msg);
}

}  // namespace pencil
