#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fragalign {

enum class ErrorCode {
  not_enabled,
  state_cap_exceeded,
  parse_error,
  arity_error,
  unknown_node,
  io_error,
  xml_error,
  missing_column,
  empty_log,
  no_matching_leaf,
  unsupported_marking,
  malformed_path,
  no_goal_reachable,
  invalid_argument,
  invalid_model,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the whole library. `position` carries a byte
// offset for parse errors and is npos otherwise.
class Error : public std::runtime_error {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(ErrorCode code, std::string message, std::size_t position = npos)
      : std::runtime_error(std::move(message)), code_(code), position_(position) {}

  ErrorCode code() const { return code_; }
  std::size_t position() const { return position_; }

private:
  ErrorCode code_;
  std::size_t position_;
};

}  // namespace fragalign
