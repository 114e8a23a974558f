#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gspm {

/// A cell vector with norm below the projection threshold (1e-300).
struct ZeroVectorError : std::runtime_error {
  std::size_t cell;
  explicit ZeroVectorError(std::size_t cell_index)
      : std::runtime_error("zero-length vector at cell " + std::to_string(cell_index)),
        cell(cell_index) {}
};

struct MeshMismatchError : std::runtime_error {
  explicit MeshMismatchError(const std::string& context)
      : std::runtime_error("mesh mismatch: " + context) {}
};

/// A non-finite component appeared during time stepping.
struct DivergedError : std::runtime_error {
  std::int64_t step;
  explicit DivergedError(std::int64_t step_index)
      : std::runtime_error("non-finite field at step " + std::to_string(step_index)),
        step(step_index) {}
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_number, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
        line(line_number) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace gspm
