#pragma once

#include <stdexcept>
#include <string>

namespace qpoly {

// A rational literal or an input file failed to parse.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An operation was called outside its stated preconditions.
struct precondition_error : std::invalid_argument {
  explicit precondition_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A vertex set does not span its ambient space, so it describes a
// degenerate (lower-dimensional) unit ball rather than a norm.
struct degenerate_input_error : std::domain_error {
  explicit degenerate_input_error(const std::string& msg) : std::domain_error(msg) {}
};

// An enumeration exceeded its configured size cap.
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qpoly
