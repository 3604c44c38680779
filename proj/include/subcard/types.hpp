//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace subcard {

using VertexId = std::uint32_t;
using Label = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Raised for structurally invalid graphs (self-loops, bad ids, ...).
class graph_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the text loader; carries the 1-based line number.
class parse_error : public graph_error {
 public:
  parse_error(std::size_t line, const std::string &what)
      : graph_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace subcard
