#pragma once

#include "vfkit/vectorfield.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace vfkit {

/// A named family of fields on R^n, as read from a system file:
///
///   system <name> dim <n>
///   field <Name> = (<expr>, ..., <expr>) [on x<i> < <q> [and x<j> > <q>]...]
///
/// Blank lines and lines starting with '#' are ignored.
struct System {
  std::string name;
  std::size_t dim = 0;
  std::vector<VectorField> fields;

  /// Throws std::out_of_range for an unknown name.
  const VectorField& field(std::string_view name) const;
  /// Fields named in a comma-separated list, in that order. Empty list: all.
  std::vector<VectorField> select(std::string_view names) const;
  /// Text in the file format; parse_system(str()) reproduces the system.
  std::string str() const;
};

/// Throws ParseError with the 1-based line and column of the problem.
System parse_system(std::string_view text);
/// Throws std::runtime_error when the file cannot be read.
System load_system(const std::string& path);

} // namespace vfkit
