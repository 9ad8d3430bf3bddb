#pragma once

#include "vfkit/system.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace vfkit::cli {

struct FactOutcome {
  bool pass = false;
  std::string observed;
};

struct FactContext {
  std::uint64_t seed = 1;
};

/// A machine-checkable statement about a preset. `basis` says where the
/// expected value comes from: "stated" (asserted by the worked example),
/// "elementary" (immediate from the definitions) or "derived" (worked out
/// independently; the unit tests carry the oracle).
struct Fact {
  std::string statement;
  std::string basis;
  std::function<FactOutcome(const System&, const FactContext&)> check;
};

struct Preset {
  std::string name;
  /// The worked example the preset reproduces, in words.
  std::string source;
  /// System file text.
  std::string text;
  std::vector<Fact> facts;

  System system() const { return parse_system(text); }
};

const std::vector<Preset>& presets();
/// Null when no preset has this name.
const Preset* find_preset(std::string_view name);

} // namespace vfkit::cli
