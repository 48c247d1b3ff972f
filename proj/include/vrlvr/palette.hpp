// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vrlvr {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

double rgb_distance(Rgb a, Rgb b);

inline constexpr int kFlowColorCount = 8;

/// Semantic role of a palette entry. The parser classifies every cell into
/// one of these or Unknown.
enum class Role : std::uint8_t {
  Background,
  Wall,
  Floor,
  Path,
  StartMarker,
  GoalMarker,
  Box,
  Target,
  Player,
  Flow0,
  // Flow1..Flow7 follow contiguously.
};

inline constexpr int kRoleCount = 9 + kFlowColorCount;

inline Role flow_role(int color) { return static_cast<Role>(static_cast<int>(Role::Flow0) + color); }
inline std::optional<int> flow_index(Role role) {
  int i = static_cast<int>(role) - static_cast<int>(Role::Flow0);
  if (i < 0 || i >= kFlowColorCount) return std::nullopt;
  return i;
}
const char* role_name(Role role);

struct Palette {
  std::string theme_id;
  std::array<Rgb, kRoleCount> colors{};

  Rgb operator[](Role role) const { return colors[static_cast<std::size_t>(role)]; }

  /// Nearest palette role to `mean`, or nullopt when the nearest entry is
  /// farther than `tolerance` in RGB L2 distance.
  std::optional<Role> classify(double r, double g, double b, double tolerance) const;

  /// Smallest pairwise RGB distance between any two roles.
  double min_pairwise_distance() const;

  friend bool operator==(const Palette&, const Palette&) = default;
};

/// Built-in themes; every one keeps all roles at least 120 apart.
std::span<const Palette> builtin_palettes();

/// Throws InvalidArgument for an unknown theme id.
const Palette& palette_by_id(const std::string& theme_id);

}  // namespace vrlvr
