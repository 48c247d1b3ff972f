// SPDX-License-Identifier: Apache-2.0

#include "vrlvr/palette.hpp"

#include <cmath>
#include <limits>

#include "vrlvr/error.hpp"

namespace vrlvr {

double rgb_distance(Rgb a, Rgb b) {
  const double dr = double(a.r) - b.r;
  const double dg = double(a.g) - b.g;
  const double db = double(a.b) - b.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

const char* role_name(Role role) {
  static constexpr std::array<const char*, kRoleCount> names = {
      "background", "wall",  "floor", "path",  "start_marker", "goal_marker",
      "box",        "target", "player", "flow0", "flow1",       "flow2",
      "flow3",      "flow4", "flow5", "flow6", "flow7"};
  return names[static_cast<std::size_t>(role)];
}

std::optional<Role> Palette::classify(double r, double g, double b, double tolerance) const {
  double best = std::numeric_limits<double>::infinity();
  int best_role = -1;
  for (int i = 0; i < kRoleCount; ++i) {
    const double dr = r - colors[i].r;
    const double dg = g - colors[i].g;
    const double db = b - colors[i].b;
    const double d = dr * dr + dg * dg + db * db;
    if (d < best) {
      best = d;
      best_role = i;
    }
  }
  if (best_role < 0 || std::sqrt(best) > tolerance) return std::nullopt;
  return static_cast<Role>(best_role);
}

double Palette::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kRoleCount; ++i)
    for (int j = i + 1; j < kRoleCount; ++j) best = std::min(best, rgb_distance(colors[i], colors[j]));
  return best;
}

// Colors sit on the {0, 127|128, 255} lattice with the grey center left out,
// so any two roles are >= 127 apart and every role is far from mid-grey.
// Order: background, wall, floor, path, start, goal, box, target, player,
// flow0..flow7.
std::span<const Palette> builtin_palettes() {
  static const std::array<Palette, 4> themes = {{
      {"classic",
       {{{255, 255, 255}, {0, 0, 0},       {255, 255, 128}, {255, 0, 0},   {0, 255, 0},
         {0, 0, 255},     {128, 0, 0},     {255, 128, 0},   {0, 128, 255}, {255, 0, 255},
         {0, 255, 255},   {128, 255, 0},   {128, 0, 255},   {0, 128, 0},   {255, 128, 128},
         {0, 0, 128},     {128, 255, 255}}}},
      {"dusk",
       {{{0, 0, 0},       {255, 255, 255}, {0, 0, 127},     {0, 255, 255}, {255, 0, 255},
         {255, 255, 0},   {127, 255, 255}, {0, 127, 255},   {255, 127, 0}, {0, 255, 0},
         {255, 0, 0},     {127, 0, 255},   {127, 255, 0},   {255, 127, 255}, {0, 127, 127},
         {255, 255, 127}, {127, 0, 0}}}},
      {"mint",
       {{{255, 255, 255}, {0, 0, 0},       {255, 128, 255}, {0, 0, 255},   {255, 0, 0},
         {0, 255, 0},     {0, 0, 128},     {128, 0, 255},   {128, 255, 0}, {0, 255, 255},
         {255, 255, 0},   {255, 0, 128},   {0, 255, 128},   {128, 0, 0},   {128, 128, 255},
         {0, 128, 0},     {255, 255, 128}}}},
      {"ember",
       {{{0, 0, 0},       {255, 255, 255}, {127, 0, 0},     {255, 0, 255}, {255, 255, 0},
         {0, 255, 255},   {255, 127, 255}, {255, 0, 127},   {0, 255, 127}, {0, 0, 255},
         {0, 255, 0},     {255, 127, 0},   {0, 127, 255},   {255, 255, 127}, {127, 0, 127},
         {127, 255, 255}, {0, 127, 0}}}},
  }};
  return themes;
}

const Palette& palette_by_id(const std::string& theme_id) {
  for (const auto& p : builtin_palettes())
    if (p.theme_id == theme_id) return p;
  throw Error(ErrorCode::InvalidArgument, "unknown palette theme '" + theme_id + "'");
}

}  // namespace vrlvr
