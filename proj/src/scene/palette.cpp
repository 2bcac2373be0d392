#include "tacit/scene/palette.hpp"

#include <cmath>
#include <string>

namespace tacit::palette {

std::vector<std::pair<std::string, Color>> named_colors() {
  std::vector<std::pair<std::string, Color>> out = {
      {"background-white", background_white},
      {"wall-black", wall_black},
      {"neutral-gray", neutral_gray},
      {"path-blue", path_blue},
      {"start-green", start_green},
      {"end-red", end_red},
      {"badge-green", badge_green},
      {"badge-red", badge_red},
      {"mark-red", mark_red},
      {"positive-blue", positive_blue},
      {"negative-red", negative_red},
      {"filled-navy", filled_navy},
      {"iso-top", iso_top},
      {"iso-left", iso_left},
      {"iso-right", iso_right},
  };
  for (std::size_t i = 0; i < portal.size(); ++i) out.emplace_back("portal-" + std::to_string(i), portal[i]);
  for (std::size_t i = 0; i < symbol.size(); ++i) out.emplace_back("symbol-" + std::to_string(i), symbol[i]);
  for (std::size_t i = 0; i < node.size(); ++i) out.emplace_back("node-" + std::to_string(i), node[i]);
  for (std::size_t i = 0; i < state.size(); ++i) out.emplace_back("state-" + std::to_string(i), state[i]);
  return out;
}

double luma(Color c) { return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b; }

double distance(Color a, Color b) {
  const double dr = double(a.r) - b.r;
  const double dg = double(a.g) - b.g;
  const double db = double(a.b) - b.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

}  // namespace tacit::palette
