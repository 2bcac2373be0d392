#include "tacit/scene/font.hpp"

#include <cctype>
#include <string_view>
#include <unordered_map>

namespace tacit::font {

namespace {

// Glyphs on a 4x6 grid, y down. Strokes separated by '|'; a repeated point
// is a dot.
const std::unordered_map<char, std::string_view>& glyphs() {
  static const std::unordered_map<char, std::string_view> table = {
      {'0', "0,0 4,0 4,6 0,6 0,0|0,6 4,0"},
      {'1', "1,1 2,0 2,6|1,6 3,6"},
      {'2', "0,1 1,0 3,0 4,1 4,2 0,6 4,6"},
      {'3', "0,0 4,0 2,2 3,2 4,3 4,5 3,6 1,6 0,5"},
      {'4', "3,6 3,0 0,4 4,4"},
      {'5', "4,0 0,0 0,3 3,3 4,4 4,5 3,6 0,6"},
      {'6', "4,0 1,0 0,1 0,5 1,6 3,6 4,5 4,4 3,3 0,3"},
      {'7', "0,0 4,0 1,6"},
      {'8', "1,0 3,0 4,1 4,2 3,3 1,3 0,2 0,1 1,0|1,3 0,4 0,5 1,6 3,6 4,5 4,4 3,3"},
      {'9', "4,3 1,3 0,2 0,1 1,0 3,0 4,1 4,5 3,6 0,6"},
      {'A', "0,6 0,2 2,0 4,2 4,6|0,4 4,4"},
      {'B', "0,0 0,6 3,6 4,5 4,4 3,3 0,3|0,0 3,0 4,1 4,2 3,3"},
      {'C', "4,0 0,0 0,6 4,6"},
      {'D', "0,0 0,6 2,6 4,4 4,2 2,0 0,0"},
      {'E', "4,0 0,0 0,6 4,6|0,3 3,3"},
      {'F', "4,0 0,0 0,6|0,3 3,3"},
      {'G', "4,0 0,0 0,6 4,6 4,3 2,3"},
      {'H', "0,0 0,6|4,0 4,6|0,3 4,3"},
      {'I', "1,0 3,0|2,0 2,6|1,6 3,6"},
      {'J', "4,0 4,6 0,6 0,4"},
      {'K', "0,0 0,6|4,0 0,3 4,6"},
      {'L', "0,0 0,6 4,6"},
      {'M', "0,6 0,0 2,3 4,0 4,6"},
      {'N', "0,6 0,0 4,6 4,0"},
      {'O', "0,0 4,0 4,6 0,6 0,0"},
      {'P', "0,6 0,0 4,0 4,3 0,3"},
      {'Q', "0,0 4,0 4,6 0,6 0,0|2,4 4,6"},
      {'R', "0,6 0,0 4,0 4,3 0,3 4,6"},
      {'S', "4,0 0,0 0,3 4,3 4,6 0,6"},
      {'T', "0,0 4,0|2,0 2,6"},
      {'U', "0,0 0,6 4,6 4,0"},
      {'V', "0,0 2,6 4,0"},
      {'W', "0,0 1,6 2,3 3,6 4,0"},
      {'X', "0,0 4,6|4,0 0,6"},
      {'Y', "0,0 2,3 4,0|2,3 2,6"},
      {'Z', "0,0 4,0 0,6 4,6"},
      {'?', "0,1 1,0 3,0 4,1 4,2 2,3 2,4|2,6 2,6"},
      {'!', "2,0 2,4|2,6 2,6"},
      {'=', "0,2 4,2|0,4 4,4"},
      {'+', "0,3 4,3|2,1 2,5"},
      {'-', "0,3 4,3"},
      {'.', "2,6 2,6"},
      {':', "2,2 2,2|2,5 2,5"},
      {'/', "0,6 4,0"},
      {'>', "0,0 4,3 0,6"},
      {'<', "4,0 0,3 4,6"},
  };
  return table;
}

std::vector<std::vector<Point>> parse_glyph(std::string_view spec) {
  std::vector<std::vector<Point>> strokes(1);
  std::size_t i = 0;
  auto read_int = [&]() {
    int v = 0;
    while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i]))) {
      v = v * 10 + (spec[i] - '0');
      ++i;
    }
    return v;
  };
  while (i < spec.size()) {
    const char c = spec[i];
    if (c == '|') {
      strokes.emplace_back();
      ++i;
    } else if (c == ' ') {
      ++i;
    } else {
      const int x = read_int();
      ++i;  // ','
      const int y = read_int();
      strokes.back().push_back({double(x), double(y)});
    }
  }
  return strokes;
}

}  // namespace

double stroke_width(double size) { return size * 0.11; }

std::vector<std::vector<Point>> layout(const Text& text) {
  const double unit = text.size * 0.7 / 6.0;
  const double advance = 6.0 * unit;
  const auto n = static_cast<double>(text.text.size());
  const double total = n > 0 ? n * advance - 2.0 * unit : 0.0;
  const double left = text.x - total / 2.0;
  const double top = text.y - 3.0 * unit;

  std::vector<std::vector<Point>> out;
  const auto& table = glyphs();
  for (std::size_t k = 0; k < text.text.size(); ++k) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text.text[k])));
    if (c == ' ') continue;
    auto it = table.find(c);
    if (it == table.end()) it = table.find('?');
    const double ox = left + double(k) * advance;
    for (auto& stroke : parse_glyph(it->second)) {
      for (auto& p : stroke) p = {ox + p.x * unit, top + p.y * unit};
      out.push_back(std::move(stroke));
    }
  }
  return out;
}

}  // namespace tacit::font
