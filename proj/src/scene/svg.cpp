#include "tacit/scene/svg.hpp"

#include <charconv>
#include <cstdio>
#include <map>

#include "tacit/core/errors.hpp"

namespace tacit {

namespace {

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string hex(Color c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string paint_attrs(const Paint& p) {
  std::string s = " fill=\"" + (p.fill ? hex(*p.fill) : std::string("none")) + "\"";
  if (p.stroke) {
    s += " stroke=\"" + hex(*p.stroke) + "\" stroke-width=\"" + num(p.stroke_width) + "\"";
  } else {
    s += " stroke=\"none\"";
  }
  return s;
}

std::string points_attr(const std::vector<Point>& pts) {
  std::string s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(pts[i].x) + ',' + num(pts[i].y);
  }
  return s;
}

double parse_num(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("svg: bad number '" + std::string(s) + "'");
  }
  return v;
}

std::optional<Color> parse_color(const std::string& s) {
  if (s == "none") return std::nullopt;
  unsigned r = 0, g = 0, b = 0;
  if (s.size() != 7 || std::sscanf(s.c_str(), "#%02x%02x%02x", &r, &g, &b) != 3) {
    throw ValidationError("svg: bad color '" + s + "'");
  }
  return Color{std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)};
}

std::vector<Point> parse_points(std::string_view s) {
  std::vector<Point> pts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i >= s.size()) break;
    const auto comma = s.find(',', i);
    if (comma == std::string_view::npos) throw ValidationError("svg: bad points list");
    auto space = s.find(' ', comma);
    if (space == std::string_view::npos) space = s.size();
    pts.push_back({parse_num(s.substr(i, comma - i)), parse_num(s.substr(comma + 1, space - comma - 1))});
    i = space;
  }
  return pts;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const auto semi = s.find(';', i);
    const auto ent = s.substr(i, semi - i + 1);
    if (ent == "&amp;") out += '&';
    else if (ent == "&lt;") out += '<';
    else if (ent == "&gt;") out += '>';
    else if (ent == "&quot;") out += '"';
    else throw ValidationError("svg: unknown entity");
    i = semi;
  }
  return out;
}

using Attrs = std::map<std::string, std::string, std::less<>>;

Attrs parse_attrs(std::string_view tag) {
  Attrs attrs;
  std::size_t i = 0;
  while (true) {
    const auto eq = tag.find("=\"", i);
    if (eq == std::string_view::npos) break;
    auto name_start = tag.rfind(' ', eq);
    if (name_start == std::string_view::npos) throw ValidationError("svg: malformed attribute");
    const auto close = tag.find('"', eq + 2);
    if (close == std::string_view::npos) throw ValidationError("svg: unterminated attribute");
    attrs.emplace(std::string(tag.substr(name_start + 1, eq - name_start - 1)),
                  std::string(tag.substr(eq + 2, close - eq - 2)));
    i = close + 1;
  }
  return attrs;
}

const std::string& need(const Attrs& a, std::string_view key) {
  auto it = a.find(key);
  if (it == a.end()) throw ValidationError("svg: missing attribute " + std::string(key));
  return it->second;
}

Paint parse_paint(const Attrs& a) {
  Paint p;
  p.fill = parse_color(need(a, "fill"));
  p.stroke = parse_color(need(a, "stroke"));
  if (p.stroke) p.stroke_width = parse_num(need(a, "stroke-width"));
  return p;
}

}  // namespace

std::string emit_svg(const Scene& scene) {
  const std::string w = num(scene.width()), h = num(scene.height());
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
  out += "<rect id=\"background\" x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"#ffffff\"/>\n";
  for (const Item& item : scene.items()) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Rect>) {
            out += "<rect x=\"" + num(s.x) + "\" y=\"" + num(s.y) + "\" width=\"" + num(s.w) + "\" height=\"" +
                   num(s.h) + "\"" + paint_attrs(item.paint) + "/>\n";
          } else if constexpr (std::is_same_v<T, Circle>) {
            out += "<circle cx=\"" + num(s.cx) + "\" cy=\"" + num(s.cy) + "\" r=\"" + num(s.r) + "\"" +
                   paint_attrs(item.paint) + "/>\n";
          } else if constexpr (std::is_same_v<T, Line>) {
            out += "<line x1=\"" + num(s.a.x) + "\" y1=\"" + num(s.a.y) + "\" x2=\"" + num(s.b.x) + "\" y2=\"" +
                   num(s.b.y) + "\"" + paint_attrs(item.paint) + "/>\n";
          } else if constexpr (std::is_same_v<T, Polyline>) {
            out += "<polyline points=\"" + points_attr(s.points) + "\"" + paint_attrs(item.paint) + "/>\n";
          } else if constexpr (std::is_same_v<T, Polygon>) {
            out += "<polygon points=\"" + points_attr(s.points) + "\"" + paint_attrs(item.paint) + "/>\n";
          } else if constexpr (std::is_same_v<T, Text>) {
            out += "<text x=\"" + num(s.x) + "\" y=\"" + num(s.y) + "\" font-size=\"" + num(s.size) + "\"" +
                   paint_attrs(item.paint) +
                   " font-family=\"monospace\" text-anchor=\"middle\" dominant-baseline=\"central\">" +
                   escape(s.text) + "</text>\n";
          }
        },
        item.shape);
  }
  out += "</svg>\n";
  return out;
}

Scene parse_svg(std::string_view svg) {
  std::optional<Scene> scene;
  std::size_t pos = 0;
  while ((pos = svg.find('<', pos)) != std::string_view::npos) {
    const auto end = svg.find('>', pos);
    if (end == std::string_view::npos) throw ValidationError("svg: unterminated tag");
    const std::string_view tag = svg.substr(pos, end - pos + 1);
    const auto name_end = tag.find_first_of(" />", tag.size() > 1 && tag[1] == '/' ? 2 : 1);
    const std::string_view name = tag.substr(1, name_end - 1);
    pos = end + 1;
    if (name == "?xml" || name == "/svg" || name == "/text") continue;
    const Attrs a = parse_attrs(tag);
    if (name == "svg") {
      scene.emplace(parse_num(need(a, "width")), parse_num(need(a, "height")));
      continue;
    }
    if (!scene) throw ValidationError("svg: element before <svg>");
    if (name == "rect") {
      if (a.contains("id") && a.at("id") == "background") continue;
      scene->add(Rect{parse_num(need(a, "x")), parse_num(need(a, "y")), parse_num(need(a, "width")),
                      parse_num(need(a, "height"))},
                 parse_paint(a));
    } else if (name == "circle") {
      scene->add(Circle{parse_num(need(a, "cx")), parse_num(need(a, "cy")), parse_num(need(a, "r"))},
                 parse_paint(a));
    } else if (name == "line") {
      scene->add(Line{{parse_num(need(a, "x1")), parse_num(need(a, "y1"))},
                      {parse_num(need(a, "x2")), parse_num(need(a, "y2"))}},
                 parse_paint(a));
    } else if (name == "polyline") {
      scene->add(Polyline{parse_points(need(a, "points"))}, parse_paint(a));
    } else if (name == "polygon") {
      scene->add(Polygon{parse_points(need(a, "points"))}, parse_paint(a));
    } else if (name == "text") {
      const auto close = svg.find("</text>", pos);
      if (close == std::string_view::npos) throw ValidationError("svg: unterminated text");
      scene->add(Text{parse_num(need(a, "x")), parse_num(need(a, "y")), parse_num(need(a, "font-size")),
                      unescape(svg.substr(pos, close - pos))},
                 parse_paint(a));
      pos = close;
    } else {
      throw ValidationError("svg: unsupported element <" + std::string(name) + ">");
    }
  }
  if (!scene) throw ValidationError("svg: no <svg> root");
  return *scene;
}

}  // namespace tacit
