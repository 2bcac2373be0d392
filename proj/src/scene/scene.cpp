#include "tacit/scene/scene.hpp"

#include <cmath>
#include <stdexcept>

namespace tacit {

namespace {

void require_finite(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("scene coordinate is not finite");
}

void require_finite(const Shape& shape) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Rect>) {
          for (double v : {s.x, s.y, s.w, s.h}) require_finite(v);
        } else if constexpr (std::is_same_v<T, Circle>) {
          for (double v : {s.cx, s.cy, s.r}) require_finite(v);
        } else if constexpr (std::is_same_v<T, Line>) {
          for (double v : {s.a.x, s.a.y, s.b.x, s.b.y}) require_finite(v);
        } else if constexpr (std::is_same_v<T, Text>) {
          for (double v : {s.x, s.y, s.size}) require_finite(v);
        } else {
          for (const auto& p : s.points) {
            require_finite(p.x);
            require_finite(p.y);
          }
        }
      },
      shape);
}

}  // namespace

Scene& Scene::add(Shape shape, Paint paint) {
  require_finite(shape);
  require_finite(paint.stroke_width);
  items_.push_back(Item{std::move(shape), paint});
  return *this;
}

Scene& Scene::rect(double x, double y, double w, double h, std::optional<Color> fill,
                   std::optional<Color> stroke, double stroke_width) {
  return add(Rect{x, y, w, h}, Paint{fill, stroke, stroke_width});
}

Scene& Scene::circle(double cx, double cy, double r, std::optional<Color> fill,
                     std::optional<Color> stroke, double stroke_width) {
  return add(Circle{cx, cy, r}, Paint{fill, stroke, stroke_width});
}

Scene& Scene::line(Point a, Point b, Color stroke, double width) {
  return add(Line{a, b}, Paint{std::nullopt, stroke, width});
}

Scene& Scene::polyline(std::vector<Point> points, Color stroke, double width) {
  return add(Polyline{std::move(points)}, Paint{std::nullopt, stroke, width});
}

Scene& Scene::polygon(std::vector<Point> points, std::optional<Color> fill,
                      std::optional<Color> stroke, double stroke_width) {
  return add(Polygon{std::move(points)}, Paint{fill, stroke, stroke_width});
}

Scene& Scene::text(double x, double y, double size, std::string s, Color color) {
  return add(Text{x, y, size, std::move(s)}, Paint{color, std::nullopt, 0.0});
}

Scene& Scene::append(const Scene& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
  return *this;
}

}  // namespace tacit
