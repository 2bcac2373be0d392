#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tacit {

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  auto operator<=>(const Color&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct Rect {
  double x, y, w, h;
  bool operator==(const Rect&) const = default;
};

struct Circle {
  double cx, cy, r;
  bool operator==(const Circle&) const = default;
};

struct Line {
  Point a, b;
  bool operator==(const Line&) const = default;
};

struct Polyline {
  std::vector<Point> points;
  bool operator==(const Polyline&) const = default;
};

struct Polygon {
  std::vector<Point> points;
  bool operator==(const Polygon&) const = default;
};

// Centered on (x, y); drawn with the embedded stroke font.
struct Text {
  double x, y;
  double size;
  std::string text;
  bool operator==(const Text&) const = default;
};

using Shape = std::variant<Rect, Circle, Line, Polyline, Polygon, Text>;

struct Paint {
  std::optional<Color> fill;
  std::optional<Color> stroke;
  double stroke_width = 0.0;

  bool operator==(const Paint&) const = default;
};

struct Item {
  Shape shape;
  Paint paint;

  bool operator==(const Item&) const = default;
};

inline constexpr double kCanvasUnits = 1000.0;

/// Resolution-independent display list. Items paint in order; the canvas
/// starts as background white.
class Scene {
 public:
  Scene() = default;
  Scene(double width, double height) : width_(width), height_(height) {}

  double width() const { return width_; }
  double height() const { return height_; }
  const std::vector<Item>& items() const { return items_; }
  bool empty() const { return items_.empty(); }

  Scene& add(Shape shape, Paint paint);

  Scene& rect(double x, double y, double w, double h, std::optional<Color> fill,
              std::optional<Color> stroke = std::nullopt, double stroke_width = 0.0);
  Scene& circle(double cx, double cy, double r, std::optional<Color> fill,
                std::optional<Color> stroke = std::nullopt, double stroke_width = 0.0);
  Scene& line(Point a, Point b, Color stroke, double width);
  Scene& polyline(std::vector<Point> points, Color stroke, double width);
  Scene& polygon(std::vector<Point> points, std::optional<Color> fill,
                 std::optional<Color> stroke = std::nullopt, double stroke_width = 0.0);
  Scene& text(double x, double y, double size, std::string s, Color color);

  // Appends all items of `other` (same canvas assumed).
  Scene& append(const Scene& other);

  bool operator==(const Scene&) const = default;

 private:
  double width_ = kCanvasUnits;
  double height_ = kCanvasUnits;
  std::vector<Item> items_;
};

}  // namespace tacit
