#pragma once

#include <cmath>

namespace sf {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double length(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec2 a, Vec2 b) { return length(a - b); }

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Wraps into [0, 360).
double wrap_degrees(double deg);

// Shortest signed rotation from `from` to `to`, in (-180, 180].
double angle_delta(double from, double to);

inline Vec2 unit_from_degrees(double deg) {
  const double r = deg_to_rad(deg);
  return {std::cos(r), std::sin(r)};
}

// Heading in [0, 360) of the vector from `from` to `to`.
double bearing_degrees(Vec2 from, Vec2 to);

// Regular hexagon with a vertex at heading 0.
struct Hexagon {
  Vec2 center;
  double circumradius = 0.0;

  double apothem() const { return circumradius * (std::sqrt(3.0) / 2.0); }

  // Strict interior test.
  bool contains(Vec2 p) const;

  Vec2 vertex(int i) const;
};

}  // namespace sf
