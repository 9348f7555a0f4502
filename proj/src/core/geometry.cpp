#include "sf/geometry.hpp"

namespace sf {

double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w -= 360.0;
  return w;
}

double angle_delta(double from, double to) {
  double d = wrap_degrees(to - from);
  if (d > 180.0) d -= 360.0;
  return d;
}

double bearing_degrees(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  return wrap_degrees(rad_to_deg(std::atan2(d.y, d.x)));
}

bool Hexagon::contains(Vec2 p) const {
  const Vec2 d = p - center;
  const double a = apothem();
  // Edge normals sit halfway between vertices: 30, 90, ..., 330 degrees.
  // Opposite edges share a normal up to sign, so three tests suffice.
  static const double kC = std::sqrt(3.0) / 2.0;
  const double n0 = d.x * kC + d.y * 0.5;   // 30 deg
  const double n1 = d.y;                    // 90 deg
  const double n2 = -d.x * kC + d.y * 0.5;  // 150 deg
  return std::abs(n0) < a && std::abs(n1) < a && std::abs(n2) < a;
}

Vec2 Hexagon::vertex(int i) const {
  return center + unit_from_degrees(60.0 * i) * circumradius;
}

}  // namespace sf
