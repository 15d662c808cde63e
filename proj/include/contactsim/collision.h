#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "contactsim/dynamics.h"

namespace contactsim {

struct Circle {
  double radius = 0.0;
};

/// Axis-aligned in the body frame: half_width along body x, half_height
/// along body y.
struct Rectangle {
  double half_width = 0.0;
  double half_height = 0.0;
};

/// The set {x : normal . x <= offset} is solid. Always expressed in world
/// coordinates; the body state paired with a half-plane is ignored.
struct HalfPlane {
  Eigen::Vector2d normal = Eigen::Vector2d::UnitY();
  double offset = 0.0;
};

using Shape = std::variant<Circle, Rectangle, HalfPlane>;

void ValidateShape(const Shape& shape);
HalfPlane Ground();

class UnsupportedPair : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One closest-feature candidate between shape a and shape b.
struct ContactFrame {
  // Signed distance; negative iff the shapes overlap.
  double gap = 0.0;
  // Unit normal pointing from b towards a.
  Eigen::Vector2d normal = Eigen::Vector2d::UnitY();
  // Columns (t, -t) with t the normal rotated by -90 degrees.
  Eigen::Matrix2d directions = Eigen::Matrix2d::Zero();
  // Witness point on the surface of a, world frame.
  Eigen::Vector2d point = Eigen::Vector2d::Zero();
  // Rows: normal and first friction direction, for body a.
  Eigen::Matrix<double, 2, 3> jacobian = Eigen::Matrix<double, 2, 3>::Zero();

  Eigen::Vector2d tangent() const { return directions.col(0); }
  /// Matching witness point on the surface of b.
  Eigen::Vector2d point_on_b() const { return point - gap * normal; }
};

Eigen::Vector2d TangentOf(const Eigen::Vector2d& normal);

/// Closest-feature frames for a supported pair. Circle pairs yield one
/// frame; Rectangle vs HalfPlane yields the two lowest corners, nearest
/// first. Throws UnsupportedPair otherwise.
std::vector<ContactFrame> GapAndFrame(const Shape& shape_a,
                                      const BodyState& state_a,
                                      const Shape& shape_b,
                                      const BodyState& state_b);

/// Maps (xdot, ydot, omega) of the body at `state` to the velocity of the
/// material point at frame.point along the normal and first direction.
Eigen::Matrix<double, 2, 3> ContactJacobian(const ContactFrame& frame,
                                            const BodyState& state);

Eigen::Matrix<double, 2, 3> PointJacobian(const Eigen::Vector2d& point,
                                          const Eigen::Vector2d& normal,
                                          const BodyState& state);

/// Frames whose gap is at most `threshold`.
std::vector<ContactFrame> CheckCollision(std::span<const ContactFrame> frames,
                                         double threshold);

constexpr double kDefaultContactThreshold = 1e-4;

}  // namespace contactsim
