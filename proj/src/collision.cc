#include "contactsim/collision.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace contactsim {

namespace {

Eigen::Matrix2d Rotation(double theta) {
  return Eigen::Rotation2Dd(theta).toRotationMatrix();
}

Eigen::Vector2d Center(const BodyState& state) { return state.q.head<2>(); }

ContactFrame MakeFrame(double gap, const Eigen::Vector2d& normal,
                       const Eigen::Vector2d& point, const BodyState& state_a) {
  ContactFrame frame;
  frame.gap = gap;
  frame.normal = normal;
  const Eigen::Vector2d t = TangentOf(normal);
  frame.directions.col(0) = t;
  frame.directions.col(1) = -t;
  frame.point = point;
  frame.jacobian = ContactJacobian(frame, state_a);
  return frame;
}

ContactFrame CircleHalfPlane(const Circle& circle, const BodyState& state,
                             const HalfPlane& plane) {
  const Eigen::Vector2d c = Center(state);
  const double gap = plane.normal.dot(c) - plane.offset - circle.radius;
  return MakeFrame(gap, plane.normal, c - circle.radius * plane.normal, state);
}

std::vector<ContactFrame> RectangleHalfPlane(const Rectangle& rect,
                                             const BodyState& state,
                                             const HalfPlane& plane) {
  const Eigen::Matrix2d rot = Rotation(state.q.z());
  const std::array<Eigen::Vector2d, 4> corners = {
      Eigen::Vector2d(-rect.half_width, -rect.half_height),
      Eigen::Vector2d(rect.half_width, -rect.half_height),
      Eigen::Vector2d(rect.half_width, rect.half_height),
      Eigen::Vector2d(-rect.half_width, rect.half_height)};
  std::array<Eigen::Vector2d, 4> world;
  std::array<double, 4> dist;
  for (int i = 0; i < 4; ++i) {
    world[i] = Center(state) + rot * corners[i];
    dist[i] = plane.normal.dot(world[i]) - plane.offset;
  }
  std::array<int, 4> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist[a] < dist[b]; });
  std::vector<ContactFrame> frames;
  for (int k = 0; k < 2; ++k) {
    frames.push_back(MakeFrame(dist[order[k]], plane.normal, world[order[k]], state));
  }
  return frames;
}

ContactFrame CircleRectangle(const Circle& circle, const BodyState& state_c,
                             const Rectangle& rect, const BodyState& state_r) {
  const Eigen::Matrix2d rot = Rotation(state_r.q.z());
  const Eigen::Vector2d local = rot.transpose() * (Center(state_c) - Center(state_r));
  const Eigen::Vector2d clamped(
      std::clamp(local.x(), -rect.half_width, rect.half_width),
      std::clamp(local.y(), -rect.half_height, rect.half_height));
  Eigen::Vector2d normal_local;
  double distance;
  if ((local - clamped).squaredNorm() > 0.0) {
    const Eigen::Vector2d diff = local - clamped;
    distance = diff.norm();
    normal_local = diff / distance;
  } else {
    // Centre inside the box: exit through the nearest face.
    const double dx = rect.half_width - std::abs(local.x());
    const double dy = rect.half_height - std::abs(local.y());
    if (dx < dy) {
      normal_local = Eigen::Vector2d(local.x() >= 0.0 ? 1.0 : -1.0, 0.0);
      distance = -dx;
    } else {
      normal_local = Eigen::Vector2d(0.0, local.y() >= 0.0 ? 1.0 : -1.0);
      distance = -dy;
    }
  }
  const Eigen::Vector2d normal = rot * normal_local;
  return MakeFrame(distance - circle.radius, normal,
                   Center(state_c) - circle.radius * normal, state_c);
}

ContactFrame CircleCircle(const Circle& a, const BodyState& state_a,
                          const Circle& b, const BodyState& state_b) {
  const Eigen::Vector2d diff = Center(state_a) - Center(state_b);
  const double distance = diff.norm();
  const Eigen::Vector2d normal =
      distance > 0.0 ? Eigen::Vector2d(diff / distance) : Eigen::Vector2d::UnitY();
  return MakeFrame(distance - a.radius - b.radius, normal,
                   Center(state_a) - a.radius * normal, state_a);
}

// Frames computed as (b, a), re-expressed as (a, b).
std::vector<ContactFrame> Swap(std::vector<ContactFrame> frames,
                               const BodyState& state_a) {
  for (ContactFrame& f : frames) {
    const Eigen::Vector2d point_on_a = f.point_on_b();
    f = MakeFrame(f.gap, -f.normal, point_on_a, state_a);
  }
  return frames;
}

}  // namespace

void ValidateShape(const Shape& shape) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          if (!(s.radius > 0.0)) throw std::invalid_argument("Circle: radius must be > 0");
        } else if constexpr (std::is_same_v<T, Rectangle>) {
          if (!(s.half_width > 0.0) || !(s.half_height > 0.0)) {
            throw std::invalid_argument("Rectangle: half extents must be > 0");
          }
        } else {
          if (std::abs(s.normal.norm() - 1.0) > 1e-12) {
            throw std::invalid_argument("HalfPlane: normal must be unit length");
          }
        }
      },
      shape);
}

HalfPlane Ground() { return HalfPlane{Eigen::Vector2d::UnitY(), 0.0}; }

Eigen::Vector2d TangentOf(const Eigen::Vector2d& normal) {
  return Eigen::Vector2d(normal.y(), -normal.x());
}

std::vector<ContactFrame> GapAndFrame(const Shape& shape_a,
                                      const BodyState& state_a,
                                      const Shape& shape_b,
                                      const BodyState& state_b) {
  ValidateShape(shape_a);
  ValidateShape(shape_b);
  if (const auto* ca = std::get_if<Circle>(&shape_a)) {
    if (const auto* pb = std::get_if<HalfPlane>(&shape_b)) {
      return {CircleHalfPlane(*ca, state_a, *pb)};
    }
    if (const auto* rb = std::get_if<Rectangle>(&shape_b)) {
      return {CircleRectangle(*ca, state_a, *rb, state_b)};
    }
    return {CircleCircle(*ca, state_a, std::get<Circle>(shape_b), state_b)};
  }
  if (const auto* ra = std::get_if<Rectangle>(&shape_a)) {
    if (const auto* pb = std::get_if<HalfPlane>(&shape_b)) {
      return RectangleHalfPlane(*ra, state_a, *pb);
    }
    if (std::holds_alternative<Circle>(shape_b)) {
      return Swap(GapAndFrame(shape_b, state_b, shape_a, state_a), state_a);
    }
    throw UnsupportedPair("GapAndFrame: Rectangle-Rectangle is not supported");
  }
  if (std::holds_alternative<HalfPlane>(shape_b)) {
    throw UnsupportedPair("GapAndFrame: HalfPlane-HalfPlane is not supported");
  }
  return Swap(GapAndFrame(shape_b, state_b, shape_a, state_a), state_a);
}

Eigen::Matrix<double, 2, 3> PointJacobian(const Eigen::Vector2d& point,
                                          const Eigen::Vector2d& normal,
                                          const BodyState& state) {
  const Eigen::Vector2d arm = point - Center(state);
  const Eigen::Vector2d arm_perp(-arm.y(), arm.x());
  const Eigen::Vector2d t = TangentOf(normal);
  Eigen::Matrix<double, 2, 3> jacobian;
  jacobian << normal.x(), normal.y(), normal.dot(arm_perp),
      t.x(), t.y(), t.dot(arm_perp);
  return jacobian;
}

Eigen::Matrix<double, 2, 3> ContactJacobian(const ContactFrame& frame,
                                            const BodyState& state) {
  return PointJacobian(frame.point, frame.normal, state);
}

std::vector<ContactFrame> CheckCollision(std::span<const ContactFrame> frames,
                                         double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("CheckCollision: threshold must be >= 0");
  std::vector<ContactFrame> active;
  for (const ContactFrame& f : frames) {
    if (f.gap <= threshold) active.push_back(f);
  }
  return active;
}

}  // namespace contactsim
