#pragma once

#include <Eigen/Dense>

namespace contactsim {

/// SE(2) configuration q = (x, y, theta) and velocity v = (xdot, ydot, omega).
/// Angles are counter-clockwise positive.
struct BodyState {
  Eigen::Vector3d q = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();

  bool IsFinite() const { return q.allFinite() && v.allFinite(); }
};

struct InertialProps {
  double mass = 1.0;
  double rot_inertia = 1.0;

  void Validate() const;
  /// diag(mass, mass, rot_inertia)
  Eigen::Matrix3d MassMatrix() const;
  Eigen::Matrix3d InverseMassMatrix() const;

  /// Uniform disc about its centre.
  static InertialProps Disc(double mass, double radius);
};

enum class PositionUpdate {
  // q+ = q + dt * v+.
  kSemiImplicit,
  // q+ = q + dt * v, the literal zero-order-hold recurrence.
  kExplicit,
};

constexpr double kDefaultGravity = 9.81;
constexpr double kDefaultTimeStep = 1e-3;

/// k + f_e for a free planar body: gravity on y plus the external wrench.
Eigen::Vector3d GeneralizedForces(const BodyState& state,
                                  const InertialProps& props, double gravity,
                                  const Eigen::Vector3d& external =
                                      Eigen::Vector3d::Zero());

/// v+ = v + dt M^-1 forces, then the position update selected by `mode`.
BodyState StepFree(const BodyState& state, const InertialProps& props,
                   const Eigen::Vector3d& forces, double dt,
                   PositionUpdate mode = PositionUpdate::kSemiImplicit);

/// Position update shared by free and contact steps.
Eigen::Vector3d IntegratePosition(const Eigen::Vector3d& q,
                                  const Eigen::Vector3d& v_old,
                                  const Eigen::Vector3d& v_new, double dt,
                                  PositionUpdate mode);

double KineticEnergy(const BodyState& state, const InertialProps& props);

}  // namespace contactsim
