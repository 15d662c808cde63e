#include "contactsim/dynamics.h"

#include <stdexcept>

namespace contactsim {

void InertialProps::Validate() const {
  if (!(mass > 0.0) || !(rot_inertia > 0.0)) {
    throw std::invalid_argument("InertialProps: mass and inertia must be > 0");
  }
}

Eigen::Matrix3d InertialProps::MassMatrix() const {
  return Eigen::Vector3d(mass, mass, rot_inertia).asDiagonal();
}

Eigen::Matrix3d InertialProps::InverseMassMatrix() const {
  return Eigen::Vector3d(1.0 / mass, 1.0 / mass, 1.0 / rot_inertia).asDiagonal();
}

InertialProps InertialProps::Disc(double mass, double radius) {
  return {mass, 0.5 * mass * radius * radius};
}

Eigen::Vector3d GeneralizedForces(const BodyState& /*state*/,
                                  const InertialProps& props, double gravity,
                                  const Eigen::Vector3d& external) {
  props.Validate();
  // A single planar body with diagonal M has no velocity-product terms.
  return Eigen::Vector3d(0.0, -props.mass * gravity, 0.0) + external;
}

Eigen::Vector3d IntegratePosition(const Eigen::Vector3d& q,
                                  const Eigen::Vector3d& v_old,
                                  const Eigen::Vector3d& v_new, double dt,
                                  PositionUpdate mode) {
  return q + dt * (mode == PositionUpdate::kSemiImplicit ? v_new : v_old);
}

BodyState StepFree(const BodyState& state, const InertialProps& props,
                   const Eigen::Vector3d& forces, double dt,
                   PositionUpdate mode) {
  if (!(dt > 0.0)) throw std::invalid_argument("StepFree: dt must be > 0");
  BodyState next;
  next.v = state.v + dt * props.InverseMassMatrix() * forces;
  next.q = IntegratePosition(state.q, state.v, next.v, dt, mode);
  return next;
}

double KineticEnergy(const BodyState& state, const InertialProps& props) {
  return 0.5 * state.v.dot(props.MassMatrix() * state.v);
}

}  // namespace contactsim
