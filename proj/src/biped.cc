#include "contactsim/biped.h"

#include <cmath>

namespace contactsim {

namespace {

// q_rel = T q_abs for the absolute convention.
Eigen::Matrix2d AbsoluteToRelative() {
  Eigen::Matrix2d t;
  t << 1.0, 0.0, -1.0, 1.0;
  return t;
}

Eigen::Matrix2d RelativeMass(const BipedModel& model, const JointState& rel) {
  return MassMatrix(model, rel.theta.y()).topLeftCorner<2, 2>();
}

Eigen::Vector2d RelativeBias(const BipedModel& model, const JointState& rel,
                             double gravity) {
  const double ml = model.leg_mass;
  const double mt = model.torso_mass;
  const double l = model.leg_length;
  const double c = model.leg_centroid;
  const double th1 = rel.theta.x();
  const double th2 = rel.theta.y();
  const double w1 = rel.theta_dot.x();
  const double w2 = rel.theta_dot.y();
  const double swing = th1 + th2;

  // Only M11 and M12 depend on theta_2: dM11 = 2h, dM12 = h.
  const double h = ml * l * c * std::sin(th2);
  const Eigen::Vector2d coriolis(2.0 * h * w1 * w2 + h * w2 * w2, -h * w1 * w1);
  const Eigen::Vector2d grav(
      -gravity * std::sin(th1) * (ml * (2.0 * l - c) + mt * l) +
          gravity * ml * c * std::sin(swing),
      gravity * ml * c * std::sin(swing));
  return coriolis + grav;
}

}  // namespace

void BipedModel::Validate() const {
  if (!(leg_mass > 0.0) || !(torso_mass > 0.0) || !(leg_length > 0.0) ||
      !(leg_inertia > 0.0)) {
    throw std::invalid_argument("BipedModel: masses, lengths and inertia must be > 0");
  }
  if (!(leg_centroid > 0.0 && leg_centroid < leg_length)) {
    throw std::invalid_argument("BipedModel: centroid must lie strictly inside the leg");
  }
  ValidateShape(foot);
}

BipedModel BipedModel::WithDefaults(double leg_mass, double torso_mass,
                                    double leg_length) {
  BipedModel model;
  model.leg_mass = leg_mass;
  model.torso_mass = torso_mass;
  model.leg_length = leg_length;
  model.leg_centroid = 0.5 * leg_length;
  model.leg_inertia = leg_mass * leg_length * leg_length / 12.0;
  return model;
}

void ControllerGains::Validate() const {
  if (!(kp > 0.0) || !(kd > 0.0)) {
    throw std::invalid_argument("ControllerGains: kp and kd must be > 0");
  }
}

Eigen::Matrix3d MassMatrix(const BipedModel& model, double inter_leg_angle) {
  const double i = model.leg_inertia;
  const double ml = model.leg_mass;
  const double l = model.leg_length;
  const double c = model.leg_centroid;
  const double cos_th = std::cos(inter_leg_angle);
  const double m11 = 2.0 * (i + ml * (c * c + l * l - c * l - c * l * cos_th)) +
                     model.torso_mass * l * l;
  const double m12 = i + ml * (c * c - c * l * cos_th);
  const double m22 = i + c * c * ml;
  Eigen::Matrix3d m;
  m << m11, m12, 0.0,
       m12, m22, 0.0,
       0.0, 0.0, i;
  return m;
}

double InterLegAngle(const BipedModel& model, const JointState& joints) {
  return model.convention == AngleConvention::kRelative
             ? joints.theta.y()
             : joints.theta.y() - joints.theta.x();
}

JointState ToRelative(const BipedModel& model, const JointState& joints) {
  if (model.convention == AngleConvention::kRelative) return joints;
  const Eigen::Matrix2d t = AbsoluteToRelative();
  return {t * joints.theta, t * joints.theta_dot};
}

JointState FromRelative(const BipedModel& model, const JointState& relative) {
  if (model.convention == AngleConvention::kRelative) return relative;
  const Eigen::Matrix2d t_inv = AbsoluteToRelative().inverse();
  return {t_inv * relative.theta, t_inv * relative.theta_dot};
}

Eigen::Matrix2d JointMassMatrix(const BipedModel& model, const JointState& joints) {
  const Eigen::Matrix2d m = RelativeMass(model, ToRelative(model, joints));
  if (model.convention == AngleConvention::kRelative) return m;
  const Eigen::Matrix2d t = AbsoluteToRelative();
  return t.transpose() * m * t;
}

Eigen::Vector2d BiasForces(const BipedModel& model, const JointState& joints,
                           double gravity) {
  const Eigen::Vector2d n = RelativeBias(model, ToRelative(model, joints), gravity);
  if (model.convention == AngleConvention::kRelative) return n;
  return AbsoluteToRelative().transpose() * n;
}

Eigen::Vector2d ActuationVector(const BipedModel& model) {
  const Eigen::Vector2d b(0.0, 1.0);
  if (model.convention == AngleConvention::kRelative) return b;
  return AbsoluteToRelative().transpose() * b;
}

double CommandedAcceleration(double angle, double rate,
                             const ControllerGains& gains,
                             const JointReference& ref) {
  return ref.accel - gains.kp * (angle - ref.angle) - gains.kd * (rate - ref.rate);
}

double PflTorque(const Eigen::MatrixXd& mass, const Eigen::VectorXd& bias,
                 const Eigen::VectorXd& actuation,
                 const Eigen::RowVectorXd& selection, double commanded_accel) {
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(mass);
  const double decoupling = selection * lu.solve(actuation);
  if (std::abs(decoupling) < 1e-10) {
    throw SingularDecoupling("PflTorque: S M^-1 B is singular");
  }
  const double drift = selection * lu.solve(bias);
  return (commanded_accel + drift) / decoupling;
}

double PflTorque(const BipedModel& model, const JointState& joints,
                 const Eigen::Matrix3d& mass, const Eigen::Vector2d& bias,
                 const ControllerGains& gains, const JointReference& ref) {
  const Eigen::RowVector2d s = ActuatedSelection();
  const double commanded =
      CommandedAcceleration(s * joints.theta, s * joints.theta_dot, gains, ref);
  // The mass block is in relative coordinates; bias and actuation follow the model.
  Eigen::Matrix2d m = mass.topLeftCorner<2, 2>();
  if (model.convention == AngleConvention::kAbsolute) {
    const Eigen::Matrix2d t = AbsoluteToRelative();
    m = t.transpose() * m * t;
  }
  return PflTorque(Eigen::MatrixXd(m), Eigen::VectorXd(bias), Eigen::VectorXd(ActuationVector(model)),
                   Eigen::RowVectorXd(s), commanded);
}

Eigen::Vector2d BipedAccel(const BipedModel& model, const JointState& joints,
                           double u, double gravity) {
  const Eigen::Matrix2d m = JointMassMatrix(model, joints);
  if (std::abs(m.determinant()) < 1e-12 * m.squaredNorm()) {
    throw SingularMass("BipedAccel: joint mass matrix lost rank");
  }
  return m.ldlt().solve(ActuationVector(model) * u - BiasForces(model, joints, gravity));
}

double KickTorque(double force, const BipedModel& model) {
  if (force < 0.0) throw std::invalid_argument("KickTorque: force must be >= 0");
  return force * model.leg_length;
}

double TotalEnergy(const BipedModel& model, const JointState& joints,
                   double gravity) {
  const JointState rel = ToRelative(model, joints);
  const double kinetic =
      0.5 * rel.theta_dot.dot(RelativeMass(model, rel) * rel.theta_dot);
  const double ml = model.leg_mass;
  const double l = model.leg_length;
  const double c = model.leg_centroid;
  const double swing = rel.theta.x() + rel.theta.y();
  const double potential =
      gravity * ((ml * (l - c) + model.torso_mass * l + ml * l) * std::cos(rel.theta.x()) -
                 ml * c * std::cos(swing));
  return kinetic + potential;
}

BipedPose ForwardKinematics(const BipedModel& model, const JointState& joints,
                            const Eigen::Vector2d& stance_ankle) {
  const JointState rel = ToRelative(model, joints);
  const double l = model.leg_length;
  const double th1 = rel.theta.x();
  const double swing = th1 + rel.theta.y();
  BipedPose pose;
  pose.stance_ankle = stance_ankle;
  pose.hip = stance_ankle + l * Eigen::Vector2d(-std::sin(th1), std::cos(th1));
  pose.swing_ankle = pose.hip + l * Eigen::Vector2d(std::sin(swing), -std::cos(swing));
  return pose;
}

Eigen::Matrix2d SwingAnkleJacobian(const BipedModel& model,
                                   const JointState& relative) {
  const double l = model.leg_length;
  const double th1 = relative.theta.x();
  const double swing = th1 + relative.theta.y();
  const Eigen::Vector2d d_swing = l * Eigen::Vector2d(std::cos(swing), std::sin(swing));
  Eigen::Matrix2d j;
  j.col(0) = l * Eigen::Vector2d(-std::cos(th1), -std::sin(th1)) + d_swing;
  j.col(1) = d_swing;
  return j;
}

BodyState FootState(const BipedModel& model, const Eigen::Vector2d& ankle,
                    const Eigen::Vector2d& ankle_velocity) {
  BodyState s;
  s.q << ankle.x(), ankle.y() - model.foot.half_height, 0.0;
  s.v << ankle_velocity.x(), ankle_velocity.y(), 0.0;
  return s;
}

}  // namespace contactsim
