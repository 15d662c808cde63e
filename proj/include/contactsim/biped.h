#pragma once

#include <Eigen/Dense>

#include <stdexcept>

#include "contactsim/collision.h"

namespace contactsim {

/// How the second joint coordinate is measured.
///
/// kRelative: theta_2 is the hip joint angle (swing leg relative to stance
/// leg), so the inter-leg angle is theta_2 and the hip torque acts on
/// theta_2 alone, B = (0, 1).
///
/// kAbsolute: theta_2 is the swing leg angle from the downward vertical, so
/// the inter-leg angle is theta_2 - theta_1 and B = (-1, 1).
enum class AngleConvention { kRelative, kAbsolute };

/// Planar compass-gait walker: two identical legs hinged at a hip point mass.
/// Leg angles are measured forward (towards +x) from the downward vertical;
/// theta_1 is the stance leg, pivoting about its ankle.
struct BipedModel {
  double leg_mass = 0.5;       // m_l
  double torso_mass = 1.0;     // m_t, lumped at the hip
  double leg_length = 1.0;     // l, hip to ankle
  double leg_centroid = 0.5;   // c, measured from the hip
  double leg_inertia = 0.5 / 12.0;  // I, about the leg centroid
  Rectangle foot{0.1, 0.02};
  AngleConvention convention = AngleConvention::kRelative;

  void Validate() const;
  double total_mass() const { return 2.0 * leg_mass + torso_mass; }

  /// Defaults for a given leg: c = l / 2, I = m_l l^2 / 12.
  static BipedModel WithDefaults(double leg_mass, double torso_mass,
                                 double leg_length);
};

struct JointState {
  Eigen::Vector2d theta = Eigen::Vector2d::Zero();
  Eigen::Vector2d theta_dot = Eigen::Vector2d::Zero();
};

struct ControllerGains {
  double kp = 100.0;
  double kd = 20.0;

  void Validate() const;
};

/// Reference for the actuated coordinate.
struct JointReference {
  double angle = 0.0;
  double rate = 0.0;
  double accel = 0.0;
};

class SingularDecoupling : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// [[M11, M12, 0], [M21, M22, 0], [0, 0, I]] evaluated at the given
/// inter-leg angle. The upper-left block is the joint-space inertia in the
/// relative convention; the last row is the floating orientation used only
/// in flight.
Eigen::Matrix3d MassMatrix(const BipedModel& model, double inter_leg_angle);

double InterLegAngle(const BipedModel& model, const JointState& joints);

/// Converts between the model's convention and relative coordinates.
JointState ToRelative(const BipedModel& model, const JointState& joints);
JointState FromRelative(const BipedModel& model, const JointState& relative);

/// Joint-space inertia, bias N (Coriolis + gravity) and actuation B, all in
/// the model's convention.
Eigen::Matrix2d JointMassMatrix(const BipedModel& model, const JointState& joints);
Eigen::Vector2d BiasForces(const BipedModel& model, const JointState& joints,
                           double gravity);
Eigen::Vector2d ActuationVector(const BipedModel& model);

/// Selection of the actuated coordinate, S_c = [0 1].
inline Eigen::RowVector2d ActuatedSelection() { return {0.0, 1.0}; }

/// PD law on the actuated coordinate:
/// accel_ref - kp (theta_c - angle_ref) - kd (theta_dot_c - rate_ref).
double CommandedAcceleration(double angle, double rate,
                             const ControllerGains& gains,
                             const JointReference& ref);

/// u = (S M^-1 B)^-1 (commanded + S M^-1 N) for any square system.
double PflTorque(const Eigen::MatrixXd& mass, const Eigen::VectorXd& bias,
                 const Eigen::VectorXd& actuation,
                 const Eigen::RowVectorXd& selection, double commanded_accel);

/// Biped form: `mass` is MassMatrix() (relative block), `bias` is in the
/// model's convention, the PD command acts on theta_2.
double PflTorque(const BipedModel& model, const JointState& joints,
                 const Eigen::Matrix3d& mass, const Eigen::Vector2d& bias,
                 const ControllerGains& gains, const JointReference& ref);

/// theta_ddot = M^-1 (B u - N).
Eigen::Vector2d BipedAccel(const BipedModel& model, const JointState& joints,
                           double u, double gravity);

/// tau = F * l.
double KickTorque(double force, const BipedModel& model);

/// Kinetic plus potential energy, potential measured from the stance ankle.
double TotalEnergy(const BipedModel& model, const JointState& joints,
                   double gravity);

/// Point positions for a stance ankle at `stance_ankle`.
struct BipedPose {
  Eigen::Vector2d stance_ankle;
  Eigen::Vector2d hip;
  Eigen::Vector2d swing_ankle;
};
BipedPose ForwardKinematics(const BipedModel& model, const JointState& joints,
                            const Eigen::Vector2d& stance_ankle);

/// d(swing ankle)/d(theta) in relative coordinates, 2x2.
Eigen::Matrix2d SwingAnkleJacobian(const BipedModel& model,
                                   const JointState& relative);

/// Feet stay level; the ankle sits at the centre of the top face.
BodyState FootState(const BipedModel& model, const Eigen::Vector2d& ankle,
                    const Eigen::Vector2d& ankle_velocity);

}  // namespace contactsim
