#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "contactsim/biped.h"
#include "contactsim/collision.h"
#include "contactsim/contact.h"
#include "contactsim/dynamics.h"

namespace contactsim {

struct FreeBody {
  std::string name;
  Shape shape;
  InertialProps props;
  BodyState state;
  MaterialParams ground_material;
};

/// Hip reference during walking, restarted at every heel strike:
/// theta_2(t) = -A cos(2 pi f t) for t < 1 / (2 f), then held at +A.
struct GaitScript {
  double step_angle = 0.5;  // A, inter-leg angle at heel strike
  double frequency = 1.0;   // f

  JointReference At(double time_since_strike) const;
};

struct BipedSetup {
  BipedModel model;
  JointState joints;  // in model.convention
  ControllerGains gains;
  GaitScript gait;
  double stance_x = 0.0;
  MaterialParams foot_ground{0.8, 0.0};
};

/// Kick script: once the swing foot comes within `trigger_distance`
/// (horizontally) of the target body, the stance is planted, the swing leg
/// is drawn back to `windup_angle`, then driven by the kick torque for
/// `pulse_duration` and left to coast into the target.
struct KickSetup {
  double torque = 30.0;
  double trigger_distance = 0.3;
  double pulse_duration = 0.03;
  double windup_angle = -0.35;  // absolute swing-leg angle, rad
  double windup_time = 1.0;
  int target_body = 0;
  MaterialParams foot_ball{0.1, 0.7};
};

struct Scenario {
  std::vector<FreeBody> bodies;
  std::optional<BipedSetup> biped;
  std::optional<KickSetup> kick;
  double dt = kDefaultTimeStep;
  double horizon = 1.0;
  double gravity = kDefaultGravity;
  double contact_threshold = kDefaultContactThreshold;
  // Once the kicked body is further than this from the origin the run ends.
  double arena_width = std::numeric_limits<double>::infinity();
  PositionUpdate position_update = PositionUpdate::kSemiImplicit;

  void Validate() const;
  int StepCount() const;
};

enum class Branch : std::uint8_t { kFree, kContact };

enum class BipedPhase : std::uint8_t { kNone, kWalk, kWindup, kStrike, kCoast, kFollowThrough };

std::string_view ToString(BipedPhase phase);

struct BodySample {
  BodyState state;
  int contacts = 0;
  Branch branch = Branch::kFree;
  double normal_impulse = 0.0;
};

struct LogRow {
  int step = 0;
  double t = 0.0;
  // Free bodies in scenario order, then the two feet when a biped exists.
  std::vector<BodySample> bodies;
  std::optional<JointState> joints;  // model convention
  double torque = 0.0;
  BipedPhase phase = BipedPhase::kNone;
  // Foot-on-kick-target normal impulse delivered during this step.
  double kick_impulse = 0.0;
};

struct TrajectoryLog {
  std::vector<std::string> names;
  int free_bodies = 0;
  int kick_body = -1;
  std::vector<LogRow> rows;
};

/// A contact solve failed mid-run.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, int step, std::vector<std::string> bodies)
      : std::runtime_error(what), step_(step), bodies_(std::move(bodies)) {}
  int step() const { return step_; }
  const std::vector<std::string>& bodies() const { return bodies_; }

 private:
  int step_;
  std::vector<std::string> bodies_;
};

class NoKickDetected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time-stepping loop: per step, detect contacts, resolve the contacting
/// bodies through one LCP, step the rest freely, advance the biped.
class Simulator {
 public:
  explicit Simulator(Scenario scenario);

  void Step();
  LogRow Snapshot() const;

  int step_index() const { return step_; }
  double time() const { return step_ * scenario_.dt; }
  const Scenario& scenario() const { return scenario_; }
  const std::vector<FreeBody>& bodies() const { return scenario_.bodies; }
  BipedPhase phase() const { return phase_; }
  bool kick_finished() const { return kick_finished_; }
  /// Joint state in relative coordinates.
  const JointState& relative_joints() const { return joints_; }
  BipedPose pose() const;
  BodyState foot_state(int leg) const;

 private:
  struct Candidate;

  void UpdatePhase();
  double ControlTorque(const Eigen::MatrixXd& mass, const Eigen::VectorXd& bias);
  void HeelStrike();
  int BipedDofs() const;
  Eigen::MatrixXd BipedMass() const;
  Eigen::VectorXd BipedBias() const;
  Eigen::MatrixXd SwingFootJacobian() const;

  Scenario scenario_;
  BipedModel relative_model_;
  int step_ = 0;

  JointState joints_;  // relative coordinates
  Eigen::Vector2d stance_ankle_ = Eigen::Vector2d::Zero();
  int stance_leg_ = 0;
  double step_start_ = 0.0;
  bool armed_ = false;
  BipedPhase phase_ = BipedPhase::kNone;
  double phase_start_ = 0.0;
  double hold_angle_ = 0.0;
  bool kick_contact_seen_ = false;
  bool kick_finished_ = false;

  // Per-step records for the log.
  std::vector<BodySample> samples_;
  double last_torque_ = 0.0;
  double last_kick_impulse_ = 0.0;
};

/// Runs ceil(horizon / dt) steps, or stops early once the kicked body leaves
/// the arena. The first row is the initial state.
TrajectoryLog Run(const Scenario& scenario);

struct KickVelocity {
  double vx = 0.0;
  double vy = 0.0;
  int row = -1;
};

/// Velocity of the kicked body right after the last step with a nonzero
/// foot impulse on it. Throws NoKickDetected otherwise.
KickVelocity MeasurePostKickVelocity(const TrajectoryLog& log);

}  // namespace contactsim
