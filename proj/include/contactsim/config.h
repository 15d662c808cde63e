#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "contactsim/sim.h"

namespace contactsim {

/// Parse or validation failure. `line` is 0 when the problem is not tied to
/// a single line (a missing key, a cross-field check).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Everything a run needs. Field defaults are the documented defaults; the
/// config key for each field is given in the trailing comment.
struct RunConfig {
  double dt = kDefaultTimeStep;          // dt (required)
  double horizon = 5.0;                  // horizon
  double gravity = kDefaultGravity;      // gravity
  double contact_threshold = kDefaultContactThreshold;  // contact.threshold
  double arena_width = 50.0;             // arena.width
  bool strict_paper = false;             // strict_paper

  double ball_mass = 0.04;               // ball.mass
  double ball_radius = 0.2;              // ball.radius
  double ball_mu = 0.2;                  // ball.mu
  double ball_restitution = 0.5;         // ball.restitution
  double ball_x = 0.0;                   // ball.x
  double ball_y = 0.2;                   // ball.y
  double ball_vx = 0.0;                  // ball.vx
  double ball_vy = 0.0;                  // ball.vy
  double ball_omega = 0.0;               // ball.omega

  bool biped_enabled = false;            // biped.enabled
  double leg_mass = 0.5;                 // biped.m_l
  double torso_mass = 1.0;               // biped.m_t
  double leg_length = 1.0;               // biped.l
  std::optional<double> leg_centroid;    // biped.c, default l / 2
  std::optional<double> leg_inertia;     // biped.I, default m_l l^2 / 12
  double kp = 100.0;                     // biped.kp
  double kd = 20.0;                      // biped.kd
  double theta1 = 0.25;                  // biped.theta1
  double theta2 = -0.5;                  // biped.theta2
  double dtheta1 = -1.2;                 // biped.dtheta1
  double dtheta2 = 0.0;                  // biped.dtheta2
  double stance_x = 0.0;                 // biped.stance_x
  AngleConvention convention = AngleConvention::kRelative;  // biped.angle_convention

  double foot_width = 0.2;               // foot.width
  double foot_height = 0.04;             // foot.height
  double foot_mu = 0.8;                  // foot.mu
  double foot_restitution = 0.0;         // foot.restitution

  double step_angle = 0.5;               // gait.step_angle
  double gait_frequency = 1.0;           // gait.frequency

  bool kick_enabled = false;             // kick.enabled
  double kick_torque = 30.0;             // kick.torque
  double trigger_distance = 0.3;         // kick.trigger_distance
  double pulse_duration = 0.03;          // kick.duration
  double windup_angle = -0.35;           // kick.windup_angle
  double windup_time = 1.0;              // kick.windup_time
  double kick_mu = 0.1;                  // kick.mu
  double kick_restitution = 0.7;         // kick.restitution

  double sweep_start = 30.0;             // sweep.start
  double sweep_end = 100.0;              // sweep.end
  double sweep_step = 10.0;              // sweep.step

  std::filesystem::path output_dir = ".";  // output.dir

  /// Cross-field checks; throws ConfigError.
  void Validate(const std::string& source = "config") const;
};

RunConfig ParseConfig(std::istream& in, const std::string& source = "config");
RunConfig LoadConfig(const std::filesystem::path& path);

/// Scenario for this config, optionally with a different kick torque.
Scenario BuildScenario(const RunConfig& config,
                       std::optional<double> kick_torque = std::nullopt);

}  // namespace contactsim
