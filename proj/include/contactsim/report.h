#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "contactsim/config.h"
#include "contactsim/sim.h"

namespace contactsim {

inline constexpr const char* kTrajectoryHeader = "t,body,x,y,theta,vx,vy,omega,contacts";
inline constexpr const char* kSweepHeader = "tau_Nm,vx_ms,vy_ms";

/// One row per body per logged step.
void WriteTrajectoryCsv(const TrajectoryLog& log, std::ostream& out);

struct SweepRow {
  double torque = 0.0;
  std::optional<KickVelocity> velocity;  // empty when no kick was detected
  std::string error;
};

/// Torques start, start + step, ... up to end (inclusive, with a small
/// tolerance for accumulated rounding).
std::vector<double> SweepTorques(const RunConfig& config);

/// Runs every sweep entry as an independent scenario, concurrently. Rows come
/// back in torque order. Solver failures propagate as SimulationError.
std::vector<SweepRow> RunSweep(const RunConfig& config);

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out);

/// Published reference velocities, or nullopt for torques not in the table.
struct ReferenceVelocity {
  double vx;
  double vy;
};
std::optional<ReferenceVelocity> ReferenceKick(double torque);

/// Human-readable table: measured velocities, tau-normalized vx, and the
/// relative deviation from the reference row where one exists.
void PrintSweepTable(const std::vector<SweepRow>& rows, std::ostream& out);

/// Rebound summary for a ball dropped onto the ground.
struct DropReport {
  double drop_height = 0.0;     // lowest point of the ball above the ground at start
  double impact_speed = 0.0;    // normal speed just before the first contact
  double rebound_speed = 0.0;   // normal speed just after it
  double apex_height = 0.0;     // first local max of the gap after the bounce
  bool bounced = false;
};
DropReport AnalyzeDrop(const TrajectoryLog& log, double radius);

}  // namespace contactsim
