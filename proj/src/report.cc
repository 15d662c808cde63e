#include "contactsim/report.h"

#include <cmath>
#include <fmt/format.h>
#include <future>
#include <ostream>

namespace contactsim {

namespace {

// Shortest decimal text that round-trips the double.
std::string Full(double x) { return fmt::format("{}", x); }

}  // namespace

void WriteTrajectoryCsv(const TrajectoryLog& log, std::ostream& out) {
  out << kTrajectoryHeader << '\n';
  for (const LogRow& row : log.rows) {
    for (std::size_t b = 0; b < row.bodies.size(); ++b) {
      const BodySample& s = row.bodies[b];
      out << Full(row.t) << ',' << log.names[b] << ',' << Full(s.state.q.x()) << ','
          << Full(s.state.q.y()) << ',' << Full(s.state.q.z()) << ','
          << Full(s.state.v.x()) << ',' << Full(s.state.v.y()) << ','
          << Full(s.state.v.z()) << ',' << s.contacts << '\n';
    }
  }
}

std::vector<double> SweepTorques(const RunConfig& config) {
  std::vector<double> torques;
  const double span = config.sweep_end - config.sweep_start;
  const int count = static_cast<int>(std::floor(span / config.sweep_step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) torques.push_back(config.sweep_start + i * config.sweep_step);
  return torques;
}

std::vector<SweepRow> RunSweep(const RunConfig& config) {
  std::vector<std::future<SweepRow>> jobs;
  for (double torque : SweepTorques(config)) {
    jobs.push_back(std::async(std::launch::async, [&config, torque] {
      SweepRow row;
      row.torque = torque;
      const TrajectoryLog log = Run(BuildScenario(config, torque));
      try {
        row.velocity = MeasurePostKickVelocity(log);
      } catch (const NoKickDetected& e) {
        row.error = e.what();
      }
      return row;
    }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(jobs.size());
  for (auto& job : jobs) rows.push_back(job.get());
  return rows;
}

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kSweepHeader << '\n';
  for (const SweepRow& row : rows) {
    out << Full(row.torque) << ',';
    if (row.velocity) out << Full(row.velocity->vx) << ',' << Full(row.velocity->vy);
    else out << ',';
    out << '\n';
  }
}

std::optional<ReferenceVelocity> ReferenceKick(double torque) {
  static constexpr struct {
    double tau, vx, vy;
  } kTable[] = {{30, 7.29, 1.78},  {40, 9.71, 2.38},  {50, 12.14, 2.97},
                {60, 14.57, 3.57}, {70, 17.00, 4.16}, {80, 19.43, 4.75},
                {90, 21.86, 5.35}, {100, 24.28, 5.94}};
  for (const auto& r : kTable) {
    if (std::abs(r.tau - torque) < 1e-9) return ReferenceVelocity{r.vx, r.vy};
  }
  return std::nullopt;
}

void PrintSweepTable(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << fmt::format("{:>8} {:>10} {:>10} {:>8} {:>12} {:>9} {:>9}\n", "tau_Nm", "vx_ms",
                     "vy_ms", "vy/vx", "vx*30/tau", "dvx_ref", "dvy_ref");
  for (const SweepRow& row : rows) {
    if (!row.velocity) {
      out << fmt::format("{:>8.1f} {:>10} {:>10}   ({})\n", row.torque, "-", "-", row.error);
      continue;
    }
    const KickVelocity& v = *row.velocity;
    std::string dvx = "-";
    std::string dvy = "-";
    if (const auto ref = ReferenceKick(row.torque)) {
      dvx = fmt::format("{:+.1f}%", 100.0 * (v.vx - ref->vx) / ref->vx);
      dvy = fmt::format("{:+.1f}%", 100.0 * (v.vy - ref->vy) / ref->vy);
    }
    const double normalized = row.torque > 0.0 ? v.vx * 30.0 / row.torque : 0.0;
    out << fmt::format("{:>8.1f} {:>10.4f} {:>10.4f} {:>8.4f} {:>12.4f} {:>9} {:>9}\n",
                       row.torque, v.vx, v.vy, v.vy / v.vx, normalized, dvx, dvy);
  }
}

DropReport AnalyzeDrop(const TrajectoryLog& log, double radius) {
  DropReport report;
  if (log.rows.empty()) return report;
  report.drop_height = log.rows.front().bodies[0].state.q.y() - radius;
  std::size_t first_contact = log.rows.size();
  for (std::size_t r = 1; r < log.rows.size(); ++r) {
    if (log.rows[r].bodies[0].contacts > 0) {
      first_contact = r;
      break;
    }
  }
  if (first_contact == log.rows.size()) return report;
  report.bounced = true;
  report.impact_speed = -log.rows[first_contact - 1].bodies[0].state.v.y();
  report.rebound_speed = log.rows[first_contact].bodies[0].state.v.y();
  for (std::size_t r = first_contact + 1; r + 1 < log.rows.size(); ++r) {
    const double y = log.rows[r].bodies[0].state.q.y();
    if (y >= log.rows[r - 1].bodies[0].state.q.y() && y > log.rows[r + 1].bodies[0].state.q.y()) {
      report.apex_height = y - radius;
      break;
    }
  }
  return report;
}

}  // namespace contactsim
