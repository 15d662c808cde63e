#include <gtest/gtest.h>

#include <cmath>

#include "contactsim/config.h"
#include "contactsim/sim.h"

namespace contactsim {
namespace {

FreeBody Ball(double x, double y, double vx = 0.0, double vy = 0.0, MaterialParams m = {0.2, 0.5}) {
  FreeBody b{"ball", Circle{0.2}, InertialProps::Disc(0.04, 0.2), {}, m};
  b.state.q << x, y, 0.0;
  b.state.v << vx, vy, 0.0;
  return b;
}

Scenario Single(FreeBody body, double horizon, double dt = 1e-3) {
  Scenario s;
  s.bodies.push_back(std::move(body));
  s.horizon = horizon;
  s.dt = dt;
  return s;
}

// Lowest ground gap over every free body and the stance foot in every row.
double GroundFloor(const TrajectoryLog& log, const Scenario& s) {
  double floor = INFINITY;
  for (const LogRow& row : log.rows) {
    for (int b = 0; b < log.free_bodies; ++b) {
      const auto frames = GapAndFrame(s.bodies[b].shape, row.bodies[b].state, Ground(), {});
      floor = std::min(floor, frames.front().gap);
    }
  }
  return floor;
}

TEST(Scenario, Validation) {
  Scenario s = Single(Ball(0, 1), 1.0);
  EXPECT_NO_THROW(s.Validate());
  s.dt = 0.0;
  EXPECT_THROW(s.Validate(), std::invalid_argument);
  s = Single(Ball(0, 1), 1e-4);
  EXPECT_THROW(s.Validate(), std::invalid_argument);
  s = Single(Ball(0, 1), 1.0);
  s.kick = KickSetup{};
  EXPECT_THROW(s.Validate(), std::invalid_argument);
  s = Single(FreeBody{"box", Rectangle{0.1, 0.1}, {1, 1}, {}, {}}, 1.0);
  s.bodies.push_back(s.bodies[0]);
  EXPECT_THROW(s.Validate(), std::invalid_argument);
}

TEST(Run, RowCount) {
  const TrajectoryLog log = contactsim::Run(Single(Ball(0, 5), 0.01));
  ASSERT_EQ(log.rows.size(), 11u);
  for (std::size_t r = 0; r < log.rows.size(); ++r) {
    EXPECT_EQ(log.rows[r].step, static_cast<int>(r));
    EXPECT_NEAR(log.rows[r].t, r * 1e-3, 1e-15);
  }
}

TEST(Run, BallAtRestStaysAtRest) {
  const Scenario s = Single(Ball(0.3, 0.2), 1.0);
  const TrajectoryLog log = contactsim::Run(s);
  ASSERT_EQ(log.rows.size(), 1001u);
  for (const LogRow& row : log.rows) {
    EXPECT_LE((row.bodies[0].state.q - s.bodies[0].state.q).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE(row.bodies[0].state.v.cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Run, FreeFlightMatchesRecurrence) {
  const Scenario s = Single(Ball(0, 50, 1.5, 4.0), 1.0);
  const TrajectoryLog log = contactsim::Run(s);
  // Reference: v += dt g, q += dt v.
  double x = 0.0, y = 50.0, vx = 1.5, vy = 4.0;
  for (std::size_t r = 1; r < log.rows.size(); ++r) {
    vy -= s.dt * s.gravity;
    x += s.dt * vx;
    y += s.dt * vy;
    const BodyState& st = log.rows[r].bodies[0].state;
    ASSERT_NEAR(st.q.x(), x, 1e-12);
    ASSERT_NEAR(st.q.y(), y, 1e-12);
    ASSERT_NEAR(st.v.x(), vx, 1e-12);
    ASSERT_NEAR(st.v.y(), vy, 1e-12);
    ASSERT_EQ(log.rows[r].bodies[0].branch, Branch::kFree);
  }
}

TEST(Run, StrictModeIsTheExplicitRecurrence) {
  Scenario s = Single(Ball(0, 50, 0.0, 2.0), 0.1);
  s.position_update = PositionUpdate::kExplicit;
  const TrajectoryLog log = contactsim::Run(s);
  double y = 50.0, vy = 2.0;
  for (std::size_t r = 1; r < log.rows.size(); ++r) {
    y += s.dt * vy;
    vy -= s.dt * s.gravity;
    ASSERT_NEAR(log.rows[r].bodies[0].state.q.y(), y, 1e-12);
  }
}

TEST(Run, DropReboundApex) {
  const Scenario s = Single(Ball(0, 1.2, 0, 0, {0.0, 0.5}), 2.0);
  const TrajectoryLog log = contactsim::Run(s);
  bool bounced = false;
  double apex = -1.0;
  for (std::size_t r = 1; r + 1 < log.rows.size(); ++r) {
    const double y = log.rows[r].bodies[0].state.q.y();
    if (log.rows[r].bodies[0].contacts > 0) bounced = true;
    if (bounced && y >= log.rows[r - 1].bodies[0].state.q.y() &&
        y > log.rows[r + 1].bodies[0].state.q.y()) {
      apex = y - 0.2;
      break;
    }
  }
  EXPECT_GE(apex, 0.2375);
  EXPECT_LE(apex, 0.2625);
  EXPECT_GE(GroundFloor(log, s), -1e-3);
}

TEST(Run, BranchExclusivity) {
  const Scenario s = Single(Ball(0, 0.5, 1.0, 0, {0.3, 0.5}), 2.0);
  const TrajectoryLog log = contactsim::Run(s);
  int contact_rows = 0;
  for (std::size_t r = 1; r < log.rows.size(); ++r) {
    const BodySample& b = log.rows[r].bodies[0];
    EXPECT_EQ(b.branch == Branch::kContact, b.contacts > 0);
    contact_rows += b.contacts > 0;
  }
  EXPECT_GT(contact_rows, 0);
}

TEST(Run, SlidingDecelerationIsCoulomb) {
  const double mu = 0.3;
  const Scenario s = Single(Ball(0, 0.2, 2.0, 0.0, {mu, 0.0}), 1.0);
  const TrajectoryLog log = contactsim::Run(s);
  // Sliding while the contact point slips: vx + r omega > 0 with t = (1, 0).
  std::vector<double> vx;
  for (const LogRow& row : log.rows) {
    const BodyState& b = row.bodies[0].state;
    if (b.v.x() + 0.2 * b.v.z() < 1e-6) break;
    vx.push_back(b.v.x());
  }
  ASSERT_GT(vx.size(), 50u);
  const double decel = (vx.front() - vx.back()) / ((vx.size() - 1) * s.dt);
  EXPECT_NEAR(decel, mu * 9.81, 0.02 * mu * 9.81);
}

TEST(Run, TwoBallCollisionConservesMomentum) {
  Scenario s;
  s.gravity = 0.0;
  s.horizon = 0.5;
  s.bodies.push_back(Ball(0, 1.0, 2.0, 0.0, {0.0, 1.0}));
  FreeBody heavy = Ball(1.0, 1.0, 0.0, 0.0, {0.0, 1.0});
  heavy.name = "heavy";
  heavy.props = InertialProps::Disc(0.12, 0.2);
  s.bodies.push_back(heavy);
  const TrajectoryLog log = contactsim::Run(s);
  const auto& first = log.rows.front().bodies;
  const auto& last = log.rows.back().bodies;
  const double p0 = 0.04 * first[0].state.v.x() + 0.12 * first[1].state.v.x();
  const double p1 = 0.04 * last[0].state.v.x() + 0.12 * last[1].state.v.x();
  EXPECT_NEAR(p1, p0, 1e-12);
  EXPECT_NEAR(last[0].state.v.x(), -1.0, 1e-9);
  EXPECT_NEAR(last[1].state.v.x(), 1.0, 1e-9);
}

TEST(Run, BitIdenticalReruns) {
  Scenario s = Single(Ball(0, 1.0, 0.7, 0.0, {0.3, 0.6}), 1.5);
  const TrajectoryLog a = contactsim::Run(s);
  const TrajectoryLog b = contactsim::Run(s);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    EXPECT_EQ(a.rows[r].bodies[0].state.q, b.rows[r].bodies[0].state.q);
    EXPECT_EQ(a.rows[r].bodies[0].state.v, b.rows[r].bodies[0].state.v);
  }
}

Scenario Walker(double horizon) {
  Scenario s;
  s.horizon = horizon;
  s.bodies.push_back(Ball(50, 0.2));
  BipedSetup b;
  b.model = BipedModel::WithDefaults(0.5, 1.0, 1.0);
  b.joints.theta << 0.25, -0.5;
  b.joints.theta_dot << -1.2, 0.0;
  s.biped = b;
  return s;
}

TEST(Simulator, WalkerMakesProgressThroughHeelStrikes) {
  Simulator sim(Walker(5.0));
  int switches = 0;
  for (int k = 0; k < 5000; ++k) {
    const JointState before = sim.relative_joints();
    const Eigen::Vector2d stance_before = sim.pose().stance_ankle;
    const Eigen::Vector2d swing_before = sim.pose().swing_ankle;
    sim.Step();
    EXPECT_EQ(sim.pose().stance_ankle.y(), 0.04);
    if (sim.pose().stance_ankle != stance_before) {
      ++switches;
      // The old swing ankle becomes the stance ankle and the legs swap.
      EXPECT_NEAR(sim.pose().stance_ankle.x(), swing_before.x(), 1e-2);
      EXPECT_NEAR(sim.relative_joints().theta.y(), -before.theta.y(), 1e-2);
      EXPECT_GT(sim.pose().stance_ankle.x(), stance_before.x());
    }
    EXPECT_EQ(sim.phase(), BipedPhase::kWalk);
  }
  EXPECT_GE(switches, 3);
  EXPECT_GT(sim.pose().hip.x(), 1.5);
}

TEST(Simulator, HeelStrikeLosesEnergy) {
  Simulator sim(Walker(3.0));
  const BipedModel model = sim.scenario().biped->model;
  for (int k = 0; k < 3000; ++k) {
    const Eigen::Vector2d stance = sim.pose().stance_ankle;
    const double before = TotalEnergy(model, sim.relative_joints(), 9.81);
    const double torque_work_bound = 0.1;  // one step of hip torque
    sim.Step();
    if (sim.pose().stance_ankle != stance) {
      EXPECT_LT(TotalEnergy(model, sim.relative_joints(), 9.81), before + torque_work_bound);
    }
  }
}

TEST(MeasurePostKickVelocity, NoKickThrows) {
  const TrajectoryLog log = contactsim::Run(Walker(0.5));
  EXPECT_THROW(MeasurePostKickVelocity(log), NoKickDetected);
  EXPECT_THROW(MeasurePostKickVelocity(contactsim::Run(Single(Ball(0, 1), 0.1))), NoKickDetected);
}

TEST(Kick, ThirtyNewtonMetreLaunchDirection) {
  const RunConfig config = LoadConfig(CONTACTSIM_CONFIG_DIR "/kick.cfg");
  const Scenario s = BuildScenario(config, 30.0);
  const TrajectoryLog log = contactsim::Run(s);
  const KickVelocity v = MeasurePostKickVelocity(log);
  EXPECT_GT(v.vx, 0.0);
  EXPECT_GT(v.vy, 0.0);
  EXPECT_GE(v.vy / v.vx, 0.225);
  EXPECT_LE(v.vy / v.vx, 0.265);
  EXPECT_GE(GroundFloor(log, s), -1e-3);
  // The kicked ball eventually leaves the arena or the horizon ends.
  EXPECT_TRUE(log.rows.back().t <= s.horizon + 1e-9);
}

}  // namespace
}  // namespace contactsim
