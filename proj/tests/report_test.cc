#include <gtest/gtest.h>

#include <sstream>

#include "contactsim/report.h"

namespace contactsim {
namespace {

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

RunConfig FreeFlight() {
  RunConfig c;
  c.dt = 0.001;
  c.horizon = 0.01;
  c.ball_y = 5.0;
  c.ball_vx = 0.1;
  return c;
}

TEST(TrajectoryCsv, HeaderAndRowsPerBody) {
  const TrajectoryLog log = contactsim::Run(BuildScenario(FreeFlight()));
  std::ostringstream out;
  WriteTrajectoryCsv(log, out);
  const auto lines = Lines(out.str());
  ASSERT_EQ(lines.size(), 12u);
  EXPECT_EQ(lines[0], "t,body,x,y,theta,vx,vy,omega,contacts");
  EXPECT_EQ(lines[1], "0,ball,0,5,0,0.1,0,0,0");
}

TEST(TrajectoryCsv, FullPrecisionRoundTrips) {
  const TrajectoryLog log = contactsim::Run(BuildScenario(FreeFlight()));
  std::ostringstream out;
  WriteTrajectoryCsv(log, out);
  const auto lines = Lines(out.str());
  std::istringstream row(lines.back());
  std::vector<std::string> fields;
  for (std::string f; std::getline(row, f, ',');) fields.push_back(f);
  ASSERT_EQ(fields.size(), 9u);
  EXPECT_EQ(std::stod(fields[3]), log.rows.back().bodies[0].state.q.y());
  EXPECT_EQ(std::stod(fields[6]), log.rows.back().bodies[0].state.v.y());
}

TEST(TrajectoryCsv, BipedAddsFeet) {
  RunConfig c = FreeFlight();
  c.biped_enabled = true;
  c.ball_x = 20.0;
  const TrajectoryLog log = contactsim::Run(BuildScenario(c));
  std::ostringstream out;
  WriteTrajectoryCsv(log, out);
  const auto lines = Lines(out.str());
  EXPECT_EQ(lines.size(), 1u + 3u * 11u);
  EXPECT_EQ(lines[2].substr(0, 8), "0,foot_0");
  EXPECT_EQ(lines[3].substr(0, 8), "0,foot_1");
}

TEST(SweepTorques, Ranges) {
  RunConfig c;
  EXPECT_EQ(SweepTorques(c).size(), 8u);
  c.sweep_end = 30;
  EXPECT_EQ(SweepTorques(c), std::vector<double>{30.0});
  c.sweep_start = 0.1;
  c.sweep_end = 0.3;
  c.sweep_step = 0.1;
  EXPECT_EQ(SweepTorques(c).size(), 3u);
}

TEST(SweepCsv, EmptyFieldsForMissingKick) {
  std::vector<SweepRow> rows(2);
  rows[0].torque = 30;
  rows[0].velocity = KickVelocity{7.5, 1.75, 10};
  rows[1].torque = 40;
  rows[1].error = "no kick";
  std::ostringstream out;
  WriteSweepCsv(rows, out);
  EXPECT_EQ(out.str(), "tau_Nm,vx_ms,vy_ms\n30,7.5,1.75\n40,,\n");
  std::ostringstream table;
  PrintSweepTable(rows, table);
  EXPECT_NE(table.str().find("+2.9%"), std::string::npos);
  EXPECT_NE(table.str().find("no kick"), std::string::npos);
}

TEST(ReferenceKick, PublishedRows) {
  ASSERT_TRUE(ReferenceKick(30).has_value());
  EXPECT_EQ(ReferenceKick(30)->vx, 7.29);
  EXPECT_EQ(ReferenceKick(100)->vy, 5.94);
  EXPECT_FALSE(ReferenceKick(35).has_value());
}

TEST(AnalyzeDrop, ReboundNearRestitutionSquared) {
  RunConfig c;
  c.dt = 0.001;
  c.horizon = 2.0;
  c.ball_y = 1.2;
  c.ball_mu = 0.0;
  c.ball_restitution = 0.5;
  const DropReport r = AnalyzeDrop(contactsim::Run(BuildScenario(c)), c.ball_radius);
  ASSERT_TRUE(r.bounced);
  EXPECT_NEAR(r.drop_height, 1.0, 1e-15);
  EXPECT_NEAR(r.rebound_speed / r.impact_speed, 0.5, 1e-6 + c.dt * 9.81 / r.impact_speed);
  EXPECT_NEAR(r.apex_height, 0.25, 0.05 * 0.25);
}

}  // namespace
}  // namespace contactsim
