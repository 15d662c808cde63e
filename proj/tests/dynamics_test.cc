#include <gtest/gtest.h>

#include <cmath>

#include "contactsim/dynamics.h"

namespace contactsim {
namespace {

TEST(InertialProps, Validation) {
  EXPECT_THROW((InertialProps{0.0, 1.0}.Validate()), std::invalid_argument);
  EXPECT_THROW((InertialProps{1.0, -1.0}.Validate()), std::invalid_argument);
  EXPECT_NO_THROW((InertialProps{1.0, 1.0}.Validate()));
  EXPECT_DOUBLE_EQ(InertialProps::Disc(0.04, 0.2).rot_inertia, 0.5 * 0.04 * 0.04);
}

TEST(GeneralizedForces, Examples) {
  const InertialProps ball = InertialProps::Disc(0.04, 0.2);
  const Eigen::Vector3d f = GeneralizedForces({}, ball, 9.81);
  EXPECT_NEAR(f.x(), 0.0, 1e-15);
  EXPECT_NEAR(f.y(), -0.3924, 1e-12);
  EXPECT_NEAR(f.z(), 0.0, 1e-15);
  EXPECT_EQ(GeneralizedForces({}, ball, 0.0, {1, 2, 3}), Eigen::Vector3d(1, 2, 3));
  EXPECT_EQ(GeneralizedForces({}, {1.0, 1.0}, 9.81, {0, 9.81, 0}), Eigen::Vector3d::Zero());
}

TEST(StepFree, OneEulerStep) {
  const InertialProps ball = InertialProps::Disc(0.04, 0.2);
  const BodyState next = StepFree({}, ball, {0, -0.3924, 0}, 0.001);
  EXPECT_NEAR(next.v.y(), -0.00981, 1e-15);
  EXPECT_NEAR(next.q.y(), -0.00981 * 0.001, 1e-18);
}

TEST(StepFree, UniformMotion) {
  BodyState s;
  s.v << 1, 0, 0;
  const BodyState next = StepFree(s, {1.0, 1.0}, Eigen::Vector3d::Zero(), 0.1);
  EXPECT_EQ(next.v, s.v);
  EXPECT_DOUBLE_EQ(next.q.x(), 0.1);
}

TEST(StepFree, ExplicitModeUsesOldVelocity) {
  BodyState s;
  s.v << 0, 1, 0;
  const BodyState next =
      StepFree(s, {1.0, 1.0}, {0, -10, 0}, 0.1, PositionUpdate::kExplicit);
  EXPECT_DOUBLE_EQ(next.q.y(), 0.1);
  EXPECT_DOUBLE_EQ(next.v.y(), 0.0);
}

TEST(StepFree, RejectsNonPositiveStep) {
  EXPECT_THROW(StepFree({}, {1.0, 1.0}, Eigen::Vector3d::Zero(), 0.0), std::invalid_argument);
}

TEST(StepFree, DropTimeMatchesClosedForm) {
  const double dt = 1e-4;
  const double g = 9.81;
  const InertialProps props{1.0, 1.0};
  BodyState s;
  s.q.y() = 1.0;
  int steps = 0;
  while (s.q.y() > 0.0) {
    s = StepFree(s, props, GeneralizedForces(s, props, g), dt);
    ++steps;
  }
  EXPECT_NEAR(steps * dt, std::sqrt(2.0 / g), 2 * dt);
  EXPECT_NEAR(steps * dt, 0.4515, 2 * dt);
}

TEST(DynamicsProperty, FreeFlightMomentumExact) {
  BodyState s;
  s.v << 0.3, -1.7, 2.5;
  const Eigen::Vector3d v0 = s.v;
  for (int k = 0; k < 10000; ++k) s = StepFree(s, {2.0, 0.5}, Eigen::Vector3d::Zero(), 1e-3);
  EXPECT_EQ(s.v, v0);
}

TEST(DynamicsProperty, BallisticApex) {
  const double dt = 1e-4;
  const double g = 9.81;
  const InertialProps props{1.0, 1.0};
  BodyState s;
  s.v.y() = 3.0;
  double apex = 0.0;
  while (s.v.y() > 0.0) {
    s = StepFree(s, props, GeneralizedForces(s, props, g), dt);
    apex = std::max(apex, s.q.y());
  }
  const double exact = 9.0 / (2.0 * g);
  EXPECT_LE(std::abs(apex - exact) / exact, 0.01);
}

TEST(DynamicsProperty, BitIdenticalReruns) {
  auto run = [] {
    BodyState s;
    s.v << 1.1, 2.2, -0.3;
    const InertialProps props{0.7, 0.1};
    for (int k = 0; k < 5000; ++k) {
      s = StepFree(s, props, GeneralizedForces(s, props, 9.81, {0.01, 0, 0.002}), 1e-3);
    }
    return s;
  };
  const BodyState a = run();
  const BodyState b = run();
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.v, b.v);
}

TEST(KineticEnergy, Disc) {
  BodyState s;
  s.v << 1, 2, 3;
  EXPECT_DOUBLE_EQ(KineticEnergy(s, {2.0, 0.5}), 0.5 * (2 * 5 + 0.5 * 9));
}

}  // namespace
}  // namespace contactsim
