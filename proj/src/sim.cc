#include "contactsim/sim.h"

#include <cmath>
#include <numbers>
#include <sstream>

namespace contactsim {

JointReference GaitScript::At(double time_since_strike) const {
  const double omega = 2.0 * std::numbers::pi * frequency;
  if (time_since_strike >= 0.5 / frequency) return {step_angle, 0.0, 0.0};
  const double phase = omega * time_since_strike;
  return {-step_angle * std::cos(phase), step_angle * omega * std::sin(phase),
          step_angle * omega * omega * std::cos(phase)};
}

void Scenario::Validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("Scenario: dt must be > 0");
  if (!(horizon > dt)) throw std::invalid_argument("Scenario: horizon must exceed dt");
  if (!(contact_threshold >= 0.0)) {
    throw std::invalid_argument("Scenario: contact threshold must be >= 0");
  }
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const FreeBody& b = bodies[i];
    ValidateShape(b.shape);
    if (std::holds_alternative<HalfPlane>(b.shape)) {
      throw std::invalid_argument("Scenario: body '" + b.name + "' cannot be a half-plane");
    }
    b.props.Validate();
    b.ground_material.Validate();
    if (!b.state.IsFinite()) {
      throw std::invalid_argument("Scenario: body '" + b.name + "' has a non-finite state");
    }
    for (std::size_t j = i + 1; j < bodies.size(); ++j) {
      if (std::holds_alternative<Rectangle>(b.shape) &&
          std::holds_alternative<Rectangle>(bodies[j].shape)) {
        throw std::invalid_argument("Scenario: rectangle-rectangle pairs are unsupported");
      }
    }
  }
  if (biped) {
    biped->model.Validate();
    biped->gains.Validate();
    biped->foot_ground.Validate();
    if (!(biped->gait.frequency > 0.0)) {
      throw std::invalid_argument("Scenario: gait frequency must be > 0");
    }
  }
  if (kick) {
    if (!biped) throw std::invalid_argument("Scenario: a kick needs a biped");
    if (kick->target_body < 0 || kick->target_body >= static_cast<int>(bodies.size())) {
      throw std::invalid_argument("Scenario: kick target out of range");
    }
    if (!(kick->torque >= 0.0) || !(kick->pulse_duration > 0.0) ||
        !(kick->trigger_distance > 0.0) || !(kick->windup_time >= 0.0)) {
      throw std::invalid_argument("Scenario: invalid kick parameters");
    }
    kick->foot_ball.Validate();
  }
}

int Scenario::StepCount() const {
  return static_cast<int>(std::ceil(horizon / dt - 1e-9));
}

std::string_view ToString(BipedPhase phase) {
  switch (phase) {
    case BipedPhase::kNone: return "none";
    case BipedPhase::kWalk: return "walk";
    case BipedPhase::kWindup: return "windup";
    case BipedPhase::kStrike: return "strike";
    case BipedPhase::kCoast: return "coast";
    case BipedPhase::kFollowThrough: return "follow_through";
  }
  return "unknown";
}

namespace {

// Horizontal half-extent of a body about its centre.
double HalfExtentX(const FreeBody& body) {
  if (const auto* c = std::get_if<Circle>(&body.shape)) return c->radius;
  const auto& r = std::get<Rectangle>(body.shape);
  const double angle = body.state.q.z();
  return r.half_width * std::abs(std::cos(angle)) + r.half_height * std::abs(std::sin(angle));
}

}  // namespace

struct Simulator::Candidate {
  enum class Other { kGround, kBody, kSwingFoot, kStanceFoot };
  ContactFrame frame;
  int body = 0;
  Other other = Other::kGround;
  int other_body = -1;
  MaterialParams material;
};

Simulator::Simulator(Scenario scenario) : scenario_(std::move(scenario)) {
  scenario_.Validate();
  samples_.resize(scenario_.bodies.size() + (scenario_.biped ? 2 : 0));
  if (scenario_.biped) {
    const BipedSetup& b = *scenario_.biped;
    relative_model_ = b.model;
    relative_model_.convention = AngleConvention::kRelative;
    joints_ = ToRelative(b.model, b.joints);
    stance_ankle_ = Eigen::Vector2d(b.stance_x, 2.0 * b.model.foot.half_height);
    phase_ = BipedPhase::kWalk;
  }
}

BipedPose Simulator::pose() const {
  return ForwardKinematics(relative_model_, joints_, stance_ankle_);
}

BodyState Simulator::foot_state(int leg) const {
  if (leg == stance_leg_) {
    return FootState(relative_model_, stance_ankle_, Eigen::Vector2d::Zero());
  }
  const Eigen::Vector2d ankle_velocity =
      SwingAnkleJacobian(relative_model_, joints_) * joints_.theta_dot;
  return FootState(relative_model_, pose().swing_ankle, ankle_velocity);
}

int Simulator::BipedDofs() const {
  if (!scenario_.biped) return 0;
  return phase_ == BipedPhase::kWalk ? 2 : 1;
}

Eigen::MatrixXd Simulator::BipedMass() const {
  const Eigen::Matrix2d m = JointMassMatrix(relative_model_, joints_);
  if (BipedDofs() == 2) return m;
  return m.bottomRightCorner<1, 1>();
}

Eigen::VectorXd Simulator::BipedBias() const {
  if (BipedDofs() == 2) return BiasForces(relative_model_, joints_, scenario_.gravity);
  JointState braced = joints_;
  braced.theta_dot.x() = 0.0;
  return BiasForces(relative_model_, braced, scenario_.gravity).tail<1>();
}

Eigen::MatrixXd Simulator::SwingFootJacobian() const {
  const Eigen::Matrix2d j = SwingAnkleJacobian(relative_model_, joints_);
  if (BipedDofs() == 2) return j;
  return j.rightCols<1>();
}

void Simulator::UpdatePhase() {
  if (!scenario_.biped || !scenario_.kick) return;
  const KickSetup& kick = *scenario_.kick;
  const double elapsed = time() - phase_start_;
  switch (phase_) {
    case BipedPhase::kWalk: {
      const FreeBody& target = scenario_.bodies[kick.target_body];
      const double toe = pose().swing_ankle.x() + relative_model_.foot.half_width;
      const double clearance = target.state.q.x() - HalfExtentX(target) - toe;
      if (clearance >= 0.0 && clearance < kick.trigger_distance) {
        // Plant the stance leg; the swing leg keeps its absolute rate.
        joints_.theta_dot.y() += joints_.theta_dot.x();
        joints_.theta_dot.x() = 0.0;
        phase_ = BipedPhase::kWindup;
        phase_start_ = time();
      }
      break;
    }
    case BipedPhase::kWindup:
      if (elapsed >= kick.windup_time - 1e-12) {
        phase_ = BipedPhase::kStrike;
        phase_start_ = time();
      }
      break;
    case BipedPhase::kStrike:
      if (elapsed >= kick.pulse_duration - 1e-12) {
        phase_ = BipedPhase::kCoast;
        phase_start_ = time();
      }
      break;
    case BipedPhase::kCoast:
      if (!kick_contact_seen_ &&
          joints_.theta.x() + joints_.theta.y() > 0.5 * std::numbers::pi) {
        // Swung past the target without touching it.
        phase_ = BipedPhase::kFollowThrough;
        hold_angle_ = joints_.theta.y();
        phase_start_ = time();
      }
      break;
    default:
      break;
  }
}

double Simulator::ControlTorque(const Eigen::MatrixXd& mass,
                                const Eigen::VectorXd& bias) {
  const BipedSetup& b = *scenario_.biped;
  const int dofs = static_cast<int>(mass.rows());
  Eigen::VectorXd actuation = Eigen::VectorXd::Zero(dofs);
  actuation(dofs - 1) = 1.0;
  const Eigen::RowVectorXd selection = actuation.transpose();
  const double angle = joints_.theta.y();
  const double rate = joints_.theta_dot.y();

  double commanded = 0.0;
  switch (phase_) {
    case BipedPhase::kWalk:
      commanded = CommandedAcceleration(angle, rate, b.gains,
                                        b.gait.At(time() - step_start_));
      break;
    case BipedPhase::kWindup:
      commanded = CommandedAcceleration(
          angle, rate, b.gains,
          {scenario_.kick->windup_angle - joints_.theta.x(), 0.0, 0.0});
      break;
    case BipedPhase::kStrike: {
      // The acceleration the kick torque alone imparts to the hip joint.
      const double decoupling = selection * mass.partialPivLu().solve(actuation);
      commanded = decoupling * scenario_.kick->torque;
      break;
    }
    case BipedPhase::kCoast:
      commanded = 0.0;
      break;
    case BipedPhase::kFollowThrough:
      commanded = CommandedAcceleration(angle, rate, b.gains, {hold_angle_, 0.0, 0.0});
      break;
    case BipedPhase::kNone:
      return 0.0;
  }
  return PflTorque(mass, bias, actuation, selection, commanded);
}

void Simulator::HeelStrike() {
  const BipedModel& model = relative_model_;
  const BodyState swing_foot = foot_state(1 - stance_leg_);
  const auto frames = GapAndFrame(model.foot, swing_foot, Ground(), BodyState{});
  const double gap = frames.front().gap;
  const double swing = joints_.theta.x() + joints_.theta.y();
  const double threshold = scenario_.contact_threshold;
  if (!armed_) {
    armed_ = swing > 0.0 && gap > threshold;
    return;
  }
  if (gap > threshold || swing_foot.v.y() > 0.0) return;

  // Plastic strike: the new stance foot stops and the hip keeps only the
  // velocity component the new stance leg can rotate about.
  const double l = model.leg_length;
  const double th1 = joints_.theta.x();
  const Eigen::Vector2d hip_velocity =
      l * joints_.theta_dot.x() * Eigen::Vector2d(-std::cos(th1), -std::sin(th1));
  JointState next;
  next.theta << swing, -joints_.theta.y();
  next.theta_dot.x() =
      hip_velocity.dot(Eigen::Vector2d(-std::cos(swing), -std::sin(swing))) / l;
  next.theta_dot.y() = joints_.theta_dot.x() - next.theta_dot.x();

  stance_ankle_ = Eigen::Vector2d(pose().swing_ankle.x(), 2.0 * model.foot.half_height);
  joints_ = next;
  stance_leg_ = 1 - stance_leg_;
  step_start_ = time();
  armed_ = false;
}

void Simulator::Step() {
  const double dt = scenario_.dt;
  const int nb = static_cast<int>(scenario_.bodies.size());
  UpdatePhase();

  // Global generalized coordinates: 3 per free body, then the biped joints.
  const int bd = BipedDofs();
  const int biped_offset = 3 * nb;
  const int n = biped_offset + bd;
  Eigen::MatrixXd mass_inverse = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd velocity(n);
  Eigen::VectorXd forces(n);
  for (int i = 0; i < nb; ++i) {
    const FreeBody& b = scenario_.bodies[i];
    mass_inverse.block<3, 3>(3 * i, 3 * i) = b.props.InverseMassMatrix();
    velocity.segment<3>(3 * i) = b.state.v;
    forces.segment<3>(3 * i) = GeneralizedForces(b.state, b.props, scenario_.gravity);
  }
  last_torque_ = 0.0;
  if (bd > 0) {
    const Eigen::MatrixXd mass = BipedMass();
    const Eigen::VectorXd bias = BipedBias();
    last_torque_ = ControlTorque(mass, bias);
    Eigen::VectorXd actuation = Eigen::VectorXd::Zero(bd);
    actuation(bd - 1) = 1.0;
    mass_inverse.block(biped_offset, biped_offset, bd, bd) = mass.inverse();
    velocity.segment(biped_offset, bd) = joints_.theta_dot.tail(bd);
    forces.segment(biped_offset, bd) = actuation * last_torque_ - bias;
  }
  const Eigen::VectorXd free_velocity = velocity + dt * mass_inverse * forces;

  // Contact candidates.
  std::vector<Candidate> candidates;
  auto add = [&](std::vector<ContactFrame> frames, int body, Candidate::Other other,
                 int other_body, const MaterialParams& material) {
    for (ContactFrame& f : frames) {
      candidates.push_back({std::move(f), body, other, other_body, material});
    }
  };
  const BodyState swing_foot = bd > 0 ? foot_state(1 - stance_leg_) : BodyState{};
  const BodyState stance_foot = bd > 0 ? foot_state(stance_leg_) : BodyState{};
  for (int i = 0; i < nb; ++i) {
    const FreeBody& a = scenario_.bodies[i];
    add(GapAndFrame(a.shape, a.state, Ground(), BodyState{}), i,
        Candidate::Other::kGround, -1, a.ground_material);
    for (int j = i + 1; j < nb; ++j) {
      const FreeBody& b = scenario_.bodies[j];
      const MaterialParams mixed{std::min(a.ground_material.mu, b.ground_material.mu),
                                 std::min(a.ground_material.restitution,
                                          b.ground_material.restitution)};
      add(GapAndFrame(a.shape, a.state, b.shape, b.state), i, Candidate::Other::kBody,
          j, mixed);
    }
    if (bd > 0) {
      const MaterialParams foot_material =
          scenario_.kick ? scenario_.kick->foot_ball : KickSetup{}.foot_ball;
      const Shape foot = relative_model_.foot;
      if (!std::holds_alternative<Rectangle>(a.shape)) {
        add(GapAndFrame(a.shape, a.state, foot, swing_foot), i,
            Candidate::Other::kSwingFoot, -1, foot_material);
        add(GapAndFrame(a.shape, a.state, foot, stance_foot), i,
            Candidate::Other::kStanceFoot, -1, foot_material);
      }
    }
  }

  // Lift every candidate onto the global coordinates and keep those whose
  // swept gap (gap plus the free-step normal approach) is within threshold.
  std::vector<ContactConstraint> active;
  std::vector<const Candidate*> active_candidates;
  for (const Candidate& c : candidates) {
    ContactConstraint constraint;
    constraint.normal = Eigen::VectorXd::Zero(n);
    constraint.tangent = Eigen::VectorXd::Zero(n);
    constraint.material = c.material;
    constraint.normal.segment<3>(3 * c.body) = c.frame.jacobian.row(0).transpose();
    constraint.tangent.segment<3>(3 * c.body) = c.frame.jacobian.row(1).transpose();
    if (c.other == Candidate::Other::kBody) {
      const Eigen::Matrix<double, 2, 3> jb =
          PointJacobian(c.frame.point_on_b(), c.frame.normal,
                        scenario_.bodies[c.other_body].state);
      constraint.normal.segment<3>(3 * c.other_body) -= jb.row(0).transpose();
      constraint.tangent.segment<3>(3 * c.other_body) -= jb.row(1).transpose();
    } else if (c.other == Candidate::Other::kSwingFoot) {
      const Eigen::MatrixXd ja = SwingFootJacobian();
      constraint.normal.segment(biped_offset, bd) -= (c.frame.normal.transpose() * ja).transpose();
      constraint.tangent.segment(biped_offset, bd) -=
          (c.frame.tangent().transpose() * ja).transpose();
    }
    ContactFrame swept = c.frame;
    swept.gap += dt * std::min(0.0, constraint.normal.dot(free_velocity));
    if (!CheckCollision({&swept, 1}, scenario_.contact_threshold).empty()) {
      active.push_back(std::move(constraint));
      active_candidates.push_back(&c);
    }
  }

  // Resolve the contacting coordinates together; the rest step freely.
  std::vector<bool> in_contact(nb + 1, false);
  for (const Candidate* c : active_candidates) {
    in_contact[c->body] = true;
    if (c->other == Candidate::Other::kBody) in_contact[c->other_body] = true;
    if (c->other == Candidate::Other::kSwingFoot) in_contact[nb] = true;
  }
  Eigen::VectorXd next_velocity = free_velocity;
  for (BodySample& s : samples_) s = BodySample{};
  last_kick_impulse_ = 0.0;
  bool kick_contact = false;

  if (!active.empty()) {
    std::vector<int> dofs;
    std::vector<std::string> names;
    for (int i = 0; i < nb; ++i) {
      if (!in_contact[i]) continue;
      for (int k = 0; k < 3; ++k) dofs.push_back(3 * i + k);
      names.push_back(scenario_.bodies[i].name);
    }
    if (in_contact[nb]) {
      for (int k = 0; k < bd; ++k) dofs.push_back(biped_offset + k);
      names.push_back("biped");
    }
    const int m = static_cast<int>(dofs.size());
    Eigen::MatrixXd sub_mass_inverse(m, m);
    Eigen::VectorXd sub_velocity(m);
    Eigen::VectorXd sub_forces(m);
    for (int r = 0; r < m; ++r) {
      sub_velocity(r) = velocity(dofs[r]);
      sub_forces(r) = forces(dofs[r]);
      for (int s = 0; s < m; ++s) sub_mass_inverse(r, s) = mass_inverse(dofs[r], dofs[s]);
    }
    std::vector<ContactConstraint> sub_active;
    for (const ContactConstraint& c : active) {
      ContactConstraint s{Eigen::VectorXd(m), Eigen::VectorXd(m), c.material};
      for (int r = 0; r < m; ++r) {
        s.normal(r) = c.normal(dofs[r]);
        s.tangent(r) = c.tangent(dofs[r]);
      }
      sub_active.push_back(std::move(s));
    }
    ContactStep solved;
    try {
      solved = ResolveContacts(sub_mass_inverse, sub_velocity, sub_forces, sub_active, dt);
    } catch (const SolverFailed& e) {
      std::ostringstream msg;
      msg << "step " << step_ << ": " << e.what() << " for bodies:";
      for (const std::string& name : names) msg << ' ' << name;
      throw SimulationError(msg.str(), step_, names);
    }
    for (int r = 0; r < m; ++r) next_velocity(dofs[r]) = solved.velocity(r);

    const Eigen::VectorXd impulses = solved.impulse.NormalImpulse();
    for (std::size_t k = 0; k < active_candidates.size(); ++k) {
      const Candidate& c = *active_candidates[k];
      samples_[c.body].contacts += 1;
      samples_[c.body].normal_impulse += impulses(k);
      if (c.other == Candidate::Other::kBody) {
        samples_[c.other_body].contacts += 1;
        samples_[c.other_body].normal_impulse += impulses(k);
      }
      if (c.other == Candidate::Other::kSwingFoot || c.other == Candidate::Other::kStanceFoot) {
        const int leg = c.other == Candidate::Other::kSwingFoot ? 1 - stance_leg_ : stance_leg_;
        samples_[nb + leg].contacts += 1;
        samples_[nb + leg].normal_impulse += impulses(k);
      }
      if (c.other == Candidate::Other::kSwingFoot && scenario_.kick &&
          c.body == scenario_.kick->target_body &&
          (phase_ == BipedPhase::kStrike || phase_ == BipedPhase::kCoast)) {
        kick_contact = true;
        last_kick_impulse_ += impulses(k);
      }
    }
  }

  const PositionUpdate mode = scenario_.position_update;
  for (int i = 0; i < nb; ++i) {
    FreeBody& b = scenario_.bodies[i];
    const Eigen::Vector3d v_next = next_velocity.segment<3>(3 * i);
    b.state.q = IntegratePosition(b.state.q, b.state.v, v_next, dt, mode);
    b.state.v = v_next;
    samples_[i].branch = in_contact[i] ? Branch::kContact : Branch::kFree;
  }
  if (bd > 0) {
    Eigen::Vector2d rate_next = joints_.theta_dot;
    rate_next.tail(bd) = next_velocity.segment(biped_offset, bd);
    const Eigen::Vector2d rate_used =
        mode == PositionUpdate::kSemiImplicit ? rate_next : joints_.theta_dot;
    joints_.theta += dt * rate_used;
    joints_.theta_dot = rate_next;
    samples_[nb + stance_leg_].branch = Branch::kContact;
    samples_[nb + stance_leg_].contacts += 2;
    samples_[nb + 1 - stance_leg_].branch = in_contact[nb] ? Branch::kContact : Branch::kFree;
  }

  ++step_;

  if (kick_contact) kick_contact_seen_ = true;
  if (phase_ == BipedPhase::kCoast && kick_contact_seen_ && !kick_contact) {
    phase_ = BipedPhase::kFollowThrough;
    hold_angle_ = joints_.theta.y();
    phase_start_ = time();
    kick_finished_ = true;
  }
  if (phase_ == BipedPhase::kWalk) HeelStrike();
}

LogRow Simulator::Snapshot() const {
  LogRow row;
  row.step = step_;
  row.t = time();
  row.bodies = samples_;
  const int nb = static_cast<int>(scenario_.bodies.size());
  for (int i = 0; i < nb; ++i) row.bodies[i].state = scenario_.bodies[i].state;
  if (scenario_.biped) {
    for (int leg = 0; leg < 2; ++leg) row.bodies[nb + leg].state = foot_state(leg);
    row.joints = FromRelative(scenario_.biped->model, joints_);
    row.torque = last_torque_;
    row.phase = phase_;
  }
  row.kick_impulse = last_kick_impulse_;
  return row;
}

TrajectoryLog Run(const Scenario& scenario) {
  Simulator sim(scenario);
  TrajectoryLog log;
  for (const FreeBody& b : scenario.bodies) log.names.push_back(b.name);
  log.free_bodies = static_cast<int>(scenario.bodies.size());
  if (scenario.biped) {
    log.names.push_back("foot_0");
    log.names.push_back("foot_1");
  }
  if (scenario.kick) log.kick_body = scenario.kick->target_body;

  const int steps = scenario.StepCount();
  log.rows.reserve(steps + 1);
  log.rows.push_back(sim.Snapshot());
  for (int k = 0; k < steps; ++k) {
    sim.Step();
    log.rows.push_back(sim.Snapshot());
    if (sim.kick_finished() &&
        std::abs(sim.bodies()[log.kick_body].state.q.x()) > scenario.arena_width) {
      break;
    }
  }
  return log;
}

KickVelocity MeasurePostKickVelocity(const TrajectoryLog& log) {
  if (log.kick_body < 0) throw NoKickDetected("no kick target in this log");
  for (int r = static_cast<int>(log.rows.size()) - 1; r >= 0; --r) {
    if (log.rows[r].kick_impulse > 0.0) {
      const BodyState& s = log.rows[r].bodies[log.kick_body].state;
      return {s.v.x(), s.v.y(), r};
    }
  }
  throw NoKickDetected("no foot impulse on the kick target");
}

}  // namespace contactsim
