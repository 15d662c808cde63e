#include "contactsim/contact.h"

#include <algorithm>
#include <sstream>

namespace contactsim {

void MaterialParams::Validate() const {
  if (!(mu >= 0.0)) throw std::invalid_argument("MaterialParams: mu must be >= 0");
  if (!(restitution >= 0.0 && restitution <= 1.0)) {
    throw std::invalid_argument("MaterialParams: restitution must lie in [0, 1]");
  }
}

Eigen::VectorXd ContactImpulse::TangentImpulse() const {
  Eigen::VectorXd out(normal_force.size());
  for (int i = 0; i < out.size(); ++i) {
    out(i) = dt * (friction_force(2 * i) - friction_force(2 * i + 1));
  }
  return out;
}

LcpLayout LcpLayout::For(std::span<const ContactConstraint> contacts) {
  LcpLayout layout;
  layout.contacts = static_cast<int>(contacts.size());
  for (int i = 0; i < layout.contacts; ++i) {
    if (contacts[i].material.mu > 0.0) layout.frictional.push_back(i);
  }
  return layout;
}

LcpProblem AssembleLcp(const Eigen::MatrixXd& mass_inverse,
                       const Eigen::VectorXd& velocity,
                       const Eigen::VectorXd& forces,
                       std::span<const ContactConstraint> contacts, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("AssembleLcp: dt must be > 0");
  if (contacts.empty()) throw std::invalid_argument("AssembleLcp: no active contacts");
  const int dofs = static_cast<int>(velocity.size());
  if (mass_inverse.rows() != dofs || mass_inverse.cols() != dofs ||
      forces.size() != dofs) {
    throw DimensionMismatch("AssembleLcp: system dimensions disagree");
  }
  for (const ContactConstraint& c : contacts) {
    if (c.normal.size() != dofs || c.tangent.size() != dofs) {
      throw DimensionMismatch("AssembleLcp: contact Jacobian has wrong width");
    }
    c.material.Validate();
  }

  const LcpLayout layout = LcpLayout::For(contacts);
  const int k = layout.contacts;
  const int kf = static_cast<int>(layout.frictional.size());

  Eigen::MatrixXd normals(dofs, k);
  for (int i = 0; i < k; ++i) normals.col(i) = contacts[i].normal;
  Eigen::MatrixXd directions(dofs, 2 * kf);
  for (int j = 0; j < kf; ++j) {
    directions.col(2 * j) = contacts[layout.frictional[j]].tangent;
    directions.col(2 * j + 1) = -contacts[layout.frictional[j]].tangent;
  }

  const Eigen::VectorXd free_velocity = velocity + dt * mass_inverse * forces;
  const Eigen::MatrixXd w_n = mass_inverse * normals;
  const Eigen::MatrixXd w_d = mass_inverse * directions;

  LcpProblem problem;
  problem.V = Eigen::MatrixXd::Zero(layout.size(), layout.size());
  problem.p = Eigen::VectorXd::Zero(layout.size());

  problem.V.topLeftCorner(k, k) = dt * normals.transpose() * w_n;
  for (int i = 0; i < k; ++i) {
    const double approach = std::min(contacts[i].normal.dot(velocity), 0.0);
    problem.p(i) = contacts[i].normal.dot(free_velocity) +
                   contacts[i].material.restitution * approach;
  }
  if (kf > 0) {
    problem.V.block(0, k, k, 2 * kf) = dt * normals.transpose() * w_d;
    problem.V.block(k, 0, 2 * kf, k) = dt * directions.transpose() * w_n;
    problem.V.block(k, k, 2 * kf, 2 * kf) = dt * directions.transpose() * w_d;
    for (int j = 0; j < kf; ++j) {
      const int contact = layout.frictional[j];
      const int lambda = layout.lambda_row(j);
      problem.V(layout.tangent_row(j), lambda) = 1.0;
      problem.V(layout.tangent_row(j) + 1, lambda) = 1.0;
      problem.V(lambda, contact) = contacts[contact].material.mu;
      problem.V(lambda, layout.tangent_row(j)) = -1.0;
      problem.V(lambda, layout.tangent_row(j) + 1) = -1.0;
    }
    problem.p.segment(k, 2 * kf) = directions.transpose() * free_velocity;
  }
  return problem;
}

ContactStep ResolveContacts(const Eigen::MatrixXd& mass_inverse,
                            const Eigen::VectorXd& velocity,
                            const Eigen::VectorXd& forces,
                            std::span<const ContactConstraint> contacts,
                            double dt, const LemkeOptions& options) {
  ContactStep step;
  step.problem = AssembleLcp(mass_inverse, velocity, forces, contacts, dt);
  step.solution = SolveLemke(step.problem, options);
  if (!step.solution.solved()) {
    std::ostringstream msg;
    msg << "contact LCP failed: " << ToString(step.solution.status) << " (n = "
        << step.problem.size() << ")";
    throw SolverFailed(msg.str(), step.problem, step.solution.status);
  }

  const LcpLayout layout = LcpLayout::For(contacts);
  const int k = layout.contacts;
  const Eigen::VectorXd& z = step.solution.z;
  ContactImpulse& impulse = step.impulse;
  impulse.dt = dt;
  impulse.normal_force = z.head(k);
  impulse.friction_force = Eigen::VectorXd::Zero(2 * k);
  impulse.lambda = Eigen::VectorXd::Zero(k);

  Eigen::VectorXd contact_force = Eigen::VectorXd::Zero(velocity.size());
  for (int i = 0; i < k; ++i) contact_force += impulse.normal_force(i) * contacts[i].normal;
  for (int j = 0; j < static_cast<int>(layout.frictional.size()); ++j) {
    const int c = layout.frictional[j];
    impulse.friction_force(2 * c) = z(layout.tangent_row(j));
    impulse.friction_force(2 * c + 1) = z(layout.tangent_row(j) + 1);
    impulse.lambda(c) = z(layout.lambda_row(j));
    contact_force += (impulse.friction_force(2 * c) - impulse.friction_force(2 * c + 1)) *
                     contacts[c].tangent;
  }
  step.velocity = velocity + dt * mass_inverse * (forces + contact_force);
  return step;
}

std::vector<ContactConstraint> BodyConstraints(
    std::span<const ContactFrame> frames, const MaterialParams& material) {
  std::vector<ContactConstraint> constraints;
  constraints.reserve(frames.size());
  for (const ContactFrame& f : frames) {
    constraints.push_back({f.jacobian.row(0).transpose(),
                           f.jacobian.row(1).transpose(), material});
  }
  return constraints;
}

LcpProblem AssembleLcp(const BodyState& state, const InertialProps& props,
                       std::span<const ContactFrame> frames,
                       const Eigen::Vector3d& forces,
                       const MaterialParams& material, double dt) {
  props.Validate();
  const auto constraints = BodyConstraints(frames, material);
  return AssembleLcp(props.InverseMassMatrix(), state.v, forces, constraints, dt);
}

BodyStepResult ResolveStep(const BodyState& state, const InertialProps& props,
                           std::span<const ContactFrame> frames,
                           const Eigen::Vector3d& forces,
                           const MaterialParams& material, double dt,
                           PositionUpdate mode) {
  if (frames.empty()) throw std::invalid_argument("ResolveStep: no active frames");
  props.Validate();
  const auto constraints = BodyConstraints(frames, material);
  ContactStep step = ResolveContacts(props.InverseMassMatrix(), state.v, forces,
                                     constraints, dt);
  BodyStepResult result;
  result.state.v = step.velocity;
  result.state.q = IntegratePosition(state.q, state.v, result.state.v, dt, mode);
  result.impulse = std::move(step.impulse);
  return result;
}

}  // namespace contactsim
