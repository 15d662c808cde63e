#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "contactsim/collision.h"
#include "contactsim/dynamics.h"
#include "contactsim/lcp.h"

namespace contactsim {

struct MaterialParams {
  double mu = 0.2;
  double restitution = 0.5;

  void Validate() const;
};

/// One active contact lifted onto the generalized velocity of whatever system
/// it acts on: `normal` is the transposed normal row of the contact Jacobian,
/// `tangent` the transposed first-direction row. The second friction
/// direction is -tangent.
struct ContactConstraint {
  Eigen::VectorXd normal;
  Eigen::VectorXd tangent;
  MaterialParams material;
};

/// LCP unknowns z = (f_n, f_t, lambda). Forces are in the units of the
/// generalized force; the impulse applied over the step is dt times them.
/// Frictionless contacts carry no f_t or lambda unknowns; their entries here
/// are zero.
struct ContactImpulse {
  Eigen::VectorXd normal_force;    // one per contact
  Eigen::VectorXd friction_force;  // two per contact: along t, along -t
  Eigen::VectorXd lambda;          // one per contact
  double dt = 0.0;

  Eigen::VectorXd NormalImpulse() const { return dt * normal_force; }
  /// Net impulse along t for each contact.
  Eigen::VectorXd TangentImpulse() const;
  double TotalNormalImpulse() const { return dt * normal_force.sum(); }
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the contact LCP cannot be solved. Carries the offending
/// problem for diagnosis.
class SolverFailed : public std::runtime_error {
 public:
  SolverFailed(const std::string& what, LcpProblem problem, LcpStatus status)
      : std::runtime_error(what), problem_(std::move(problem)), status_(status) {}
  const LcpProblem& problem() const { return problem_; }
  LcpStatus status() const { return status_; }

 private:
  LcpProblem problem_;
  LcpStatus status_;
};

/// Index layout of the assembled LCP for a given contact list.
struct LcpLayout {
  int contacts = 0;
  std::vector<int> frictional;  // contact indices with mu > 0
  int size() const { return contacts + 3 * static_cast<int>(frictional.size()); }
  int tangent_row(int j) const { return contacts + 2 * j; }
  int lambda_row(int j) const {
    return contacts + 2 * static_cast<int>(frictional.size()) + j;
  }

  static LcpLayout For(std::span<const ContactConstraint> contacts);
};

/// Builds (V, p) for the velocity-level contact problem on a system with
/// inverse mass `mass_inverse`, pre-step velocity `velocity` and applied
/// generalized force `forces`.
LcpProblem AssembleLcp(const Eigen::MatrixXd& mass_inverse,
                       const Eigen::VectorXd& velocity,
                       const Eigen::VectorXd& forces,
                       std::span<const ContactConstraint> contacts, double dt);

struct ContactStep {
  Eigen::VectorXd velocity;  // post-step
  ContactImpulse impulse;
  LcpProblem problem;
  LcpSolution solution;
};

/// Solves the contact LCP and returns v+ = v + dt M^-1 (f + N f_n + D f_t).
ContactStep ResolveContacts(const Eigen::MatrixXd& mass_inverse,
                            const Eigen::VectorXd& velocity,
                            const Eigen::VectorXd& forces,
                            std::span<const ContactConstraint> contacts,
                            double dt, const LemkeOptions& options = {});

/// Lifts frames produced for a single free body (as shape a) onto its three
/// generalized velocities.
std::vector<ContactConstraint> BodyConstraints(
    std::span<const ContactFrame> frames, const MaterialParams& material);

LcpProblem AssembleLcp(const BodyState& state, const InertialProps& props,
                       std::span<const ContactFrame> frames,
                       const Eigen::Vector3d& forces,
                       const MaterialParams& material, double dt);

struct BodyStepResult {
  BodyState state;
  ContactImpulse impulse;
};

BodyStepResult ResolveStep(const BodyState& state, const InertialProps& props,
                           std::span<const ContactFrame> frames,
                           const Eigen::Vector3d& forces,
                           const MaterialParams& material, double dt,
                           PositionUpdate mode = PositionUpdate::kSemiImplicit);

}  // namespace contactsim
