#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace contactsim {

/// w = V z + p, w >= 0, z >= 0, z'w = 0.
struct LcpProblem {
  Eigen::MatrixXd V;
  Eigen::VectorXd p;

  int size() const { return static_cast<int>(p.size()); }

  /// Throws std::invalid_argument if V is not square, sizes disagree, or any
  /// entry is non-finite.
  void Validate() const;
};

enum class LcpStatus {
  kSolved,
  kRayTermination,
  kIterationLimit,
  kInfeasible,
  // Pivoting terminated but the recovered point misses the residual test.
  kInaccurate,
};

std::string_view ToString(LcpStatus status);

struct LcpSolution {
  Eigen::VectorXd z;
  Eigen::VectorXd w;
  LcpStatus status = LcpStatus::kInfeasible;
  int pivots = 0;

  bool solved() const { return status == LcpStatus::kSolved; }
};

struct LemkeOptions {
  double tol = 1e-8;
  int max_pivots = 500;
  // Tableau entries below this magnitude are never used as pivots.
  double pivot_tol = 1e-12;
};

/// Lemke's complementary pivoting with covering vector of ones and a
/// lexicographic ratio test. Returns z = 0 immediately when p >= 0.
LcpSolution SolveLemke(const LcpProblem& problem,
                       const LemkeOptions& options = {});

/// Brute-force oracle: tries every active set, first feasible candidate wins.
/// Cost is 2^n linear solves, so n is capped at 20.
LcpSolution SolveEnumeration(const LcpProblem& problem, double tol = 1e-8);

/// max(|min(z,0)|_inf, |min(w,0)|_inf, |z'w| / (1 + |p|_inf)).
double ComplementarityResidual(const LcpProblem& problem,
                               const Eigen::VectorXd& z);

/// True when z is feasible for the bilinear program z'(Vz + p) with
/// z >= 0, Vz + p >= 0, and the objective sits at zero (within
/// tol * (1 + |p|_inf)).
bool CheckQpOptimality(const LcpProblem& problem, const Eigen::VectorXd& z,
                       double tol = 1e-8);

}  // namespace contactsim
