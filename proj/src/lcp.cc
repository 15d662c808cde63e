#include "contactsim/lcp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace contactsim {

namespace {

// Relative tolerance used to decide that two ratios tie.
constexpr double kRatioTieTol = 1e-9;

bool Ties(double a, double b) {
  return std::abs(a - b) <= kRatioTieTol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

void Pivot(Eigen::MatrixXd& tableau, int row, int col) {
  tableau.row(row) /= tableau(row, col);
  for (int i = 0; i < tableau.rows(); ++i) {
    if (i != row && tableau(i, col) != 0.0) {
      tableau.row(i) -= tableau(i, col) * tableau.row(row);
    }
  }
}

// Narrows tied candidate rows by comparing the rows of B^-1 (held in the
// first n columns of the tableau) scaled by the pivot column entry.
int LexicographicMinimum(const Eigen::MatrixXd& tableau, std::vector<int> rows,
                         int col, int n) {
  for (int j = 0; j < n && rows.size() > 1; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (int i : rows) best = std::min(best, tableau(i, j) / tableau(i, col));
    std::vector<int> kept;
    for (int i : rows) {
      if (Ties(tableau(i, j) / tableau(i, col), best)) kept.push_back(i);
    }
    rows = std::move(kept);
  }
  return rows.front();
}

LcpSolution Finish(const LcpProblem& problem, Eigen::VectorXd z,
                   LcpStatus status, int pivots) {
  LcpSolution solution;
  solution.z = std::move(z);
  solution.w = problem.V * solution.z + problem.p;
  solution.status = status;
  solution.pivots = pivots;
  return solution;
}

// Re-solves the principal system for the final complementary basis. The
// tableau accumulates round-off over many pivots; one dense solve on the
// original data removes it.
Eigen::VectorXd Refine(const LcpProblem& problem, const Eigen::VectorXd& z) {
  std::vector<int> active;
  for (int i = 0; i < z.size(); ++i) {
    if (z(i) > 0.0) active.push_back(i);
  }
  if (active.empty()) return z;
  const int k = static_cast<int>(active.size());
  Eigen::MatrixXd sub(k, k);
  Eigen::VectorXd rhs(k);
  for (int a = 0; a < k; ++a) {
    rhs(a) = -problem.p(active[a]);
    for (int b = 0; b < k; ++b) sub(a, b) = problem.V(active[a], active[b]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
  if (!lu.isInvertible()) return z;
  const Eigen::VectorXd za = lu.solve(rhs);
  Eigen::VectorXd refined = Eigen::VectorXd::Zero(z.size());
  for (int a = 0; a < k; ++a) refined(active[a]) = za(a);
  return refined;
}

}  // namespace

void LcpProblem::Validate() const {
  if (V.rows() != V.cols()) {
    throw std::invalid_argument("LcpProblem: V must be square");
  }
  if (V.rows() != p.size()) {
    throw std::invalid_argument("LcpProblem: V and p sizes disagree");
  }
  if (!V.allFinite() || !p.allFinite()) {
    throw std::invalid_argument("LcpProblem: non-finite entry");
  }
}

std::string_view ToString(LcpStatus status) {
  switch (status) {
    case LcpStatus::kSolved: return "Solved";
    case LcpStatus::kRayTermination: return "RayTermination";
    case LcpStatus::kIterationLimit: return "IterationLimit";
    case LcpStatus::kInfeasible: return "Infeasible";
    case LcpStatus::kInaccurate: return "Inaccurate";
  }
  return "Unknown";
}

LcpSolution SolveLemke(const LcpProblem& problem, const LemkeOptions& options) {
  problem.Validate();
  if (!(options.tol > 0.0)) throw std::invalid_argument("SolveLemke: tol must be > 0");
  const int n = problem.size();
  if (n == 0 || problem.p.minCoeff() >= 0.0) {
    return Finish(problem, Eigen::VectorXd::Zero(n), LcpStatus::kSolved, 0);
  }

  // Columns: w (n) | z (n) | z0 | rhs.
  const int z0 = 2 * n;
  const int rhs = 2 * n + 1;
  Eigen::MatrixXd tableau = Eigen::MatrixXd::Zero(n, 2 * n + 2);
  tableau.leftCols(n).setIdentity();
  tableau.middleCols(n, n) = -problem.V;
  tableau.col(z0).setConstant(-1.0);
  tableau.col(rhs) = problem.p;
  std::vector<int> basis(n);
  for (int i = 0; i < n; ++i) basis[i] = i;

  int leave_row = 0;
  problem.p.minCoeff(&leave_row);
  Pivot(tableau, leave_row, z0);
  tableau.col(rhs) = tableau.col(rhs).cwiseMax(0.0);
  int leaving = basis[leave_row];
  basis[leave_row] = z0;
  int pivots = 1;

  while (true) {
    const int entering = leaving < n ? leaving + n : leaving - n;
    if (pivots >= options.max_pivots) {
      return Finish(problem, Eigen::VectorXd::Zero(n), LcpStatus::kIterationLimit,
                    pivots);
    }

    double min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (tableau(i, entering) > options.pivot_tol) {
        min_ratio = std::min(min_ratio, tableau(i, rhs) / tableau(i, entering));
      }
    }
    if (!std::isfinite(min_ratio)) {
      return Finish(problem, Eigen::VectorXd::Zero(n), LcpStatus::kRayTermination,
                    pivots);
    }
    std::vector<int> tied;
    bool z0_tied = false;
    for (int i = 0; i < n; ++i) {
      if (tableau(i, entering) > options.pivot_tol &&
          Ties(tableau(i, rhs) / tableau(i, entering), min_ratio)) {
        tied.push_back(i);
        if (basis[i] == z0) {
          z0_tied = true;
          leave_row = i;
        }
      }
    }
    if (!z0_tied) leave_row = LexicographicMinimum(tableau, tied, entering, n);

    Pivot(tableau, leave_row, entering);
    tableau.col(rhs) = tableau.col(rhs).cwiseMax(0.0);
    leaving = basis[leave_row];
    basis[leave_row] = entering;
    ++pivots;

    if (leaving == z0) break;
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (basis[i] >= n && basis[i] < 2 * n) z(basis[i] - n) = tableau(i, rhs);
  }
  if (ComplementarityResidual(problem, z) <= options.tol) {
    return Finish(problem, std::move(z), LcpStatus::kSolved, pivots);
  }
  Eigen::VectorXd refined = Refine(problem, z);
  const bool ok = ComplementarityResidual(problem, refined) <= options.tol;
  return Finish(problem, std::move(refined),
                ok ? LcpStatus::kSolved : LcpStatus::kInaccurate, pivots);
}

LcpSolution SolveEnumeration(const LcpProblem& problem, double tol) {
  problem.Validate();
  const int n = problem.size();
  if (n > 20) throw std::invalid_argument("SolveEnumeration: n must be <= 20");

  const unsigned long subsets = 1ul << n;
  for (unsigned long mask = 0; mask < subsets; ++mask) {
    std::vector<int> active;
    for (int i = 0; i < n; ++i) {
      if (mask & (1ul << i)) active.push_back(i);
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    if (!active.empty()) {
      const int k = static_cast<int>(active.size());
      Eigen::MatrixXd sub(k, k);
      Eigen::VectorXd rhs(k);
      for (int a = 0; a < k; ++a) {
        rhs(a) = -problem.p(active[a]);
        for (int b = 0; b < k; ++b) sub(a, b) = problem.V(active[a], active[b]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd za = lu.solve(rhs);
      for (int a = 0; a < k; ++a) z(active[a]) = za(a);
    }
    const Eigen::VectorXd w = problem.V * z + problem.p;
    if (z.minCoeff() >= -tol && w.minCoeff() >= -tol) {
      LcpSolution solution;
      solution.z = z;
      solution.w = w;
      solution.status = LcpStatus::kSolved;
      return solution;
    }
  }
  LcpSolution solution;
  solution.z = Eigen::VectorXd::Zero(n);
  solution.w = problem.p;
  solution.status = LcpStatus::kInfeasible;
  return solution;
}

double ComplementarityResidual(const LcpProblem& problem,
                               const Eigen::VectorXd& z) {
  if (z.size() != problem.size()) {
    throw std::invalid_argument("ComplementarityResidual: dimension mismatch");
  }
  if (z.size() == 0) return 0.0;
  const Eigen::VectorXd w = problem.V * z + problem.p;
  const double scale = 1.0 + problem.p.lpNorm<Eigen::Infinity>();
  return std::max({(-z.array()).max(0.0).maxCoeff(),
                   (-w.array()).max(0.0).maxCoeff(),
                   std::abs(z.dot(w)) / scale});
}

bool CheckQpOptimality(const LcpProblem& problem, const Eigen::VectorXd& z,
                       double tol) {
  if (z.size() != problem.size() || !z.allFinite()) return false;
  if (z.size() == 0) return true;
  const Eigen::VectorXd w = problem.V * z + problem.p;
  if (z.minCoeff() < -tol || w.minCoeff() < -tol) return false;
  const double objective = z.dot(w);
  return std::abs(objective) <= tol * (1.0 + problem.p.lpNorm<Eigen::Infinity>());
}

}  // namespace contactsim
