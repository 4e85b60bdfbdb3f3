#pragma once

#include <Eigen/Dense>

namespace synthpanel {

// Euclidean projection onto the unit simplex {w : w >= 0, sum w = 1}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

struct SimplexLsqResult {
  Eigen::VectorXd w;
  double objective = 0.0;     // ||A w - b||^2 at the solution (ridge excluded)
  double kkt_residual = 0.0;  // ||w - P(w - g/scale)||_inf, scale-invariant
  int iterations = 0;
};

// Minimizes ||A w - b||^2 + ridge * ||w||^2 over the unit simplex.
//
// Primal active-set method: start from the best vertex, alternate exact
// minimum-norm solves on the current face (complete orthogonal decomposition,
// so rank-deficient faces pick the minimum-norm stationary point) with
// Bland-style entering/leaving pivots. Terminates finitely; the iteration cap
// guards degenerate cycling. Monotone descent from the best vertex guarantees
// the solution objective never exceeds any vertex objective. A final
// zero-reduced-cost expansion pulls exact-tie columns (e.g. duplicates) into
// the face so ties resolve to the minimum-norm optimum.
SimplexLsqResult solve_simplex_lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   double ridge = 0.0, int max_iterations = 5000);

}  // namespace synthpanel
