#include "synthpanel/simplex_qp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "synthpanel/errors.hpp"

namespace synthpanel {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  int support = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumsum += u[static_cast<std::size_t>(k)];
    const double candidate = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[static_cast<std::size_t>(k)] > candidate) {
      tau = candidate;
      support = static_cast<int>(k + 1);
    }
  }
  (void)support;
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = std::max(0.0, v[i] - tau);
  return w;
}

namespace {

struct FaceWorkspace {
  const Eigen::MatrixXd& A;
  const Eigen::VectorXd& b;
  double ridge;

  double objective(const Eigen::VectorXd& w) const {
    return (A * w - b).squaredNorm() + ridge * w.squaredNorm();
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& w) const {
    return 2.0 * (A.transpose() * (A * w - b) + ridge * w);
  }

  // Minimum-norm stationary point of the quadratic on the affine hull of the
  // face S (sum of coordinates fixed to 1, sign constraints ignored).
  Eigen::VectorXd face_minimizer(const std::vector<Eigen::Index>& S) const {
    const Eigen::Index m = static_cast<Eigen::Index>(S.size());
    if (m == 1) return Eigen::VectorXd::Ones(1);
    Eigen::MatrixXd As(A.rows(), m);
    for (Eigen::Index k = 0; k < m; ++k) As.col(k) = A.col(S[static_cast<std::size_t>(k)]);
    // Orthonormal basis of {x : 1'x = 0} from the Householder frame of 1.
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    Eigen::HouseholderQR<Eigen::VectorXd> qr(ones);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    Eigen::MatrixXd N = Q.rightCols(m - 1);
    const Eigen::VectorXd u0 = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
    // Reduced normal equations (always consistent for least-squares objectives);
    // COD returns the minimum-norm t, and since u0 is orthogonal to range(N)
    // that is exactly the minimum-norm w on the stationary set.
    Eigen::MatrixXd An = As * N;
    Eigen::MatrixXd Hr = An.transpose() * An + ridge * N.transpose() * N;
    Eigen::VectorXd rhs =
        An.transpose() * (b - As * u0) - ridge * (N.transpose() * u0);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Hr);
    Eigen::VectorXd t = cod.solve(rhs);
    return u0 + N * t;
  }
};

}  // namespace

SimplexLsqResult solve_simplex_lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   double ridge, int max_iterations) {
  const Eigen::Index J = A.cols();
  if (J < 1) throw runtime_error("EmptyInput", "no columns in simplex least squares");
  FaceWorkspace ws{A, b, ridge};

  SimplexLsqResult result;
  if (J == 1) {
    result.w = Eigen::VectorXd::Ones(1);
    result.objective = (A.col(0) - b).squaredNorm();
    result.kkt_residual = 0.0;
    return result;
  }

  // Start at the best vertex (lowest index wins ties).
  Eigen::Index best = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < J; ++j) {
    const double f = (A.col(j) - b).squaredNorm() + ridge;
    if (f < best_f) {
      best_f = f;
      best = j;
    }
  }
  Eigen::VectorXd w = Eigen::VectorXd::Zero(J);
  w[best] = 1.0;
  std::vector<Eigen::Index> S = {best};

  const auto face_to_full = [&](const Eigen::VectorXd& ws_face) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(J);
    for (std::size_t k = 0; k < S.size(); ++k) full[S[k]] = ws_face[static_cast<Eigen::Index>(k)];
    return full;
  };

  int iterations = 0;
  bool optimal = false;
  const double feas_tol = 1e-13;
  while (iterations < max_iterations) {
    ++iterations;
    Eigen::VectorXd target = ws.face_minimizer(S);
    if (target.minCoeff() >= -feas_tol) {
      // Face optimum feasible: land on it exactly, then test reduced costs.
      for (Eigen::Index k = 0; k < target.size(); ++k)
        if (target[k] < 0.0) target[k] = 0.0;
      w = face_to_full(target);
      Eigen::VectorXd g = ws.gradient(w);
      double lambda = 0.0;
      for (const auto j : S) lambda += g[j];
      lambda /= static_cast<double>(S.size());
      const double gscale = std::max(1.0, g.cwiseAbs().maxCoeff());
      const double entry_tol = 1e-11 * gscale;
      Eigen::Index entering = -1;
      double most_negative = -entry_tol;
      for (Eigen::Index j = 0; j < J; ++j) {
        if (std::find(S.begin(), S.end(), j) != S.end()) continue;
        const double reduced = g[j] - lambda;
        if (reduced < most_negative) {
          most_negative = reduced;
          entering = j;
        }
      }
      if (entering < 0) {
        optimal = true;
        break;
      }
      S.push_back(entering);
      std::sort(S.begin(), S.end());
    } else {
      // Partial step toward the face optimum; drop the first blocking index.
      Eigen::VectorXd current(S.size());
      for (std::size_t k = 0; k < S.size(); ++k)
        current[static_cast<Eigen::Index>(k)] = w[S[k]];
      Eigen::VectorXd d = target - current;
      double alpha = 1.0;
      std::size_t blocking = S.size();
      for (std::size_t k = 0; k < S.size(); ++k) {
        const auto ki = static_cast<Eigen::Index>(k);
        if (target[ki] < -feas_tol && d[ki] < 0.0) {
          const double step = current[ki] / (-d[ki]);
          if (step < alpha - 1e-15) {
            alpha = step;
            blocking = k;
          }
        }
      }
      if (blocking == S.size())
        throw runtime_error("NoConvergence", "ratio test found no blocking index");
      current += alpha * d;
      current[static_cast<Eigen::Index>(blocking)] = 0.0;
      w = face_to_full(current);
      S.erase(S.begin() + static_cast<std::ptrdiff_t>(blocking));
      if (S.empty()) throw runtime_error("NoConvergence", "active set emptied");
    }
  }
  if (!optimal)
    throw runtime_error("NoConvergence",
                        "simplex QP hit the iteration cap (" +
                            std::to_string(max_iterations) + ")");

  // Tie expansion: pull zero-reduced-cost columns into the face and re-solve,
  // so exact ties (duplicate donors) return the minimum-norm optimum.
  {
    Eigen::VectorXd g = ws.gradient(w);
    double lambda = 0.0;
    for (const auto j : S) lambda += g[j];
    lambda /= static_cast<double>(S.size());
    const double gscale = std::max(1.0, g.cwiseAbs().maxCoeff());
    const double tie_tol = 1e-12 * gscale;
    std::vector<Eigen::Index> expanded = S;
    for (Eigen::Index j = 0; j < J; ++j) {
      if (std::find(S.begin(), S.end(), j) != S.end()) continue;
      if (std::abs(g[j] - lambda) <= tie_tol) expanded.push_back(j);
    }
    if (expanded.size() > S.size()) {
      std::sort(expanded.begin(), expanded.end());
      std::vector<Eigen::Index> saved = S;
      S = expanded;
      Eigen::VectorXd target = ws.face_minimizer(S);
      const double f_old = ws.objective(w);
      if (target.minCoeff() >= -1e-12) {
        Eigen::VectorXd candidate = face_to_full(target.cwiseMax(0.0));
        const double f_new = ws.objective(candidate);
        if (f_new <= f_old + 1e-12 * std::max(1.0, std::abs(f_old)))
          w = candidate;
        else
          S = saved;
      } else {
        S = saved;
      }
    }
  }

  // Cleanup: clamp rounding noise and renormalize the sum exactly.
  for (Eigen::Index j = 0; j < J; ++j)
    if (w[j] < 0.0) w[j] = 0.0;
  const double total = w.sum();
  if (!(total > 0.0))
    throw runtime_error("NoConvergence", "weights degenerated to zero mass");
  if (total != 1.0) w /= total;

  result.w = w;
  result.objective = (A * w - b).squaredNorm();
  result.iterations = iterations;
  const Eigen::VectorXd g = ws.gradient(w);
  const double gscale = std::max(1.0, g.cwiseAbs().maxCoeff());
  result.kkt_residual =
      (w - project_to_simplex(w - g / gscale)).cwiseAbs().maxCoeff();
  return result;
}

}  // namespace synthpanel
