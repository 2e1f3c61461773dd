#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "evoform/gelfand_triple.hpp"
#include "evoform/types.hpp"

namespace evoform {

/// Discrete trajectory on a strictly increasing time grid. The derivative is
/// the backward difference (u_{j+1} - u_j) / dt_j, attributed to interval j;
/// derivative.size() == grid.size() - 1. Between nodes the trajectory is read
/// as its piecewise-linear interpolant.
template <typename Scalar>
struct Trajectory {
  std::vector<double> grid;
  std::vector<DenseVector<Scalar>> states;
  std::vector<DenseVector<Scalar>> derivative;
  std::string problem_tag;
};

template <typename Scalar>
void rebuild_derivative(Trajectory<Scalar>& traj) {
  if (traj.states.size() != traj.grid.size() || traj.grid.size() < 2)
    throw std::invalid_argument("rebuild_derivative: malformed trajectory");
  traj.derivative.resize(traj.grid.size() - 1);
  for (std::size_t j = 0; j + 1 < traj.grid.size(); ++j) {
    const double dt = traj.grid[j + 1] - traj.grid[j];
    if (!(dt > 0.0))
      throw std::invalid_argument("rebuild_derivative: grid must be strictly increasing");
    traj.derivative[j] = (traj.states[j + 1] - traj.states[j]) / Scalar(dt);
  }
}

/// Value of the piecewise-linear interpolant at time t (clamped to the grid span).
template <typename Scalar>
DenseVector<Scalar> interpolate_state(const Trajectory<Scalar>& traj, double t) {
  const auto& g = traj.grid;
  if (g.size() < 2) throw std::invalid_argument("interpolate_state: malformed trajectory");
  if (t <= g.front()) return traj.states.front();
  if (t >= g.back()) return traj.states.back();
  std::size_t lo = 0, hi = g.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (g[mid] <= t ? lo : hi) = mid;
  }
  const double w = (t - g[lo]) / (g[lo + 1] - g[lo]);
  return traj.states[lo] + Scalar(w) * (traj.states[lo + 1] - traj.states[lo]);
}

/// Largest one-step growth of the H-norm along the trajectory,
/// max_j (||u_{j+1}||_H - ||u_j||_H). Non-positive = dissipative run; checked
/// by tests on every homogeneous solve with a coercive symmetric form.
template <typename Scalar>
RealOf<Scalar> max_h_norm_growth(const Trajectory<Scalar>& traj,
                                 const GelfandTriple<Scalar>& triple) {
  RealOf<Scalar> worst = RealOf<Scalar>(0);
  RealOf<Scalar> prev = norm(triple, traj.states.front(), NormKind::H);
  for (std::size_t j = 1; j < traj.states.size(); ++j) {
    const RealOf<Scalar> cur = norm(triple, traj.states[j], NormKind::H);
    worst = std::max(worst, cur - prev);
    prev = cur;
  }
  return worst;
}

}  // namespace evoform
