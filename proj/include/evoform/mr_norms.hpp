#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "evoform/gelfand_triple.hpp"
#include "evoform/trajectory.hpp"
#include "evoform/types.hpp"

namespace evoform {

/// Space-time norms of a piecewise-linear trajectory. State integrals use the
/// trapezoid rule on the trajectory's own grid; derivative integrals use the
/// piecewise-constant backward differences exactly (the derivative of the
/// interpolant really is constant per interval, so those integrals are not
/// quadrature approximations).
struct MrNorms {
  double l2_V = 0.0;          // ||u||_{L2(0,T;V)}
  double l2_H = 0.0;          // ||u||_{L2(0,T;H)}
  double h1_H = 0.0;          // full H1(0,T;H) norm: (l2_H^2 + ||u'||_{L2(H)}^2)^{1/2}
  double l2_Vdual_deriv = 0.0;  // ||u'||_{L2(0,T;V')}
  double sup_H = 0.0;         // max_j ||u(t_j)||_H
  double sup_V = 0.0;         // max_j ||u(t_j)||_V
};

/// Graph norm of L2(V) intersect H1(V'), the natural well-posedness norm.
inline double mr_vvdual(const MrNorms& n) {
  return std::sqrt(n.l2_V * n.l2_V + n.l2_Vdual_deriv * n.l2_Vdual_deriv);
}

template <typename Scalar>
MrNorms mr_norms(const Trajectory<Scalar>& traj, const GelfandTriple<Scalar>& triple) {
  const std::size_t n = traj.grid.size();
  if (n < 2 || traj.states.size() != n)
    throw std::invalid_argument("mr_norms: malformed trajectory");
  if (traj.derivative.size() + 1 != n)
    throw std::invalid_argument("mr_norms: derivative out of sync with grid");

  MrNorms out;
  std::vector<double> nV(n), nH(n);
  for (std::size_t j = 0; j < n; ++j) {
    nV[j] = norm(triple, traj.states[j], NormKind::V);
    nH[j] = norm(triple, traj.states[j], NormKind::H);
    out.sup_V = std::max(out.sup_V, nV[j]);
    out.sup_H = std::max(out.sup_H, nH[j]);
  }
  double iV = 0.0, iH = 0.0, iD_H = 0.0, iD_dual = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double dt = traj.grid[j + 1] - traj.grid[j];
    iV += 0.5 * dt * (nV[j] * nV[j] + nV[j + 1] * nV[j + 1]);
    iH += 0.5 * dt * (nH[j] * nH[j] + nH[j + 1] * nH[j + 1]);
    const DenseVector<Scalar>& d = traj.derivative[j];
    const double dH = norm(triple, d, NormKind::H);
    iD_H += dt * dH * dH;
    const DenseVector<Scalar> functional = triple.gram_H * d;
    const double dV = norm(triple, functional, NormKind::Vdual);
    iD_dual += dt * dV * dV;
  }
  out.l2_V = std::sqrt(iV);
  out.l2_H = std::sqrt(iH);
  out.h1_H = std::sqrt(iH + iD_H);
  out.l2_Vdual_deriv = std::sqrt(iD_dual);
  return out;
}

namespace detail {

inline std::vector<double> merge_grids(const std::vector<double>& a,
                                       const std::vector<double>& b) {
  const double span = std::max(std::abs(a.back()), std::abs(b.back()));
  const double tol = 1e-12 * std::max(1.0, span);
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double next;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j]))
      next = a[i++];
    else
      next = b[j++];
    if (out.empty() || next - out.back() > tol) out.push_back(next);
  }
  return out;
}

}  // namespace detail

/// Norms of the difference a - b, both read as piecewise-linear functions,
/// evaluated on the union of the two grids. On the union grid the difference
/// of interpolants is again piecewise linear with nodal values given by the
/// interpolated states, so this is exact up to the trapezoid state integrals.
template <typename Scalar>
MrNorms mr_distance(const Trajectory<Scalar>& a, const Trajectory<Scalar>& b,
                    const GelfandTriple<Scalar>& triple) {
  if (std::abs(a.grid.front() - b.grid.front()) > 1e-12 ||
      std::abs(a.grid.back() - b.grid.back()) > 1e-12)
    throw std::invalid_argument("mr_distance: trajectories span different intervals");
  Trajectory<Scalar> diff;
  diff.grid = detail::merge_grids(a.grid, b.grid);
  diff.problem_tag = "difference";
  diff.states.reserve(diff.grid.size());
  for (double t : diff.grid)
    diff.states.push_back(interpolate_state(a, t) - interpolate_state(b, t));
  rebuild_derivative(diff);
  return mr_norms(diff, triple);
}

}  // namespace evoform
