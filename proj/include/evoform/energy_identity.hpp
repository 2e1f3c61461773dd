#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "evoform/averaging.hpp"
#include "evoform/gelfand_triple.hpp"
#include "evoform/trajectory.hpp"
#include "evoform/types.hpp"

namespace evoform {

/// Defect of the integrated product rule for the approximant family along a
/// piecewise-linear trajectory:
///
///   phi(t) = a(t; u(t)) - a(0; u(0))
///            - int_0^t 2 Re (A(s) u(s), u'(s)) ds - int_0^t adot(r; u(r)) dr,
///
/// returned as max_j |phi(t_j)| over the trajectory's grid. For the Linear
/// kind adot is the cellwise rate (A_{k+1} - A_k)/delta (zero on the final
/// cell); for the Step kind the rate term is replaced by the exact jump sum
/// sum_{nodes <= t} u^H (A_k - A_{k-1}) u, which is what the distributional
/// derivative of the step family contributes.
///
/// The identity holds exactly for the interpolants, so the returned value is
/// the inner quadrature defect: each fine step is integrated by composite
/// midpoint on `inner_panels` panels applied to the step's exact polynomial
/// coefficients. The integrand is quadratic in s with curvature proportional
/// to the cell rate, so the residual is second order in the panel width and
/// vanishes to rounding for the Step kind and for constant families.
template <typename Scalar>
double energy_identity_residual(const Trajectory<Scalar>& traj,
                                const AveragedFamily<Scalar>& av,
                                ApproximantKind kind,
                                const GelfandTriple<Scalar>& triple,
                                int inner_panels = 32) {
  if (!av.symmetric)
    throw std::invalid_argument("energy_identity_residual: averages must be symmetric");
  if (inner_panels < 1)
    throw std::invalid_argument("energy_identity_residual: need at least one panel");
  const std::size_t n = traj.grid.size();
  if (n < 2 || traj.states.size() != n || traj.derivative.size() + 1 != n)
    throw std::invalid_argument("energy_identity_residual: malformed trajectory");
  if (!traj.states.front().size() || traj.states.front().size() != triple.dim)
    throw std::invalid_argument("energy_identity_residual: dimension mismatch");

  const Subdivision& sub = av.subdivision;
  const std::size_t last_cell = static_cast<std::size_t>(sub.n_intervals) - 1;
  const double delta = sub.horizon / static_cast<double>(sub.n_intervals);
  const bool linear = kind == ApproximantKind::Linear;

  auto real_of = [](Scalar z) { return Eigen::numext::real(z); };

  double integral = 0.0;
  double a0 = 0.0;
  double worst = 0.0;

  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double t0 = traj.grid[j], t1 = traj.grid[j + 1];
    const double dt = t1 - t0;
    const std::size_t cell =
        static_cast<std::size_t>(sub.interval_index(0.5 * (t0 + t1)));
    const DenseMatrix<Scalar>& A = av.averages[cell];
    const bool has_rate = linear && cell < last_cell;

    const DenseVector<Scalar>& u = traj.states[j];
    const DenseVector<Scalar>& d = traj.derivative[j];
    const DenseVector<Scalar> Au = A * u;
    const DenseVector<Scalar> Ad = A * d;

    const double tau = t0 - sub.node(static_cast<int>(cell));
    double dQu = 0.0, dQd = 0.0, uQu = 0.0;
    if (has_rate) {
      const DenseMatrix<Scalar> Q =
          ((av.averages[cell + 1] - av.averages[cell]) / delta).eval();
      const DenseVector<Scalar> Qu = Q * u;
      const DenseVector<Scalar> Qd = Q * d;
      dQu = real_of((d.adjoint() * Qu).value());
      dQd = real_of((d.adjoint() * Qd).value());
      uQu = real_of((u.adjoint() * Qu).value());
    }
    const double dAu = real_of((d.adjoint() * Au).value());
    const double dAd = real_of((d.adjoint() * Ad).value());
    const double uAu = real_of((u.adjoint() * Au).value());

    // Form value at the left node, then the residual there.
    const double a_here = uAu + tau * uQu;
    if (j == 0) a0 = a_here;
    worst = std::max(worst, std::abs(a_here - a0 - integral));

    // phi'(s) = c0 + c1 s + c2 s^2 on [0, dt]; composite midpoint.
    const double c0 = 2.0 * (dAu + tau * dQu) + uQu;
    const double c1 = 2.0 * dAd + 2.0 * tau * dQd + 4.0 * dQu;
    const double c2 = 3.0 * dQd;
    const double h = dt / static_cast<double>(inner_panels);
    double acc = 0.0;
    for (int p = 0; p < inner_panels; ++p) {
      const double s = (static_cast<double>(p) + 0.5) * h;
      acc += c0 + s * (c1 + s * c2);
    }
    integral += h * acc;

    // Step kind: the family jumps at interior nodes, which the fine grid
    // hits exactly; fold the jump into the running integral when crossing.
    if (!linear && cell < last_cell) {
      const double node_next = sub.node(static_cast<int>(cell) + 1);
      if (t1 >= node_next - 1e-14 * sub.horizon) {
        const DenseVector<Scalar>& un = traj.states[j + 1];
        const DenseMatrix<Scalar> J =
            (av.averages[cell + 1] - av.averages[cell]).eval();
        integral += real_of((un.adjoint() * (J * un)).value());
      }
    }
  }

  // Final node: the last cell's approximant is constant in both kinds.
  const DenseVector<Scalar>& uN = traj.states[n - 1];
  const double aN = real_of((uN.adjoint() * (av.averages[last_cell] * uN)).value());
  worst = std::max(worst, std::abs(aN - a0 - integral));
  return worst;
}

/// Defect of the H-norm product rule d/dt ||u||_H^2 = 2 Re (u', u)_H along a
/// trajectory, with the interval rule 2 Re (d_j, (u_j + u_{j+1})/2)_H dt. That
/// pairing telescopes the H-norms exactly, so solver output sits at rounding
/// level; trajectories sampled from a smooth function see their sampling
/// defect instead.
template <typename Scalar>
double h_norm_rule_residual(const Trajectory<Scalar>& traj,
                            const GelfandTriple<Scalar>& triple) {
  const std::size_t n = traj.grid.size();
  if (n < 2 || traj.states.size() != n || traj.derivative.size() + 1 != n)
    throw std::invalid_argument("h_norm_rule_residual: malformed trajectory");

  const double h0 = norm(triple, traj.states[0], NormKind::H);
  double integral = 0.0;
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double dt = traj.grid[j + 1] - traj.grid[j];
    const DenseVector<Scalar> mid =
        ((traj.states[j] + traj.states[j + 1]) * Scalar(0.5)).eval();
    const DenseVector<Scalar> gd = triple.gram_H * traj.derivative[j];
    integral += 2.0 * dt * Eigen::numext::real((mid.adjoint() * gd).value());
    const double hj = norm(triple, traj.states[j + 1], NormKind::H);
    worst = std::max(worst, std::abs(hj * hj - h0 * h0 - integral));
  }
  return worst;
}

}  // namespace evoform
