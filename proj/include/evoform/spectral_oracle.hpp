#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "evoform/gelfand_triple.hpp"
#include "evoform/scalar_coefficient.hpp"
#include "evoform/trajectory.hpp"
#include "evoform/types.hpp"

namespace evoform {

/// Separable operator family A(t) = c(t) * base with a Hermitian PSD base and
/// a coefficient whose antiderivative is exactly known. Every scalar-driven
/// scenario carries this payload, which is what makes an exact reference
/// solution available.
template <typename Scalar>
struct SeparableForm {
  ScalarCoefficient coeff;
  DenseMatrix<Scalar> base;
};

namespace detail {

// Adaptive Simpson for a vector integrand, refined until the max-norm error
// estimate is below tol. Integrands here are smooth between the breakpoints
// the caller split at, so the recursion stays shallow.
template <typename Scalar>
void adaptive_simpson(const std::function<DenseVector<Scalar>(double)>& f,
                      double a, double b, const DenseVector<Scalar>& fa,
                      const DenseVector<Scalar>& fm, const DenseVector<Scalar>& fb,
                      const DenseVector<Scalar>& whole, double tol, int depth,
                      DenseVector<Scalar>& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const DenseVector<Scalar> flm = f(lm), frm = f(rm);
  const DenseVector<Scalar> left = ((b - a) / 12.0) * (fa + Scalar(4.0) * flm + fm);
  const DenseVector<Scalar> right = ((b - a) / 12.0) * (fm + Scalar(4.0) * frm + fb);
  const DenseVector<Scalar> delta = left + right - whole;
  if (depth <= 0 || delta.template lpNorm<Eigen::Infinity>() <= 15.0 * tol) {
    out += left + right + delta / Scalar(15.0);
    return;
  }
  adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

template <typename Scalar>
DenseVector<Scalar> integrate_adaptive(
    const std::function<DenseVector<Scalar>(double)>& f, double a, double b,
    double tol, Index dim) {
  DenseVector<Scalar> out = DenseVector<Scalar>::Zero(dim);
  if (!(b > a)) return out;
  const DenseVector<Scalar> fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const DenseVector<Scalar> whole = ((b - a) / 6.0) * (fa + Scalar(4.0) * fm + fb);
  adaptive_simpson<Scalar>(f, a, b, fa, fm, fb, whole, tol, 24, out);
  return out;
}

}  // namespace detail

/// Exact-in-space solution of u' + c(t) base u = f over the triple, evaluated
/// on the given output grid. Diagonalizes base phi = mu gram_H phi once; each
/// mode then decays through the exact antiderivative C,
///
///   u_j(t) = e^{-mu_j (C(t)-C(0))} u0_j
///            + int_0^t e^{-mu_j (C(t)-C(s))} f_j(s) ds,
///
/// with the Duhamel term advanced incrementally per grid step by adaptive
/// quadrature (absolute tolerance 1e-10 per step, split at coefficient
/// jumps). Time discretization error therefore never enters the states; only
/// quadrature of the load does, and only when f is nonzero.
template <typename Scalar>
Trajectory<Scalar> solve_spectral_oracle(
    const SeparableForm<Scalar>& separable, const GelfandTriple<Scalar>& triple,
    const std::function<DenseVector<Scalar>(double)>& f,
    const DenseVector<Scalar>& u0, const std::vector<double>& output_grid) {
  if (separable.base.rows() != triple.dim || separable.base.cols() != triple.dim)
    throw std::invalid_argument("solve_spectral_oracle: base has wrong shape");
  if (detail::hermitian_defect(separable.base) > 1e-12)
    throw std::invalid_argument("solve_spectral_oracle: base is not Hermitian");
  if (u0.size() != triple.dim)
    throw std::invalid_argument("solve_spectral_oracle: initial value has wrong dimension");
  if (output_grid.size() < 2)
    throw std::invalid_argument("solve_spectral_oracle: output grid needs at least two nodes");
  for (std::size_t j = 0; j + 1 < output_grid.size(); ++j)
    if (!(output_grid[j] < output_grid[j + 1]))
      throw std::invalid_argument("solve_spectral_oracle: output grid must be strictly increasing");
  if (output_grid.front() < 0.0 || output_grid.back() > separable.coeff.horizon() * (1.0 + 1e-12))
    throw std::invalid_argument("solve_spectral_oracle: output grid outside the coefficient's span");

  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(
      separable.base, triple.gram_H);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("solve_spectral_oracle: eigensolver failed");
  const auto& mu = solver.eigenvalues();     // real, ascending
  const DenseMatrix<Scalar>& Phi = solver.eigenvectors();  // Phi^H gram_H Phi = I
  const Index dim = triple.dim;

  const auto& coeff = separable.coeff;
  auto C = [&coeff](double t) { return coeff.antiderivative(t); };

  // Modal coordinates of a state vector x: Phi^H gram_H x.
  const DenseMatrix<Scalar> to_modal = (Phi.adjoint() * triple.gram_H).eval();

  DenseVector<Scalar> a = to_modal * u0;              // decaying modal state
  DenseVector<Scalar> duhamel = DenseVector<Scalar>::Zero(dim);

  Trajectory<Scalar> traj;
  traj.problem_tag = "spectral_oracle";
  traj.grid = output_grid;
  traj.states.reserve(output_grid.size());

  auto emit = [&](double /*t*/) {
    traj.states.push_back(Phi * (a + duhamel));
  };

  double t_prev = output_grid.front();
  emit(t_prev);
  for (std::size_t k = 1; k < output_grid.size(); ++k) {
    const double t_next = output_grid[k];
    const double dC = C(t_next) - C(t_prev);
    const DenseVector<double> decay =
        (-dC * mu.array()).exp().matrix().template cast<double>();
    for (Index j = 0; j < dim; ++j) {
      a(j) *= Scalar(decay(j));
      duhamel(j) *= Scalar(decay(j));
    }
    if (f) {
      auto integrand = [&](double s) -> DenseVector<Scalar> {
        const DenseVector<Scalar> fm = to_modal * f(s);
        const double Cs = C(s);
        DenseVector<Scalar> v(dim);
        for (Index j = 0; j < dim; ++j)
          v(j) = Scalar(std::exp(-mu(j) * (C(t_next) - Cs))) * fm(j);
        return v;
      };
      // Split the step at coefficient jumps so each panel is smooth.
      std::vector<double> cuts{t_prev};
      for (double tj : coeff.jump_times())
        if (tj > t_prev && tj < t_next) cuts.push_back(tj);
      cuts.push_back(t_next);
      for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
        duhamel += detail::integrate_adaptive<Scalar>(integrand, cuts[p], cuts[p + 1],
                                                      1e-10, dim);
    }
    emit(t_next);
    t_prev = t_next;
  }
  rebuild_derivative(traj);
  return traj;
}

}  // namespace evoform
