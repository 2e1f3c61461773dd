#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "evoform/averaging.hpp"
#include "evoform/form_family.hpp"
#include "evoform/trajectory.hpp"
#include "evoform/types.hpp"

namespace evoform {

/// One-step theta scheme for u' + A(t) u = f over the source's skeleton, each
/// skeleton interval refined into steps_per_interval uniform steps:
///
///   (gram_H + theta dt A(t_s)) u_{j+1}
///       = (gram_H - (1-theta) dt A(t_s)) u_j + dt gram_H f(t_s),
///   t_s = t_j + theta dt.
///
/// theta = 1/2 is Crank-Nicolson (second order), theta = 1 implicit Euler.
/// theta below 1/2 is rejected: the unconditional H-contractivity of the
/// scheme for coercive symmetric forms holds on [1/2, 1] only.
///
/// Skeleton nodes land on the grid exactly (assigned, not accumulated), so a
/// driving approximant's cells are never straddled by a step. For
/// piecewise-constant sources the system matrix is factored once per cell.
template <typename Scalar>
Trajectory<Scalar> solve_theta(const EvolutionProblem<Scalar>& problem,
                               int steps_per_interval, double theta) {
  if (problem.triple == nullptr)
    throw std::invalid_argument("solve_theta: problem has no triple");
  if (!(theta >= 0.5) || !(theta <= 1.0))
    throw std::invalid_argument("solve_theta: theta must lie in [1/2, 1]");
  if (steps_per_interval < 1)
    throw std::invalid_argument("solve_theta: steps_per_interval must be positive");
  const auto& triple = *problem.triple;
  const auto& skel = problem.source.skeleton;
  if (skel.size() < 2)
    throw std::invalid_argument("solve_theta: source skeleton needs at least two nodes");
  if (problem.initial_u0.size() != triple.dim)
    throw std::invalid_argument("solve_theta: initial value has wrong dimension");
  if (!problem.initial_u0.allFinite())
    throw std::invalid_argument("solve_theta: initial value is not finite");

  Trajectory<Scalar> traj;
  traj.problem_tag = problem.source.tag;
  const std::size_t total_steps = (skel.size() - 1) * steps_per_interval;
  traj.grid.reserve(total_steps + 1);
  traj.states.reserve(total_steps + 1);
  traj.grid.push_back(skel.front());
  traj.states.push_back(problem.initial_u0);

  Eigen::LLT<DenseMatrix<Scalar>> factor;
  DenseMatrix<Scalar> rhs_matrix;
  DenseVector<Scalar> u = problem.initial_u0;

  for (std::size_t cell = 0; cell + 1 < skel.size(); ++cell) {
    const double a = skel[cell], b = skel[cell + 1];
    const double dt = (b - a) / steps_per_interval;
    if (!(dt > 0.0))
      throw std::invalid_argument("solve_theta: skeleton must be strictly increasing");
    bool cell_factored = false;
    for (int i = 0; i < steps_per_interval; ++i) {
      const double t_j = a + i * dt;
      const double t_s = t_j + theta * dt;
      if (!cell_factored || !problem.source.piecewise_constant) {
        const DenseMatrix<Scalar> A = problem.source.eval(t_s);
        if (A.rows() != triple.dim || A.cols() != triple.dim)
          throw std::invalid_argument("solve_theta: source matrix has wrong shape");
        factor.compute(triple.gram_H + Scalar(theta * dt) * A);
        if (factor.info() != Eigen::Success)
          throw std::runtime_error("solve_theta: singular system at t = " + std::to_string(t_s));
        rhs_matrix = triple.gram_H - Scalar((1.0 - theta) * dt) * A;
        cell_factored = true;
      }
      DenseVector<Scalar> rhs = rhs_matrix * u;
      if (problem.rhs) {
        const DenseVector<Scalar> f = problem.rhs(t_s);
        if (f.size() != triple.dim)
          throw std::invalid_argument("solve_theta: rhs vector has wrong dimension");
        rhs += Scalar(dt) * (triple.gram_H * f);
      }
      u = factor.solve(rhs);
      if (!u.allFinite())
        throw std::runtime_error("solve_theta: state became non-finite at t = " +
                                 std::to_string(t_j + dt));
      traj.grid.push_back(i + 1 == steps_per_interval ? b : t_j + dt);
      traj.states.push_back(u);
    }
  }
  rebuild_derivative(traj);
  return traj;
}

/// Averages the family over the subdivision and solves with the chosen
/// approximant driving the theta scheme. The trajectory grid contains every
/// subdivision node exactly.
template <typename Scalar>
Trajectory<Scalar> solve_approximate(
    const FormFamily<Scalar>& family, const Subdivision& sub,
    ApproximantKind kind, const std::function<DenseVector<Scalar>(double)>& f,
    const DenseVector<Scalar>& u0, const GelfandTriple<Scalar>& triple,
    int steps_per_interval = 64, double theta = 0.5,
    const QuadratureSpec& quad = {}) {
  const AveragedFamily<Scalar> av = average(family, sub, quad);
  return solve_approximate(av, kind, f, u0, triple, steps_per_interval, theta);
}

template <typename Scalar>
Trajectory<Scalar> solve_approximate(
    const AveragedFamily<Scalar>& av, ApproximantKind kind,
    const std::function<DenseVector<Scalar>(double)>& f,
    const DenseVector<Scalar>& u0, const GelfandTriple<Scalar>& triple,
    int steps_per_interval = 64, double theta = 0.5) {
  EvolutionProblem<Scalar> problem;
  AveragedFamily<Scalar> copy = av;
  if (kind == ApproximantKind::Step) {
    problem.source.eval = [copy](double t) { return DenseMatrix<Scalar>(eval_step(copy, t)); };
    problem.source.piecewise_constant = true;
  } else {
    problem.source.eval = [copy](double t) { return eval_linear(copy, t); };
    problem.source.piecewise_constant = false;
  }
  problem.source.skeleton = av.subdivision.nodes();
  problem.source.tag = std::string(kind_name(kind)) + " n=" +
                       std::to_string(av.subdivision.n_intervals);
  problem.rhs = f;
  problem.initial_u0 = u0;
  problem.triple = &triple;
  return solve_theta(problem, steps_per_interval, theta);
}

}  // namespace evoform
