#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "evoform/averaging.hpp"
#include "evoform/form_family.hpp"
#include "evoform/gelfand_triple.hpp"
#include "evoform/mr_norms.hpp"
#include "evoform/trajectory.hpp"
#include "evoform/types.hpp"

namespace evoform {

/// Outcome of the a-priori estimate chain for one approximate solve. The
/// three checks, in the order the chain derives them:
///   (i)  rate budget: the integrated rate of the averaged modulus never
///        exceeds the declared total variation, int_0^T gdot <= g(T);
///   (ii) sup bound: sup_t ||u(t)||_V^2 <= (1/alpha)[M ||u0||_V^2 +
///        ||f||_{L2(0,T;H)}^2] exp(g(T)/alpha);
///   (iii) H1 bound: ||u||_{H1(0,T;H)}^2 <= c [||u0||_V^2 + ||f||^2] with
///        c = c1 (1 + 2 T^2) + 2 T c_H^2 and
///        c1 = max(M,1) (1 + (g(T)/alpha) exp(g(T)/alpha)),
/// assembled from the declared constants only, so the same c serves every
/// subdivision; uniformity of (iii) across refinements is exactly the
/// weak-compactness prerequisite the estimate chain exists to supply.
struct AprioriReport {
  bool scalar_rate_budget_ok = false;
  bool supV_bound_ok = false;
  bool h1_bound_ok = false;

  double alpha = 0.0, bound_M = 0.0, embedding = 0.0, g_total = 0.0, horizon = 0.0;
  double c1 = 0.0, c_h1 = 0.0;
  double data_norm_sq = 0.0;  // ||u0||_V^2 + ||f||_{L2(0,T;H)}^2

  double rate_integral = 0.0, rate_budget = 0.0;
  double supV_sq = 0.0, supV_bound = 0.0;
  double h1_sq = 0.0, h1_bound = 0.0;

  bool ok() const { return scalar_rate_budget_ok && supV_bound_ok && h1_bound_ok; }
};

/// Evaluates the chain for a trajectory of the averaged problem. Requires a
/// symmetric family with a declared modulus and omega = 0 (shift first
/// otherwise). The load's L2(0,T;H) norm is integrated by midpoint on the
/// trajectory's own intervals, exact for loads constant per skeleton cell.
/// Pass precomputed norms when the caller already has them.
template <typename Scalar>
AprioriReport apriori_report(const Trajectory<Scalar>& traj,
                             const AveragedFamily<Scalar>& av,
                             const FormFamily<Scalar>& family,
                             const std::function<DenseVector<Scalar>(double)>& f,
                             const GelfandTriple<Scalar>& triple,
                             const MrNorms* precomputed = nullptr) {
  if (!family.bv_modulus)
    throw std::invalid_argument("apriori_report: family has no variation modulus");
  if (family.omega != 0.0)
    throw std::invalid_argument("apriori_report: omega must be zero (apply the shift first)");
  if (!family.symmetric)
    throw std::invalid_argument("apriori_report: family must be symmetric");
  if (!av.scalar_averages)
    throw std::invalid_argument("apriori_report: averages carry no scalar modulus");

  AprioriReport rep;
  rep.alpha = family.alpha;
  rep.bound_M = family.bound_M;
  rep.embedding = embedding_constant(triple);
  rep.horizon = family.horizon;
  rep.g_total = (*family.bv_modulus)(family.horizon);

  const MrNorms norms = precomputed ? *precomputed : mr_norms(traj, triple);

  double f_sq = 0.0;
  if (f) {
    for (std::size_t j = 0; j + 1 < traj.grid.size(); ++j) {
      const double dt = traj.grid[j + 1] - traj.grid[j];
      const double nf =
          norm(triple, f(0.5 * (traj.grid[j] + traj.grid[j + 1])), NormKind::H);
      f_sq += dt * nf * nf;
    }
  }
  const double u0V = norm(triple, traj.states.front(), NormKind::V);
  rep.data_norm_sq = u0V * u0V + f_sq;

  rep.rate_integral = scalar_rate_integral(av);
  rep.rate_budget = rep.g_total;
  rep.scalar_rate_budget_ok = rep.rate_integral <= rep.rate_budget + 1e-10;

  const double grow = std::exp(rep.g_total / rep.alpha);
  rep.supV_sq = norms.sup_V * norms.sup_V;
  rep.supV_bound =
      (1.0 / rep.alpha) * (rep.bound_M * u0V * u0V + f_sq) * grow;
  rep.supV_bound_ok = rep.supV_sq <= rep.supV_bound * (1.0 + 1e-8);

  const double T = rep.horizon;
  rep.c1 = std::max(rep.bound_M, 1.0) * (1.0 + (rep.g_total / rep.alpha) * grow);
  rep.c_h1 = rep.c1 * (1.0 + 2.0 * T * T) + 2.0 * T * rep.embedding * rep.embedding;
  rep.h1_sq = norms.h1_H * norms.h1_H;
  rep.h1_bound = rep.c_h1 * rep.data_norm_sq;
  rep.h1_bound_ok = rep.h1_sq <= rep.h1_bound * (1.0 + 1e-10);

  return rep;
}

}  // namespace evoform
