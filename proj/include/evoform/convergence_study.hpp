#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "evoform/apriori.hpp"
#include "evoform/averaging.hpp"
#include "evoform/energy_identity.hpp"
#include "evoform/form_family.hpp"
#include "evoform/gelfand_triple.hpp"
#include "evoform/mr_norms.hpp"
#include "evoform/scenarios.hpp"
#include "evoform/spectral_oracle.hpp"
#include "evoform/theta_scheme.hpp"
#include "evoform/types.hpp"

namespace evoform {

enum class ReferenceKind { SpectralOracle, FineGrid };

/// One refinement level of a sweep. wall_seconds is measurement, not data:
/// every other field is a deterministic function of the inputs.
struct ConvergenceRecord {
  ApproximantKind kind = ApproximantKind::Step;
  int n_intervals = 0;
  double mesh = 0.0;
  double mrVVdual_error = 0.0;
  double l2V_error = 0.0;
  double l2H_error = 0.0;
  double h1H_norm = 0.0;
  double supV_norm = 0.0;
  double energy_residual = 0.0;
  bool apriori_supV_ok = false;
  bool apriori_h1_ok = false;
  double wall_seconds = 0.0;
};

struct StudyOptions {
  int steps_per_interval = 64;
  double theta = 0.5;
  QuadratureSpec quad{};
  int fine_reference_factor = 8;  // reference refinement over max(n_list)
  int max_reference_steps = 16384;
  int threads = 1;
};

/// Sweeps one approximant kind over doubling subdivision counts and measures
/// each approximate solution against a reference for the unapproximated
/// problem: the modal closed form when the scenario is separable, otherwise
/// one fine direct solve (computed once, at fine_reference_factor times the
/// largest n, capped at max_reference_steps total). Rows come back in n_list
/// order; entries are independent and run on opts.threads workers, with
/// results identical regardless of thread count.
template <typename Scalar>
std::vector<ConvergenceRecord> convergence_study(
    const Scenario<Scalar>& scenario,
    const std::function<DenseVector<Scalar>(double)>& f,
    const DenseVector<Scalar>& u0, ApproximantKind kind,
    const std::vector<int>& n_list, const GelfandTriple<Scalar>& triple,
    ReferenceKind reference, const StudyOptions& opts = {}) {
  if (n_list.empty())
    throw std::invalid_argument("convergence_study: empty n_list");
  for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
    if (n_list[i] >= n_list[i + 1])
      throw std::invalid_argument("convergence_study: n_list must be strictly increasing");
  const FormFamily<Scalar>& family = scenario.family;
  if (family.omega != 0.0)
    throw std::invalid_argument("convergence_study: omega must be zero (apply the shift first)");
  if (reference == ReferenceKind::SpectralOracle && !scenario.separable)
    throw std::invalid_argument(
        "convergence_study: scenario is not separable, no closed-form reference");

  // Fine-grid reference: one direct solve of the unaveraged problem on the
  // family's own skeleton, steps divided so the total honors the cap.
  Trajectory<Scalar> fine_ref;
  if (reference == ReferenceKind::FineGrid) {
    EvolutionProblem<Scalar> problem;
    problem.source = make_source(family);
    problem.rhs = f;
    problem.initial_u0 = u0;
    problem.triple = &triple;
    const int n_cells = static_cast<int>(problem.source.skeleton.size()) - 1;
    const int target = std::min(
        opts.max_reference_steps,
        opts.fine_reference_factor * n_list.back() * opts.steps_per_interval);
    const int spi = std::max(1, target / std::max(1, n_cells));
    fine_ref = solve_theta(problem, spi, opts.theta);
    fine_ref.problem_tag = "fine_reference";
  }

  std::vector<ConvergenceRecord> records(n_list.size());

  auto run_one = [&](std::size_t i) {
    const auto t_start = std::chrono::steady_clock::now();
    const int n = n_list[i];
    Subdivision sub(family.horizon, n);
    const AveragedFamily<Scalar> av = average(family, sub, opts.quad);
    const Trajectory<Scalar> u_n = solve_approximate(
        av, kind, f, u0, triple, opts.steps_per_interval, opts.theta);

    Trajectory<Scalar> ref;
    if (reference == ReferenceKind::SpectralOracle)
      ref = solve_spectral_oracle(*scenario.separable, triple, f, u0, u_n.grid);

    const MrNorms dist =
        mr_distance(u_n, reference == ReferenceKind::SpectralOracle ? ref : fine_ref,
                    triple);
    const MrNorms own = mr_norms(u_n, triple);
    const AprioriReport apriori = apriori_report(u_n, av, family, f, triple, &own);

    ConvergenceRecord rec;
    rec.kind = kind;
    rec.n_intervals = n;
    rec.mesh = family.horizon / static_cast<double>(n);
    rec.l2V_error = dist.l2_V;
    rec.l2H_error = dist.l2_H;
    rec.mrVVdual_error = mr_vvdual(dist);
    rec.h1H_norm = own.h1_H;
    rec.supV_norm = own.sup_V;
    rec.energy_residual = energy_identity_residual(u_n, av, kind, triple);
    rec.apriori_supV_ok = apriori.supV_bound_ok;
    rec.apriori_h1_ok = apriori.h1_bound_ok;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    records[i] = rec;
  };

  const std::size_t stride =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, opts.threads)),
                            n_list.size());
  if (stride <= 1) {
    for (std::size_t i = 0; i < n_list.size(); ++i) run_one(i);
  } else {
    // Static round-robin assignment keeps the work split deterministic.
    std::vector<std::thread> pool;
    pool.reserve(stride);
    for (std::size_t w = 0; w < stride; ++w)
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < n_list.size(); i += stride) run_one(i);
      });
    for (auto& th : pool) th.join();
  }
  return records;
}

}  // namespace evoform
