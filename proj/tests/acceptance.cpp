// Acceptance gate: one line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "evoform/apriori.hpp"
#include "evoform/averaging.hpp"
#include "evoform/convergence_study.hpp"
#include "evoform/energy_identity.hpp"
#include "evoform/gelfand_triple.hpp"
#include "evoform/mr_norms.hpp"
#include "evoform/random.hpp"
#include "evoform/registry.hpp"
#include "evoform/scenarios.hpp"
#include "evoform/spectral_oracle.hpp"
#include "evoform/theta_scheme.hpp"
#include "evoform/verify.hpp"

using evoform::ApproximantKind;
using evoform::DenseVector;
using evoform::NormKind;
using evoform::Subdivision;

using Vec = DenseVector<double>;
using Fn = std::function<Vec(double)>;

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

bool report(int index, bool ok, const std::string& name, const std::string& detail) {
  std::printf("[%s] criterion %d: %-24s %s\n", ok ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  return ok;
}

// Largest step-to-step growth factor and total decrease of an error sequence.
struct DecreaseStats {
  double worst_step = 0.0;   // max e[i]/e[i-1]
  double total = 0.0;        // e.back()/e.front()
};

DecreaseStats decrease_stats(const std::vector<double>& errors) {
  DecreaseStats stats;
  for (std::size_t i = 1; i < errors.size(); ++i)
    stats.worst_step = std::max(stats.worst_step, errors[i] / errors[i - 1]);
  stats.total = errors.back() / errors.front();
  return stats;
}

}  // namespace

int main() {
  const auto triple = evoform::build_fem_triple<double>(15);
  const Vec mode1 = evoform::eigenmode(triple, triple.gram_V, 1);
  const Fn no_load{};
  bool all_ok = true;

  // 1: the theta scheme and the modal reference solve the same problem.
  {
    const auto sc = evoform::make_scenario("separable_spectral", {}, triple);
    evoform::EvolutionProblem<double> problem;
    problem.source = evoform::make_source(sc.family);
    problem.initial_u0 = mode1;
    problem.triple = &triple;
    const auto traj = evoform::solve_theta(problem, 4096, 0.5);
    const auto oracle =
        evoform::solve_spectral_oracle(*sc.separable, triple, no_load, mode1, traj.grid);
    double sup_h = 0.0;
    for (std::size_t j = 0; j < traj.grid.size(); ++j)
      sup_h = std::max(sup_h, evoform::norm(triple,
                                            (traj.states[j] - oracle.states[j]).eval(),
                                            NormKind::H));
    all_ok &= report(1, sup_h < 1e-5, "oracle_equivalence",
                     "sup_H=" + fmt(sup_h) + " limit=1.000e-05");
  }

  // 2: integrated operator-approximation errors decrease for both kinds.
  {
    const std::vector<int> n_list = {4, 8, 16, 32, 64, 128};
    const auto smooth = evoform::make_scenario("linear_coeff", {}, triple);
    // Jump placed at 1/3 so no dyadic grid ever aligns with it; the probe
    // weight vanishes at the jump, keeping the discontinuity integrable.
    const auto rough = evoform::scenario_jump<double>({1.0 / 3.0}, {1.0, 3.0}, 0.0,
                                                      1.0, triple);
    const Vec x = mode1;
    const Fn flat = [x](double) { return x; };
    const Fn vanishing = [x](double t) { return Vec(((t - 1.0 / 3.0) * x).eval()); };

    double worst_step = 0.0, worst_total = 0.0;
    for (ApproximantKind kind : {ApproximantKind::Step, ApproximantKind::Linear}) {
      for (int which = 0; which < 2; ++which) {
        const auto& family = which == 0 ? smooth.family : rough.family;
        const auto& weight = which == 0 ? flat : vanishing;
        const auto errors =
            evoform::probe_l2_convergence(family, weight, n_list, kind, triple);
        const auto stats = decrease_stats(errors);
        worst_step = std::max(worst_step, stats.worst_step);
        worst_total = std::max(worst_total, stats.total);
      }
    }
    const bool ok = worst_step <= 1.05 && worst_total < 0.1;
    all_ok &= report(2, ok, "operator_approximation",
                     "worst_step=" + fmt(worst_step) + " (limit 1.05) total=" +
                         fmt(worst_total) + " (limit 1e-01)");
  }

  // 3: trajectory errors against the oracle shrink in the MR(V,V') metric.
  std::vector<evoform::ConvergenceRecord> sweep_records;
  {
    const std::vector<int> n_list = {4, 8, 16, 32, 64};
    double worst_step = 0.0, worst_total = 0.0;
    const auto smooth = evoform::make_scenario("linear_coeff", {}, triple);
    const auto rough = evoform::make_scenario("jump_coeff", {}, triple);
    const struct {
      const evoform::Scenario<double>* scenario;
      ApproximantKind kind;
    } studies[] = {{&smooth, ApproximantKind::Linear}, {&rough, ApproximantKind::Step}};
    for (const auto& study : studies) {
      const auto records = evoform::convergence_study(
          *study.scenario, no_load, mode1, study.kind, n_list, triple,
          evoform::ReferenceKind::SpectralOracle);
      std::vector<double> errors;
      for (const auto& record : records) errors.push_back(record.mrVVdual_error);
      const auto stats = decrease_stats(errors);
      worst_step = std::max(worst_step, stats.worst_step);
      worst_total = std::max(worst_total, stats.total);
      sweep_records.insert(sweep_records.end(), records.begin(), records.end());
    }
    const bool ok = worst_step <= 1.05 && worst_total < 1.0 / 8.0;
    all_ok &= report(3, ok, "mr_convergence",
                     "worst_step=" + fmt(worst_step) + " (limit 1.05) total=" +
                         fmt(worst_total) + " (limit 1.25e-01)");
  }

  // 4: the integrated energy balance closes on every sweep run and tightens
  // quadratically with the inner resolution.
  {
    double worst = 0.0;
    for (const auto& record : sweep_records)
      worst = std::max(worst, record.energy_residual);

    const auto smooth = evoform::make_scenario("linear_coeff", {}, triple);
    const auto av = evoform::average(smooth.family, Subdivision(1.0, 4));
    const auto traj = evoform::solve_approximate(av, ApproximantKind::Linear, no_load,
                                                 mode1, triple, 16, 0.5);
    const double coarse =
        evoform::energy_identity_residual(traj, av, ApproximantKind::Linear, triple, 8);
    const double fine =
        evoform::energy_identity_residual(traj, av, ApproximantKind::Linear, triple, 16);
    const double ratio = coarse / fine;
    const bool ok = worst < 1e-6 && ratio >= 1.8 && coarse > 1e-14;
    all_ok &= report(4, ok, "energy_identity",
                     "worst=" + fmt(worst) + " (limit 1e-06) halving_ratio=" +
                         fmt(ratio) + " (floor 1.8)");
  }

  // 5: averaged moduli dominate form increments on random samples.
  {
    evoform::SeededRng rng(2026);
    double worst = -1.0;
    for (const char* name : {"linear_coeff", "jump_coeff", "staircase_bv"}) {
      const auto sc = evoform::make_scenario(name, {}, triple);
      for (int n : {4, 16, 64}) {
        const auto av = evoform::average(sc.family, Subdivision(sc.family.horizon, n));
        for (int i = 0; i < 1000; ++i) {
          double s = rng.uniform(0.0, sc.family.horizon);
          double t = rng.uniform(0.0, sc.family.horizon);
          if (s > t) std::swap(s, t);
          const Vec u = rng.gaussian_vector<double>(triple.dim);
          const Vec v = rng.gaussian_vector<double>(triple.dim);
          const double delta_a = std::abs(
              (v.adjoint() * ((evoform::eval_linear(av, t) - evoform::eval_linear(av, s)) * u))
                  .value());
          const double delta_g =
              evoform::eval_scalar_linear(av, t) - evoform::eval_scalar_linear(av, s);
          const double scale = evoform::norm(triple, u, NormKind::V) *
                               evoform::norm(triple, v, NormKind::V);
          worst = std::max(worst, delta_a / scale - delta_g);
        }
      }
    }
    all_ok &= report(5, worst <= 1e-10, "bv_transfer",
                     "worst_defect=" + fmt(worst) + " limit=1.000e-10");
  }

  // 6: the a-priori chain holds uniformly in the subdivision count.
  {
    bool ok = true;
    double utilization = 0.0;
    const auto stairs = evoform::make_scenario("staircase_bv", {}, triple);
    for (int n : {4, 16, 64, 256}) {
      const auto av = evoform::average(stairs.family, Subdivision(1.0, n));
      const auto traj = evoform::solve_approximate(av, ApproximantKind::Linear,
                                                   no_load, mode1, triple, 64, 0.5);
      const auto rep = evoform::apriori_report(traj, av, stairs.family, no_load, triple);
      ok = ok && rep.ok();
      utilization = std::max({utilization, rep.supV_sq / rep.supV_bound,
                              rep.h1_sq / rep.h1_bound});
    }
    for (const auto& record : sweep_records)
      ok = ok && record.apriori_supV_ok && record.apriori_h1_ok;
    all_ok &= report(6, ok, "apriori_chain",
                     "max_utilization=" + fmt(utilization) + " limit=1");
  }

  // 7: removing the coercivity shift and putting it back is invisible.
  {
    const auto sc = evoform::make_scenario("linear_coeff", {{"omega", "1"}}, triple);
    evoform::EvolutionProblem<double> direct;
    direct.source = evoform::make_source(sc.family);
    direct.initial_u0 = mode1;
    direct.triple = &triple;
    const auto u_direct = evoform::solve_theta(direct, 2048, 0.5);

    const auto shift = evoform::shift_omega(sc.family, triple);
    evoform::EvolutionProblem<double> moved;
    moved.source = evoform::make_source(shift.shifted);
    moved.initial_u0 = mode1;
    moved.triple = &triple;
    const auto u_back = shift.reconstruct(evoform::solve_theta(moved, 2048, 0.5));

    const double gap = evoform::mr_distance(u_direct, u_back, triple).l2_H;
    all_ok &= report(7, gap < 2e-5, "omega_shift_roundtrip",
                     "l2_H_gap=" + fmt(gap) + " limit=2.000e-05");
  }

  // 8: boundary conventions are exact, not merely accurate.
  {
    const auto sc = evoform::make_scenario("constant", {}, triple);
    const auto av4 = evoform::average(sc.family, Subdivision(1.0, 4));
    bool ok = (evoform::eval_step(av4, 1.0) - av4.averages[3]).cwiseAbs().maxCoeff() ==
              0.0;

    const auto av1 = evoform::average(sc.family, Subdivision(1.0, 1));
    for (double t : {0.0, 0.3, 1.0})
      ok = ok && (evoform::eval_linear(av1, t) - evoform::eval_step(av1, t))
                         .cwiseAbs()
                         .maxCoeff() == 0.0;

    evoform::EvolutionProblem<double> direct;
    direct.source = evoform::make_source(sc.family);
    direct.initial_u0 = mode1;
    direct.triple = &triple;
    const auto u_direct = evoform::solve_theta(direct, 256, 0.5);
    double worst_field = 0.0;
    for (ApproximantKind kind : {ApproximantKind::Step, ApproximantKind::Linear}) {
      const auto u_kind =
          evoform::solve_approximate(av4, kind, no_load, mode1, triple, 64, 0.5);
      const auto dist = evoform::mr_distance(u_kind, u_direct, triple);
      worst_field = std::max({worst_field, dist.l2_V, dist.l2_H, dist.h1_H,
                              dist.l2_Vdual_deriv, dist.sup_H, dist.sup_V,
                              evoform::mr_vvdual(dist)});
    }
    ok = ok && worst_field == 0.0;
    all_ok &= report(8, ok, "degenerate_conventions",
                     "worst_error=" + fmt(worst_field) + " limit=0 (exact)");
  }

  // 9: the property suite is bytewise reproducible.
  {
    const auto first = evoform::run_verify(0);
    const auto second = evoform::run_verify(0);
    const bool ok = first.all_passed && second.all_passed &&
                    first.report == second.report;
    all_ok &= report(9, ok, "verify_determinism",
                     std::string("passes=") + (first.all_passed ? "true" : "false") +
                         " byte_identical=" +
                         (first.report == second.report ? "true" : "false"));
  }

  std::printf("acceptance: %s\n", all_ok ? "all criteria satisfied" : "FAILURES present");
  return all_ok ? 0 : 1;
}
