#include "evoform/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "evoform/apriori.hpp"
#include "evoform/averaging.hpp"
#include "evoform/energy_identity.hpp"
#include "evoform/form_family.hpp"
#include "evoform/gelfand_triple.hpp"
#include "evoform/mr_norms.hpp"
#include "evoform/random.hpp"
#include "evoform/registry.hpp"
#include "evoform/scenarios.hpp"
#include "evoform/spectral_oracle.hpp"
#include "evoform/theta_scheme.hpp"
#include "evoform/trajectory.hpp"

namespace evoform {

namespace {

using Vec = DenseVector<double>;
using Mat = DenseMatrix<double>;
using Fn = std::function<Vec(double)>;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

CheckLine bounded(const std::string& name, double worst, double limit,
                  const std::string& extra = "") {
  return {name, worst <= limit, "worst=" + fmt(worst) + " limit=" + fmt(limit) + extra};
}

CheckLine floored(const std::string& name, double ratio, double floor_value,
                  const std::string& extra = "") {
  return {name, ratio >= floor_value,
          "ratio=" + fmt(ratio) + " floor=" + fmt(floor_value) + extra};
}

struct Context {
  unsigned long seed = 0;
  GelfandTriple<double> triple;
  std::vector<Scenario<double>> base;     // registry defaults, omega = 0
  std::vector<Scenario<double>> shifted;  // omega = 1 variants
  Vec mode1;
  Fn no_load;
};

std::uint64_t sub_seed(const Context& ctx, int check) {
  return static_cast<std::uint64_t>(ctx.seed) * 1000u + static_cast<std::uint64_t>(check);
}

const Scenario<double>& find_scenario(const std::vector<Scenario<double>>& list,
                                      const std::string& name) {
  for (const auto& sc : list)
    if (sc.name == name) return sc;
  throw std::logic_error("verify: scenario not in context: " + name);
}

// Operator norm from V to V': largest generalized eigenvalue magnitude of
// D x = lambda gram_V x for Hermitian D.
double op_norm_vdual(const Mat& d, const GelfandTriple<double>& triple) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(
      d, triple.gram_V, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("verify: eigensolver failed in operator norm");
  return std::max(std::abs(solver.eigenvalues().minCoeff()),
                  std::abs(solver.eigenvalues().maxCoeff()));
}

CheckLine check_dual_norm_duality(const Context& ctx) {
  SeededRng rng(sub_seed(ctx, 1));
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    const Vec f = rng.gaussian_vector<double>(ctx.triple.dim);
    const double dual = norm(ctx.triple, f, NormKind::Vdual);
    const Vec maximizer = riesz_representative(ctx.triple, f);
    const double achieved =
        std::abs((maximizer.adjoint() * f).value()) / norm(ctx.triple, maximizer, NormKind::V);
    worst = std::max(worst, std::abs(achieved - dual) / dual);
    for (int k = 0; k < 16; ++k) {
      const Vec x = rng.gaussian_vector<double>(ctx.triple.dim);
      const double ratio =
          std::abs((x.adjoint() * f).value()) / norm(ctx.triple, x, NormKind::V);
      worst = std::max(worst, (ratio - dual) / dual);
    }
  }
  return bounded("dual_norm_duality", worst, 1e-10);
}

CheckLine check_norm_homogeneity(const Context& ctx) {
  SeededRng rng(sub_seed(ctx, 2));
  const double lambdas[] = {2.5, -3.0, 0.125};
  const NormKind kinds[] = {NormKind::V, NormKind::H, NormKind::Vdual};
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    const Vec x = rng.gaussian_vector<double>(ctx.triple.dim);
    for (double lam : lambdas) {
      for (NormKind kind : kinds) {
        const double lhs = norm(ctx.triple, (lam * x).eval(), kind);
        const double rhs = std::abs(lam) * norm(ctx.triple, x, kind);
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
      }
    }
  }
  return bounded("norm_homogeneity", worst, 1e-12);
}

CheckLine check_norm_triangle(const Context& ctx) {
  SeededRng rng(sub_seed(ctx, 3));
  const NormKind kinds[] = {NormKind::V, NormKind::H, NormKind::Vdual};
  double worst = -1.0;
  for (int i = 0; i < 8; ++i) {
    const Vec x = rng.gaussian_vector<double>(ctx.triple.dim);
    const Vec y = rng.gaussian_vector<double>(ctx.triple.dim);
    for (NormKind kind : kinds) {
      const double lhs = norm(ctx.triple, (x + y).eval(), kind);
      const double rhs = norm(ctx.triple, x, kind) + norm(ctx.triple, y, kind);
      worst = std::max(worst, (lhs - rhs) / rhs);
    }
  }
  return bounded("norm_triangle", worst, 1e-12);
}

CheckLine check_embedding_sharpness(const Context& ctx) {
  const double c_h = embedding_constant(ctx.triple);
  const Vec u = embedding_maximizer(ctx.triple);
  const double achieved =
      norm(ctx.triple, u, NormKind::H) / norm(ctx.triple, u, NormKind::V);
  return bounded("embedding_sharpness", std::abs(achieved - c_h) / c_h, 1e-10);
}

void check_scenario_axioms(const Context& ctx, bool inject_fault,
                           std::vector<CheckLine>& lines) {
  struct Item {
    std::string name;
    const FormFamily<double>* family;
    FormFamily<double> owned;
  };
  std::vector<Item> items;
  items.reserve(ctx.base.size() + ctx.shifted.size() + 1);
  for (const auto& sc : ctx.base) items.push_back({sc.name, &sc.family, {}});
  for (const auto& sc : ctx.shifted)
    items.push_back({sc.name + "(omega=1)", &sc.family, {}});
  if (inject_fault) {
    FormFamily<double> bad;
    Mat skew = Mat::Zero(ctx.triple.dim, ctx.triple.dim);
    skew(0, 1) = 1.0;
    const Mat base_m = ctx.triple.gram_V;
    bad.evaluate = [base_m, skew](double) { return Mat(base_m + skew); };
    bad.horizon = 1.0;
    bad.alpha = 0.25;
    bad.bound_M = 16.0;
    bad.symmetric = true;  // the deliberate lie
    items.push_back({"injected_asymmetric", nullptr, std::move(bad)});
    items.back().family = &items.back().owned;
  }

  double worst_axiom = 0.0, worst_bv = 0.0;
  bool all_ok = true;
  std::string failing;
  for (const auto& item : items) {
    const FormFamily<double>& fam = *item.family;
    const AxiomReport rep =
        verify_form_axioms(fam, ctx.triple, 24, 12, sub_seed(ctx, 5));
    const bool ok = axioms_ok(rep, fam);
    all_ok = all_ok && ok;
    const double g_scale =
        fam.bv_modulus ? std::max(1.0, (*fam.bv_modulus)(fam.horizon)) : 1.0;
    const double defects[] = {
        (rep.worst_continuity_ratio - fam.bound_M) / fam.bound_M,
        -rep.worst_coercivity_margin / fam.alpha,
        fam.symmetric ? rep.worst_symmetry_defect : 0.0,
        rep.bv_checked ? rep.worst_bv_defect / g_scale : 0.0};
    worst_axiom = std::max({worst_axiom, defects[0], defects[1], defects[2]});
    if (rep.bv_checked) worst_bv = std::max(worst_bv, defects[3]);
    if (!ok) {
      const char* axis_names[] = {"continuity", "coercivity", "symmetry", "bv"};
      int axis = 0;
      for (int a = 1; a < 4; ++a)
        if (defects[a] > defects[axis]) axis = a;
      failing += " (" + std::string(axis_names[axis]) + " defect " + fmt(defects[axis]) +
                 " in " + item.name + ")";
    }
  }
  CheckLine axioms = bounded("scenario_axioms", worst_axiom, 1e-10, failing);
  axioms.passed = all_ok && axioms.passed;
  lines.push_back(axioms);
  lines.push_back(bounded("scenario_bv_defect", worst_bv, 1e-10));
}

CheckLine check_omega_shift_roundtrip(const Context& ctx) {
  double worst = 0.0;
  for (const auto& sc : ctx.shifted) {
    const FormFamily<double>& fam = sc.family;
    EvolutionProblem<double> direct;
    direct.source = make_source(fam);
    direct.initial_u0 = ctx.mode1;
    direct.triple = &ctx.triple;
    const int cells = static_cast<int>(direct.source.skeleton.size()) - 1;
    const int spi = std::max(1, 2048 / cells);
    const Trajectory<double> u_direct = solve_theta(direct, spi, 0.5);

    const OmegaShift<double> shift = shift_omega(fam, ctx.triple);
    EvolutionProblem<double> moved;
    moved.source = make_source(shift.shifted);
    moved.initial_u0 = ctx.mode1;
    moved.triple = &ctx.triple;
    const Trajectory<double> v = solve_theta(moved, spi, 0.5);
    const Trajectory<double> u_back = shift.reconstruct(v);

    worst = std::max(worst, mr_distance(u_direct, u_back, ctx.triple).l2_H);
  }
  return bounded("omega_shift_roundtrip", worst, 2e-5);
}

CheckLine check_averaging_preserves_axioms(const Context& ctx) {
  double worst = 0.0;
  bool all_ok = true;
  std::string failing;
  for (const char* name : {"linear_coeff", "jump_coeff"}) {
    const Scenario<double>& sc = find_scenario(ctx.base, name);
    const AveragedFamily<double> av =
        average(sc.family, Subdivision(sc.family.horizon, 8));
    for (ApproximantKind kind : {ApproximantKind::Step, ApproximantKind::Linear}) {
      const FormFamily<double> fam = as_form_family(av, kind);
      const AxiomReport rep =
          verify_form_axioms(fam, ctx.triple, 24, 12, sub_seed(ctx, 8));
      const bool ok = axioms_ok(rep, fam);
      all_ok = all_ok && ok;
      if (!ok) failing += std::string(" ") + name + "/" + kind_name(kind);
      worst = std::max({worst,
                        (rep.worst_continuity_ratio - fam.bound_M) / fam.bound_M,
                        -rep.worst_coercivity_margin / fam.alpha,
                        rep.worst_symmetry_defect});
    }
  }
  CheckLine line = bounded("averaging_preserves_axioms", worst, 1e-10, failing);
  line.passed = line.passed && all_ok;
  return line;
}

CheckLine check_linear_node_continuity(const Context& ctx) {
  double worst = 0.0;
  for (const char* name : {"linear_coeff", "jump_coeff"}) {
    const Scenario<double>& sc = find_scenario(ctx.base, name);
    const AveragedFamily<double> av =
        average(sc.family, Subdivision(sc.family.horizon, 8));
    for (int k = 1; k < av.subdivision.n_intervals; ++k) {
      const Mat right = eval_linear(av, av.subdivision.node(k));
      // Left limit: the previous cell's interpolation evaluated at weight 1.
      const double w = 1.0;
      const Mat left = Mat((1.0 - w) * av.averages[k - 1] + w * av.averages[k]);
      worst = std::max(worst, (left - right).cwiseAbs().maxCoeff());
    }
  }
  return bounded("linear_node_continuity", worst, 0.0);
}

CheckLine check_linear_lipschitz(const Context& ctx) {
  SeededRng rng(sub_seed(ctx, 10));
  double worst = 0.0;
  for (const char* name : {"linear_coeff", "jump_coeff"}) {
    const Scenario<double>& sc = find_scenario(ctx.base, name);
    const AveragedFamily<double> av =
        average(sc.family, Subdivision(sc.family.horizon, 8));
    const double mesh = av.subdivision.mesh();
    for (int i = 0; i < 8; ++i) {
      const int k = static_cast<int>(rng.uniform(0.0, av.subdivision.n_intervals));
      const double lo = av.subdivision.node(std::min(k, av.subdivision.n_intervals - 1));
      double s = lo + mesh * rng.uniform();
      double t = lo + mesh * rng.uniform();
      if (s > t) std::swap(s, t);
      if (t - s < 1e-6) continue;
      const Mat diff = eval_linear(av, t) - eval_linear(av, s);
      const double lipschitz = op_norm_vdual(diff, ctx.triple) / (t - s);
      worst = std::max(worst, lipschitz * mesh / (2.0 * av.bound_M));
    }
  }
  return bounded("linear_lipschitz", worst, 1.0 + 1e-10);
}

CheckLine check_bv_transfer(const Context& ctx) {
  SeededRng rng(sub_seed(ctx, 11));
  double worst = 0.0;
  for (const char* name : {"linear_coeff", "jump_coeff", "staircase_bv"}) {
    const Scenario<double>& sc = find_scenario(ctx.base, name);
    for (int n : {4, 16, 64}) {
      const AveragedFamily<double> av =
          average(sc.family, Subdivision(sc.family.horizon, n));
      for (int i = 0; i < 1000; ++i) {
        double s = rng.uniform(0.0, sc.family.horizon);
        double t = rng.uniform(0.0, sc.family.horizon);
        if (s > t) std::swap(s, t);
        const Vec u = rng.gaussian_vector<double>(ctx.triple.dim);
        const Vec v = rng.gaussian_vector<double>(ctx.triple.dim);
        const double da =
            std::abs((v.adjoint() * ((eval_linear(av, t) - eval_linear(av, s)) * u))
                         .value());
        const double dg = eval_scalar_linear(av, t) - eval_scalar_linear(av, s);
        const double scale =
            norm(ctx.triple, u, NormKind::V) * norm(ctx.triple, v, NormKind::V);
        worst = std::max(worst, da / scale - dg);
      }
    }
  }
  return bounded("bv_transfer", worst, 1e-10);
}

CheckLine check_quadrature_consistency(const Context& ctx) {
  auto rel_change = [&](const std::string& name, int n_cells) {
    const Scenario<double>& sc = find_scenario(ctx.base, name);
    const Subdivision sub(sc.family.horizon, n_cells);
    const AveragedFamily<double> coarse = average(sc.family, sub, QuadratureSpec{32});
    const AveragedFamily<double> fine = average(sc.family, sub, QuadratureSpec{64});
    double diff = 0.0, scale = 0.0;
    for (int k = 0; k < n_cells; ++k) {
      diff = std::max(diff,
                      (coarse.averages[k] - fine.averages[k]).cwiseAbs().maxCoeff());
      scale = std::max(scale, coarse.averages[k].cwiseAbs().maxCoeff());
    }
    return diff / scale;
  };
  const double r_const = rel_change("constant", 8);
  const double r_smooth = rel_change("linear_coeff", 8);
  // n = 4 puts the default jump strictly inside a cell, exercising the
  // panel split; alignment keeps it exact to rounding.
  const double r_jump = rel_change("jump_coeff", 4);
  CheckLine line = bounded("quadrature_consistency", std::max(r_smooth, r_jump), 1e-10,
                           " constant=" + fmt(r_const) + " jump=" + fmt(r_jump));
  line.passed = line.passed && r_const == 0.0 && r_jump <= 1e-13;
  return line;
}

CheckLine check_theta_dissipativity(const Context& ctx) {
  SeededRng rng(sub_seed(ctx, 13));
  const Vec u0 = rng.gaussian_vector<double>(ctx.triple.dim);
  double worst = 0.0;
  for (const char* name : {"linear_coeff", "jump_coeff"}) {
    const Scenario<double>& sc = find_scenario(ctx.base, name);
    for (ApproximantKind kind : {ApproximantKind::Step, ApproximantKind::Linear}) {
      for (double theta : {0.5, 1.0}) {
        const Trajectory<double> traj =
            solve_approximate(sc.family, Subdivision(sc.family.horizon, 8), kind,
                              ctx.no_load, u0, ctx.triple, 32, theta);
        worst = std::max(worst, max_h_norm_growth(traj, ctx.triple));
      }
    }
  }
  return bounded("theta_dissipativity", worst, 1e-12);
}

double oracle_gap(const Context& ctx, const Scenario<double>& sc,
                  const Trajectory<double>& traj) {
  const Trajectory<double> ref =
      solve_spectral_oracle(*sc.separable, ctx.triple, ctx.no_load, ctx.mode1, traj.grid);
  double gap = 0.0;
  for (std::size_t j = 0; j < traj.grid.size(); ++j)
    gap = std::max(gap, norm(ctx.triple, (traj.states[j] - ref.states[j]).eval(),
                             NormKind::H));
  return gap;
}

CheckLine check_richardson(const Context& ctx, double theta, double floor_value,
                           const std::string& name) {
  const Scenario<double>& sc = find_scenario(ctx.base, "separable_spectral");
  EvolutionProblem<double> problem;
  problem.source = make_source(sc.family);
  problem.initial_u0 = ctx.mode1;
  problem.triple = &ctx.triple;
  const double gap_coarse = oracle_gap(ctx, sc, solve_theta(problem, 64, theta));
  const double gap_fine = oracle_gap(ctx, sc, solve_theta(problem, 128, theta));
  return floored(name, gap_coarse / gap_fine, floor_value,
                 " coarse=" + fmt(gap_coarse) + " fine=" + fmt(gap_fine));
}

CheckLine check_grid_alignment(const Context& ctx) {
  int missing = 0;
  const Scenario<double>& sc = find_scenario(ctx.base, "linear_coeff");
  const Subdivision sub(sc.family.horizon, 8);
  const Trajectory<double> traj = solve_approximate(
      sc.family, sub, ApproximantKind::Step, ctx.no_load, ctx.mode1, ctx.triple, 16, 0.5);
  for (int k = 0; k <= sub.n_intervals; ++k)
    if (std::find(traj.grid.begin(), traj.grid.end(), sub.node(k)) == traj.grid.end())
      ++missing;

  const Scenario<double>& jump = find_scenario(ctx.base, "jump_coeff");
  EvolutionProblem<double> problem;
  problem.source = make_source(jump.family);
  problem.initial_u0 = ctx.mode1;
  problem.triple = &ctx.triple;
  const Trajectory<double> direct = solve_theta(problem, 32, 0.5);
  for (double tj : jump.family.jump_times)
    if (std::find(direct.grid.begin(), direct.grid.end(), tj) == direct.grid.end())
      ++missing;
  return bounded("grid_alignment", static_cast<double>(missing), 0.0);
}

CheckLine check_mr_norms_embedding(const Context& ctx) {
  SeededRng rng(sub_seed(ctx, 17));
  const double c_h = embedding_constant(ctx.triple);
  double worst = -1.0;
  for (int i = 0; i < 12; ++i) {
    Trajectory<double> traj;
    traj.problem_tag = "random";
    for (int j = 0; j <= 8; ++j) {
      traj.grid.push_back(j / 8.0);
      traj.states.push_back(rng.gaussian_vector<double>(ctx.triple.dim));
    }
    rebuild_derivative(traj);
    const MrNorms norms = mr_norms(traj, ctx.triple);
    const double deriv_h = std::sqrt(
        std::max(0.0, norms.h1_H * norms.h1_H - norms.l2_H * norms.l2_H));
    worst = std::max(worst, (norms.l2_H - c_h * norms.l2_V) / (c_h * norms.l2_V));
    worst = std::max(worst,
                     (norms.l2_Vdual_deriv - c_h * deriv_h) / (c_h * deriv_h));
  }
  return bounded("mr_norms_embedding", worst, 1e-12);
}

CheckLine check_mr_norms_closed_form(const Context& ctx) {
  Trajectory<double> traj;
  traj.problem_tag = "ramp";
  const int steps = 1024;
  for (int j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) / steps;
    traj.grid.push_back(t);
    traj.states.push_back(t * ctx.mode1);
  }
  rebuild_derivative(traj);
  const MrNorms norms = mr_norms(traj, ctx.triple);
  const double expect_l2h = 1.0 / std::sqrt(3.0);
  const double expect_h1 = 2.0 / std::sqrt(3.0);
  double worst = std::max(std::abs(norms.l2_H - expect_l2h),
                          std::abs(norms.h1_H - expect_h1));
  const MrNorms self = mr_distance(traj, traj, ctx.triple);
  const double self_worst =
      std::max({self.l2_V, self.l2_H, self.h1_H, self.l2_Vdual_deriv, self.sup_H,
                self.sup_V});
  CheckLine line =
      bounded("mr_norms_closed_form", worst, 1e-3, " self_distance=" + fmt(self_worst));
  line.passed = line.passed && self_worst == 0.0;
  return line;
}

CheckLine check_h_norm_product_rule(const Context& ctx) {
  SeededRng rng(sub_seed(ctx, 19));
  const Vec u0 = rng.gaussian_vector<double>(ctx.triple.dim);
  const Scenario<double>& sc = find_scenario(ctx.base, "linear_coeff");
  const Trajectory<double> solved =
      solve_approximate(sc.family, Subdivision(sc.family.horizon, 8),
                        ApproximantKind::Linear, ctx.no_load, u0, ctx.triple, 32, 0.5);
  const double h0 = norm(ctx.triple, u0, NormKind::H);
  const double res_solver = h_norm_rule_residual(solved, ctx.triple) / (h0 * h0);

  Trajectory<double> sampled;
  sampled.problem_tag = "exp";
  const int steps = 1024;
  for (int j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) / steps;
    sampled.grid.push_back(t);
    sampled.states.push_back(std::exp(-t) * ctx.mode1);
  }
  rebuild_derivative(sampled);
  const double res_sampled = h_norm_rule_residual(sampled, ctx.triple);

  CheckLine line = bounded("h_norm_product_rule", res_solver, 1e-12,
                           " sampled=" + fmt(res_sampled));
  line.passed = line.passed && res_sampled < 1e-6;
  return line;
}

CheckLine check_energy_identity_small(const Context& ctx) {
  double worst = 0.0;
  for (const char* name : {"constant", "linear_coeff", "jump_coeff", "staircase_bv"}) {
    const Scenario<double>& sc = find_scenario(ctx.base, name);
    for (ApproximantKind kind : {ApproximantKind::Step, ApproximantKind::Linear}) {
      for (int n : {4, 16}) {
        const AveragedFamily<double> av =
            average(sc.family, Subdivision(sc.family.horizon, n));
        const Trajectory<double> traj = solve_approximate(
            av, kind, ctx.no_load, ctx.mode1, ctx.triple, 64, 0.5);
        worst =
            std::max(worst, energy_identity_residual(traj, av, kind, ctx.triple));
      }
    }
  }
  return bounded("energy_identity_small", worst, 1e-6);
}

CheckLine check_energy_identity_halving(const Context& ctx) {
  const Scenario<double>& sc = find_scenario(ctx.base, "linear_coeff");
  const AveragedFamily<double> av =
      average(sc.family, Subdivision(sc.family.horizon, 4));
  const Trajectory<double> traj =
      solve_approximate(av, ApproximantKind::Linear, ctx.no_load, ctx.mode1,
                        ctx.triple, 16, 0.5);
  const double coarse =
      energy_identity_residual(traj, av, ApproximantKind::Linear, ctx.triple, 8);
  const double fine =
      energy_identity_residual(traj, av, ApproximantKind::Linear, ctx.triple, 16);
  CheckLine line = floored("energy_identity_halving", coarse / fine, 1.8,
                           " coarse=" + fmt(coarse) + " fine=" + fmt(fine));
  line.passed = line.passed && coarse > 1e-14;
  return line;
}

CheckLine check_apriori_bounds(const Context& ctx) {
  struct Run {
    const char* scenario;
    int n;
  };
  const Run runs[] = {{"staircase_bv", 4},  {"staircase_bv", 16}, {"staircase_bv", 64},
                      {"staircase_bv", 256}, {"linear_coeff", 4},  {"linear_coeff", 16},
                      {"linear_coeff", 64},  {"jump_coeff", 4},    {"jump_coeff", 16},
                      {"jump_coeff", 64}};
  double worst = 0.0;
  bool all_ok = true;
  std::string failing;
  for (const Run& run : runs) {
    const Scenario<double>& sc = find_scenario(ctx.base, run.scenario);
    const AveragedFamily<double> av =
        average(sc.family, Subdivision(sc.family.horizon, run.n));
    const Trajectory<double> traj = solve_approximate(
        av, ApproximantKind::Linear, ctx.no_load, ctx.mode1, ctx.triple, 64, 0.5);
    const AprioriReport rep = apriori_report(traj, av, sc.family, ctx.no_load, ctx.triple);
    all_ok = all_ok && rep.ok();
    if (!rep.ok())
      failing += std::string(" ") + run.scenario + "@" + std::to_string(run.n);
    worst = std::max({worst, rep.supV_sq / rep.supV_bound, rep.h1_sq / rep.h1_bound,
                      rep.rate_budget > 0.0 ? rep.rate_integral / rep.rate_budget : 0.0});
  }
  CheckLine line;
  line.name = "apriori_bounds";
  line.passed = all_ok;
  line.detail = "utilization=" + fmt(worst) + " limit=1" + failing;
  return line;
}

}  // namespace

VerifyResult run_verify(unsigned long seed, bool inject_fault) {
  Context ctx;
  ctx.seed = seed;
  ctx.triple = build_fem_triple<double>(15);
  for (const auto& info : scenario_registry())
    ctx.base.push_back(make_scenario(info.name, {}, ctx.triple));
  for (const char* name : {"constant", "linear_coeff", "jump_coeff"})
    ctx.shifted.push_back(make_scenario(name, {{"omega", "1"}}, ctx.triple));
  ctx.mode1 = eigenmode(ctx.triple, ctx.triple.gram_V, 1);
  ctx.no_load = Fn{};

  std::vector<CheckLine> lines;
  lines.push_back(check_dual_norm_duality(ctx));
  lines.push_back(check_norm_homogeneity(ctx));
  lines.push_back(check_norm_triangle(ctx));
  lines.push_back(check_embedding_sharpness(ctx));
  check_scenario_axioms(ctx, inject_fault, lines);
  lines.push_back(check_omega_shift_roundtrip(ctx));
  lines.push_back(check_averaging_preserves_axioms(ctx));
  lines.push_back(check_linear_node_continuity(ctx));
  lines.push_back(check_linear_lipschitz(ctx));
  lines.push_back(check_bv_transfer(ctx));
  lines.push_back(check_quadrature_consistency(ctx));
  lines.push_back(check_theta_dissipativity(ctx));
  lines.push_back(check_richardson(ctx, 0.5, 1.8, "richardson_theta_half"));
  lines.push_back(check_richardson(ctx, 1.0, 1.4, "richardson_theta_one"));
  lines.push_back(check_grid_alignment(ctx));
  lines.push_back(check_mr_norms_embedding(ctx));
  lines.push_back(check_mr_norms_closed_form(ctx));
  lines.push_back(check_h_norm_product_rule(ctx));
  lines.push_back(check_energy_identity_small(ctx));
  lines.push_back(check_energy_identity_halving(ctx));
  lines.push_back(check_apriori_bounds(ctx));

  int passed = 0;
  std::string report = "property suite, seed=" + std::to_string(seed) + "\n";
  for (const auto& line : lines) {
    if (line.passed) ++passed;
    char padded[64];
    std::snprintf(padded, sizeof padded, "%-28s", line.name.c_str());
    report += std::string(line.passed ? "[PASS] " : "[FAIL] ") + padded + " " +
              line.detail + "\n";
  }
  report += "result: " + std::to_string(passed) + "/" + std::to_string(lines.size()) +
            " passed\n";

  VerifyResult result;
  result.report = std::move(report);
  result.all_passed = passed == static_cast<int>(lines.size());
  return result;
}

}  // namespace evoform
