#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "evoform/apriori.hpp"
#include "evoform/averaging.hpp"
#include "evoform/energy_identity.hpp"
#include "evoform/gelfand_triple.hpp"
#include "evoform/mr_norms.hpp"
#include "evoform/scenarios.hpp"
#include "evoform/theta_scheme.hpp"
#include "evoform/trajectory.hpp"

using evoform::ApproximantKind;
using evoform::DenseVector;
using evoform::Subdivision;

using Vec = DenseVector<double>;
using Fn = std::function<Vec(double)>;

namespace {

evoform::Trajectory<double> ramp_trajectory(const Vec& direction, int steps,
                                            double scale = 1.0) {
  evoform::Trajectory<double> traj;
  traj.problem_tag = "ramp";
  for (int j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) / steps;
    traj.grid.push_back(t);
    traj.states.push_back(scale * t * direction);
  }
  evoform::rebuild_derivative(traj);
  return traj;
}

}  // namespace

TEST_CASE("trajectory norms of a linear ramp match hand integration") {
  const auto triple = evoform::build_fem_triple<double>(15);
  const Vec mode = evoform::eigenmode(triple, triple.gram_V, 1);
  const double mu = (mode.adjoint() * triple.gram_V * mode).value();
  const auto traj = ramp_trajectory(mode, 1024);

  const auto norms = evoform::mr_norms(traj, triple);
  CHECK(norms.l2_H == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
  CHECK(norms.h1_H == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-3));
  CHECK(norms.l2_V == doctest::Approx(std::sqrt(mu / 3.0)).epsilon(1e-3));
  CHECK(norms.sup_H == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norms.sup_V == doctest::Approx(std::sqrt(mu)).epsilon(1e-12));
  // The derivative is the constant mode, whose functional norm is 1/sqrt(mu).
  CHECK(norms.l2_Vdual_deriv == doctest::Approx(1.0 / std::sqrt(mu)).epsilon(1e-6));
  CHECK(evoform::mr_vvdual(norms) ==
        doctest::Approx(std::sqrt(mu / 3.0 + 1.0 / mu)).epsilon(1e-3));
}

TEST_CASE("trajectory distance merges grids and freezes a union-grid value") {
  const auto triple = evoform::build_fem_triple<double>(7);
  const Vec mode = evoform::eigenmode(triple, triple.gram_V, 1);

  evoform::Trajectory<double> a, b;
  for (double t : {0.0, 0.5, 1.0}) {
    a.grid.push_back(t);
    a.states.push_back(t * mode);
  }
  evoform::rebuild_derivative(a);
  for (double t : {0.0, 0.25, 1.0}) {
    b.grid.push_back(t);
    b.states.push_back(2.0 * t * mode);
  }
  evoform::rebuild_derivative(b);

  // Same piecewise-linear function sampled on different grids: distance 0.
  evoform::Trajectory<double> b_same = b;
  for (auto& state : b_same.states) state *= 0.5;
  evoform::rebuild_derivative(b_same);
  const auto zero = evoform::mr_distance(a, b_same, triple);
  CHECK(zero.l2_H <= 1e-14);
  CHECK(zero.sup_V <= 1e-13);

  // Difference is t*mode; trapezoid of t^2 on the union grid {0,1/4,1/2,1}
  // equals 23/64 exactly.
  const auto dist = evoform::mr_distance(a, b, triple);
  CHECK(dist.l2_H == doctest::Approx(std::sqrt(23.0 / 64.0)).epsilon(1e-12));
  CHECK(dist.sup_H == doctest::Approx(1.0).epsilon(1e-12));

  evoform::Trajectory<double> short_span = a;
  short_span.grid.back() = 0.75;
  CHECK_THROWS(evoform::mr_distance(a, short_span, triple));
}

TEST_CASE("state interpolation clamps and reproduces nodal values") {
  const auto triple = evoform::build_fem_triple<double>(5);
  const Vec mode = evoform::eigenmode(triple, triple.gram_V, 1);
  const auto traj = ramp_trajectory(mode, 4);
  CHECK((evoform::interpolate_state(traj, 0.5) - 0.5 * mode).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK((evoform::interpolate_state(traj, 0.375) - 0.375 * mode).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK((evoform::interpolate_state(traj, -1.0) - traj.states.front())
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK((evoform::interpolate_state(traj, 2.0) - traj.states.back())
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("h norm pairing rule telescopes for solver output") {
  const auto triple = evoform::build_fem_triple<double>(15);
  const auto sc = evoform::scenario_linear<double>(1.0, 1.0, 0.0, 1.0, triple);
  const auto traj = evoform::solve_approximate(
      sc.family, Subdivision(1.0, 8), ApproximantKind::Linear, Fn{},
      evoform::eigenmode(triple, triple.gram_V, 1), triple, 32, 0.5);
  CHECK(evoform::h_norm_rule_residual(traj, triple) < 1e-12);

  evoform::Trajectory<double> broken = traj;
  broken.derivative.pop_back();
  CHECK_THROWS(evoform::h_norm_rule_residual(broken, triple));
}

TEST_CASE("energy identity is exact for step approximants") {
  const auto triple = evoform::build_fem_triple<double>(15);
  const auto sc = evoform::scenario_jump<double>({0.375}, {1.0, 3.0}, 0.0, 1.0, triple);
  const auto av = evoform::average(sc.family, Subdivision(1.0, 8));
  const auto traj = evoform::solve_approximate(
      av, ApproximantKind::Step, Fn{}, evoform::eigenmode(triple, triple.gram_V, 1),
      triple, 32, 0.5);
  CHECK(evoform::energy_identity_residual(traj, av, ApproximantKind::Step, triple) <
        1e-12);
}

TEST_CASE("energy identity defect shrinks quadratically in the inner panels") {
  const auto triple = evoform::build_fem_triple<double>(15);
  const auto sc = evoform::scenario_linear<double>(1.0, 1.0, 0.0, 1.0, triple);
  const auto av = evoform::average(sc.family, Subdivision(1.0, 4));
  const auto traj = evoform::solve_approximate(
      av, ApproximantKind::Linear, Fn{}, evoform::eigenmode(triple, triple.gram_V, 1),
      triple, 16, 0.5);
  const double coarse =
      evoform::energy_identity_residual(traj, av, ApproximantKind::Linear, triple, 8);
  const double fine =
      evoform::energy_identity_residual(traj, av, ApproximantKind::Linear, triple, 32);
  CHECK(coarse > 1e-14);
  CHECK(coarse / fine > 8.0);  // fourth of the mesh => 16x in a second-order rule
}

TEST_CASE("energy identity rejects malformed inputs") {
  const auto triple = evoform::build_fem_triple<double>(9);
  const auto sc = evoform::scenario_linear<double>(1.0, 1.0, 0.0, 1.0, triple);
  auto av = evoform::average(sc.family, Subdivision(1.0, 4));
  const auto traj = evoform::solve_approximate(
      av, ApproximantKind::Linear, Fn{}, evoform::eigenmode(triple, triple.gram_V, 1),
      triple, 8, 0.5);

  CHECK_THROWS(
      evoform::energy_identity_residual(traj, av, ApproximantKind::Linear, triple, 0));

  auto wrong_triple = evoform::build_fem_triple<double>(5);
  CHECK_THROWS(evoform::energy_identity_residual(traj, av, ApproximantKind::Linear,
                                                 wrong_triple));

  auto asymmetric = av;
  asymmetric.symmetric = false;
  CHECK_THROWS(evoform::energy_identity_residual(traj, asymmetric,
                                                 ApproximantKind::Linear, triple));
}

TEST_CASE("apriori report carries the constants and certifies the chain") {
  const auto triple = evoform::build_fem_triple<double>(15);
  const auto sc = evoform::scenario_staircase<double>(1.0, 1.0, 16, 0.0, 1.0, triple);
  const Vec u0 = evoform::eigenmode(triple, triple.gram_V, 1);
  const double mu = (u0.adjoint() * triple.gram_V * u0).value();
  const auto av = evoform::average(sc.family, Subdivision(1.0, 16));
  const auto traj =
      evoform::solve_approximate(av, ApproximantKind::Linear, Fn{}, u0, triple, 64, 0.5);

  const auto report = evoform::apriori_report(traj, av, sc.family, Fn{}, triple);
  CHECK(report.ok());
  CHECK(report.scalar_rate_budget_ok);
  CHECK(report.supV_bound_ok);
  CHECK(report.h1_bound_ok);
  CHECK(report.horizon == 1.0);
  CHECK(report.g_total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.embedding ==
        doctest::Approx(evoform::embedding_constant(triple)).epsilon(1e-12));
  CHECK(report.bound_M == doctest::Approx(2.0).epsilon(1e-12));
  // No forcing: the data norm reduces to |u0|_V^2 (the bound_M weight only
  // enters the sup-V bound, not the data norm itself).
  CHECK(report.data_norm_sq == doctest::Approx(mu).epsilon(1e-12));
  CHECK(report.supV_bound ==
        doctest::Approx((report.bound_M * mu / report.alpha) *
                        std::exp(report.g_total / report.alpha))
            .epsilon(1e-12));
  CHECK(report.rate_integral <= report.rate_budget);
  CHECK(report.supV_sq <= report.supV_bound);
  CHECK(report.h1_sq <= report.h1_bound);
}

TEST_CASE("apriori report rejects families outside its hypotheses") {
  const auto triple = evoform::build_fem_triple<double>(9);
  const auto sc = evoform::scenario_linear<double>(1.0, 1.0, 0.0, 1.0, triple);
  const Vec u0 = evoform::eigenmode(triple, triple.gram_V, 1);
  const auto av = evoform::average(sc.family, Subdivision(1.0, 4));
  const auto traj =
      evoform::solve_approximate(av, ApproximantKind::Linear, Fn{}, u0, triple, 16, 0.5);

  auto no_bv = sc.family;
  no_bv.bv_modulus.reset();
  CHECK_THROWS(evoform::apriori_report(traj, av, no_bv, Fn{}, triple));

  const auto shifted = evoform::scenario_linear<double>(1.0, 1.0, 1.0, 1.0, triple);
  CHECK_THROWS(evoform::apriori_report(traj, av, shifted.family, Fn{}, triple));

  auto no_scalars = av;
  no_scalars.scalar_averages.reset();
  CHECK_THROWS(evoform::apriori_report(traj, no_scalars, sc.family, Fn{}, triple));
}
