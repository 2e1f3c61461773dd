#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evoform/form_family.hpp"
#include "evoform/gelfand_triple.hpp"
#include "evoform/scalar_coefficient.hpp"
#include "evoform/spectral_oracle.hpp"
#include "evoform/types.hpp"

namespace evoform {

/// A named form family plus, when the family is exactly c(t) * gram_V, the
/// separable payload that unlocks the spectral reference solver.
template <typename Scalar>
struct Scenario {
  std::string name;
  FormFamily<Scalar> family;
  std::optional<SeparableForm<Scalar>> separable;
};

/// Family driven by a scalar coefficient over the triple's V inner product:
/// A(t) = c(t) gram_V - omega gram_H. Constants come straight from the
/// coefficient: alpha = min c (coercivity after omega shift), M = max c plus
/// the omega correction through the embedding constant, g = running total
/// variation of c. Requires min c > 0.
template <typename Scalar>
Scenario<Scalar> make_scalar_scenario(std::string name, ScalarCoefficient coeff,
                                      double omega,
                                      const GelfandTriple<Scalar>& triple) {
  if (!(coeff.min_value() > 0.0))
    throw std::invalid_argument("make_scalar_scenario: coefficient must stay positive");

  Scenario<Scalar> sc;
  sc.name = std::move(name);

  FormFamily<Scalar> family;
  family.horizon = coeff.horizon();
  family.alpha = coeff.min_value();
  family.omega = omega;
  family.symmetric = true;
  family.jump_times = coeff.jump_times();
  const DenseMatrix<Scalar> base = triple.gram_V;
  if (omega == 0.0) {
    family.bound_M = coeff.max_value();
    family.evaluate = [coeff, base](double t) -> DenseMatrix<Scalar> {
      return (coeff(t) * base).eval();
    };
    sc.separable = SeparableForm<Scalar>{coeff, base};
  } else {
    family.bound_M =
        coeff.max_value() + std::abs(omega) * std::pow(embedding_constant(triple), 2);
    const DenseMatrix<Scalar> shift = (omega * triple.gram_H).eval();
    family.evaluate = [coeff, base, shift](double t) -> DenseMatrix<Scalar> {
      return (coeff(t) * base - shift).eval();
    };
  }
  family.bv_modulus = [coeff](double t) { return coeff.total_variation(t); };
  family.enable_memo(true);
  sc.family = std::move(family);
  return sc;
}

template <typename Scalar>
Scenario<Scalar> scenario_constant(double c, double omega, double horizon,
                                   const GelfandTriple<Scalar>& triple) {
  return make_scalar_scenario<Scalar>("constant",
                                      ScalarCoefficient::constant(c, horizon), omega,
                                      triple);
}

/// c(t) = a + b t.
template <typename Scalar>
Scenario<Scalar> scenario_linear(double a, double b, double omega, double horizon,
                                 const GelfandTriple<Scalar>& triple) {
  return make_scalar_scenario<Scalar>("linear_coeff",
                                      ScalarCoefficient::affine(a, b, horizon), omega,
                                      triple);
}

template <typename Scalar>
Scenario<Scalar> scenario_jump(const std::vector<double>& times,
                               const std::vector<double>& values, double omega,
                               double horizon, const GelfandTriple<Scalar>& triple) {
  return make_scalar_scenario<Scalar>(
      "jump_coeff", ScalarCoefficient::piecewise_constant(times, values, horizon),
      omega, triple);
}

/// Many small jumps with total variation `amplitude` regardless of n_jumps;
/// the stress case for the bounded-variation hypothesis.
template <typename Scalar>
Scenario<Scalar> scenario_staircase(double c0, double amplitude, int n_jumps,
                                    double omega, double horizon,
                                    const GelfandTriple<Scalar>& triple) {
  return make_scalar_scenario<Scalar>(
      "staircase_bv", ScalarCoefficient::staircase(c0, amplitude, n_jumps, horizon),
      omega, triple);
}

/// H-normalized generalized eigenmode number `k` (1-based, ascending) of
/// base phi = mu gram_H phi. Mode 1 of the FEM stiffness is the discrete
/// sine, the canonical smooth initial state.
template <typename Scalar>
DenseVector<Scalar> eigenmode(const GelfandTriple<Scalar>& triple,
                              const DenseMatrix<Scalar>& base, int k) {
  if (k < 1 || k > triple.dim)
    throw std::invalid_argument("eigenmode: index out of range");
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(base,
                                                                        triple.gram_H);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenmode: eigensolver failed");
  DenseVector<Scalar> phi = solver.eigenvectors().col(k - 1);
  // Fix the sign so the mode is reproducible: first nonzero entry positive.
  for (Index i = 0; i < phi.size(); ++i) {
    const auto v = Eigen::numext::real(phi(i));
    if (v > 1e-14) break;
    if (v < -1e-14) {
      phi = -phi;
      break;
    }
  }
  return phi;
}

}  // namespace evoform
