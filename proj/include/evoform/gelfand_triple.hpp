#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "evoform/types.hpp"

namespace evoform {

/// Discrete realization of a Gelfand triple V -> H -> V'.
///
/// Both spaces live on the same coefficient vector; they differ only in the
/// inner product: gram_V induces the V-norm, gram_H the H-norm, and the dual
/// norm on V' is taken through the inverse of gram_V. Both Gram matrices are
/// Hermitian positive definite; the V-factorization is cached because dual
/// norms are evaluated in inner loops.
template <typename Scalar>
struct GelfandTriple {
  Index dim = 0;
  DenseMatrix<Scalar> gram_V;
  DenseMatrix<Scalar> gram_H;
  Eigen::LLT<DenseMatrix<Scalar>> factor_V;
};

enum class NormKind { V, H, Vdual };

namespace detail {

template <typename Scalar>
RealOf<Scalar> hermitian_defect(const DenseMatrix<Scalar>& m) {
  const RealOf<Scalar> scale = m.template lpNorm<Eigen::Infinity>();
  const RealOf<Scalar> defect =
      (m - m.adjoint()).template lpNorm<Eigen::Infinity>();
  return scale > RealOf<Scalar>(0) ? defect / scale : defect;
}

}  // namespace detail

/// Validates the Gram pair and caches the V-factorization.
/// Throws std::invalid_argument on shape mismatch, non-Hermitian input
/// (relative defect above 1e-12), or loss of positive definiteness.
template <typename Scalar>
GelfandTriple<Scalar> make_triple(DenseMatrix<Scalar> gram_V,
                                  DenseMatrix<Scalar> gram_H) {
  if (gram_V.rows() == 0 || gram_V.rows() != gram_V.cols())
    throw std::invalid_argument("make_triple: gram_V must be square and non-empty");
  if (gram_H.rows() != gram_V.rows() || gram_H.cols() != gram_V.cols())
    throw std::invalid_argument("make_triple: Gram matrices must have equal shape");
  if (detail::hermitian_defect(gram_V) > 1e-12)
    throw std::invalid_argument("make_triple: gram_V is not Hermitian");
  if (detail::hermitian_defect(gram_H) > 1e-12)
    throw std::invalid_argument("make_triple: gram_H is not Hermitian");

  GelfandTriple<Scalar> t;
  t.dim = gram_V.rows();
  t.gram_V = std::move(gram_V);
  t.gram_H = std::move(gram_H);
  t.factor_V.compute(t.gram_V);
  if (t.factor_V.info() != Eigen::Success)
    throw std::invalid_argument("make_triple: gram_V is not positive definite");
  Eigen::LLT<DenseMatrix<Scalar>> check_H(t.gram_H);
  if (check_H.info() != Eigen::Success)
    throw std::invalid_argument("make_triple: gram_H is not positive definite");
  return t;
}

/// P1 finite elements for -u'' on (0,1) with zero boundary values,
/// n_interior >= 1 equally spaced interior nodes, h = 1/(n_interior+1).
/// gram_V is the stiffness matrix (the V-norm is the H^1_0 seminorm),
/// gram_H the mass matrix.
template <typename Scalar = double>
GelfandTriple<Scalar> build_fem_triple(Index n_interior) {
  if (n_interior < 1)
    throw std::invalid_argument("build_fem_triple: need at least one interior node");
  const double h = 1.0 / static_cast<double>(n_interior + 1);
  DenseMatrix<Scalar> stiffness = DenseMatrix<Scalar>::Zero(n_interior, n_interior);
  DenseMatrix<Scalar> mass = DenseMatrix<Scalar>::Zero(n_interior, n_interior);
  for (Index i = 0; i < n_interior; ++i) {
    stiffness(i, i) = Scalar(2.0 / h);
    mass(i, i) = Scalar(2.0 * h / 3.0);
    if (i + 1 < n_interior) {
      stiffness(i, i + 1) = Scalar(-1.0 / h);
      stiffness(i + 1, i) = Scalar(-1.0 / h);
      mass(i, i + 1) = Scalar(h / 6.0);
      mass(i + 1, i) = Scalar(h / 6.0);
    }
  }
  return make_triple<Scalar>(std::move(stiffness), std::move(mass));
}

/// <f, v> duality bracket in coefficient coordinates: the functional f applied
/// to v, conjugate-linear in v. For f = gram_H * h this equals (h | v)_H.
template <typename Scalar, typename DerivedF, typename DerivedV>
Scalar dual_pairing(const Eigen::MatrixBase<DerivedF>& f,
                    const Eigen::MatrixBase<DerivedV>& v) {
  return (v.adjoint() * f).value();
}

template <typename Scalar, typename Derived>
RealOf<Scalar> norm(const GelfandTriple<Scalar>& triple,
                    const Eigen::MatrixBase<Derived>& x, NormKind kind) {
  if (x.size() != triple.dim)
    throw std::invalid_argument("norm: vector size does not match triple dimension");
  using std::sqrt;
  using Real = RealOf<Scalar>;
  switch (kind) {
    case NormKind::V: {
      const Real q = Eigen::numext::real((x.adjoint() * triple.gram_V * x).value());
      return sqrt(q < Real(0) ? Real(0) : q);
    }
    case NormKind::H: {
      const Real q = Eigen::numext::real((x.adjoint() * triple.gram_H * x).value());
      return sqrt(q < Real(0) ? Real(0) : q);
    }
    case NormKind::Vdual: {
      // ||f||_{V'}^2 = f^H gram_V^{-1} f through the cached factorization.
      const DenseVector<Scalar> y = triple.factor_V.solve(x.derived());
      const Real q = Eigen::numext::real((x.adjoint() * y).value());
      return sqrt(q < Real(0) ? Real(0) : q);
    }
  }
  throw std::invalid_argument("norm: unknown norm kind");
}

/// Riesz representative of the functional f in V: the vector u* with
/// (u*|v)_V = <f,v> for all v; it maximizes |<f,u>| / ||u||_V.
template <typename Scalar>
DenseVector<Scalar> riesz_representative(const GelfandTriple<Scalar>& triple,
                                         const DenseVector<Scalar>& f) {
  if (f.size() != triple.dim)
    throw std::invalid_argument("riesz_representative: size mismatch");
  return triple.factor_V.solve(f);
}

/// Smallest constant c_H with ||u||_H <= c_H ||u||_V: the square root of the
/// largest eigenvalue of gram_H x = lambda gram_V x. Sharp by construction
/// (the top eigenvector attains it).
template <typename Scalar>
RealOf<Scalar> embedding_constant(const GelfandTriple<Scalar>& triple) {
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(
      triple.gram_H, triple.gram_V, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("embedding_constant: eigensolver failed");
  return std::sqrt(solver.eigenvalues().maxCoeff());
}

/// Eigenvector attaining the embedding constant, H-normalized.
template <typename Scalar>
DenseVector<Scalar> embedding_maximizer(const GelfandTriple<Scalar>& triple) {
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(
      triple.gram_H, triple.gram_V);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("embedding_maximizer: eigensolver failed");
  DenseVector<Scalar> v = solver.eigenvectors().col(triple.dim - 1);
  const RealOf<Scalar> h = norm(triple, v, NormKind::H);
  return v / h;
}

}  // namespace evoform
