#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "evoform/gelfand_triple.hpp"
#include "evoform/random.hpp"
#include "evoform/trajectory.hpp"
#include "evoform/types.hpp"

namespace evoform {

namespace detail {

// Evaluation cache keyed on the exact bit pattern of t. Synchronized so
// concurrent sweeps can share one family; bounded so long parameter studies
// cannot grow it without limit.
template <typename Scalar>
class MatrixMemo {
 public:
  explicit MatrixMemo(std::size_t capacity = 8192) : capacity_(capacity) {}

  template <typename Eval>
  DenseMatrix<Scalar> at(double t, const Eval& eval) {
    std::uint64_t key;
    std::memcpy(&key, &t, sizeof(key));
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    DenseMatrix<Scalar> value = eval(t);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (cache_.size() >= capacity_) cache_.clear();
      cache_.emplace(key, value);
    }
    return value;
  }

 private:
  std::size_t capacity_;
  std::mutex mutex_;
  std::unordered_map<std::uint64_t, DenseMatrix<Scalar>> cache_;
};

}  // namespace detail

/// A time-dependent sesquilinear form a(t; u, v) = v^H A(t) u on [0, horizon],
/// carried by its matrix family A(t) together with the constants it certifies:
///
///   |a(t; u, v)| <= bound_M ||u||_V ||v||_V
///   Re a(t; u, u) + omega ||u||_H^2 >= alpha ||u||_V^2
///
/// bv_modulus, when present, is a non-decreasing g with g(0) = 0 and
///   |a(t; u, v) - a(s; u, v)| <= (g(t) - g(s)) ||u||_V ||v||_V.
/// jump_times lists the known discontinuities of t -> A(t); quadrature and
/// time grids split there so piecewise-constant inputs are handled exactly.
template <typename Scalar>
struct FormFamily {
  std::function<DenseMatrix<Scalar>(double)> evaluate;
  double horizon = 1.0;
  double alpha = 0.0;
  double bound_M = 0.0;
  double omega = 0.0;
  bool symmetric = true;
  std::optional<std::function<double(double)>> bv_modulus;
  std::vector<double> jump_times;

  /// Memoized evaluation; reuse this instead of calling evaluate directly.
  DenseMatrix<Scalar> matrix_at(double t) const {
    if (memo_) return memo_->at(t, evaluate);
    return evaluate(t);
  }

  void enable_memo(bool on = true) {
    memo_ = on ? std::make_shared<detail::MatrixMemo<Scalar>>() : nullptr;
  }

 private:
  std::shared_ptr<detail::MatrixMemo<Scalar>> memo_ =
      std::make_shared<detail::MatrixMemo<Scalar>>();
};

template <typename Scalar>
void validate_family(const FormFamily<Scalar>& family) {
  if (!family.evaluate) throw std::invalid_argument("form family: missing evaluator");
  if (!(family.horizon > 0.0)) throw std::invalid_argument("form family: horizon must be positive");
  if (!(family.alpha > 0.0)) throw std::invalid_argument("form family: alpha must be positive");
  if (!(family.bound_M > 0.0)) throw std::invalid_argument("form family: bound_M must be positive");
  for (std::size_t i = 0; i < family.jump_times.size(); ++i) {
    if (!(family.jump_times[i] > 0.0) || !(family.jump_times[i] < family.horizon))
      throw std::invalid_argument("form family: jump times must lie strictly inside (0, horizon)");
    if (i > 0 && !(family.jump_times[i - 1] < family.jump_times[i]))
      throw std::invalid_argument("form family: jump times must be strictly increasing");
  }
}

/// Worst certified defects over the sample set. Defects are normalized so the
/// natural pass thresholds are scale-free; see axioms_ok.
struct AxiomReport {
  double worst_continuity_ratio = 0.0;   // max |a| / (||u||_V ||v||_V), compare against M
  double worst_coercivity_margin = 0.0;  // min (Re a + omega||u||_H^2 - alpha||u||_V^2) / ||u||_V^2
  double worst_symmetry_defect = 0.0;    // max relative ||A - A^H||
  double worst_bv_defect = 0.0;          // max (|a(t)-a(s)| - (g(t)-g(s))||u||||v||) / (||u||||v||)
  bool bv_checked = false;
};

/// Samples t uniformly over [0, horizon] (plus the declared jumps) and u, v
/// from the seeded generator, then reports the worst observed defect for each
/// axiom. Throws if check_bv is requested without a bv_modulus.
template <typename Scalar>
AxiomReport verify_form_axioms(const FormFamily<Scalar>& family,
                               const GelfandTriple<Scalar>& triple,
                               int n_time_samples = 24, int n_vector_samples = 16,
                               std::uint64_t seed = 0,
                               std::optional<bool> check_bv = std::nullopt) {
  validate_family(family);
  const bool want_bv = check_bv.value_or(family.bv_modulus.has_value());
  if (want_bv && !family.bv_modulus)
    throw std::invalid_argument("verify_form_axioms: BV check requested but no bv_modulus present");
  if (n_time_samples < 2 || n_vector_samples < 1)
    throw std::invalid_argument("verify_form_axioms: need at least 2 time and 1 vector samples");

  std::vector<double> times;
  for (int i = 0; i < n_time_samples; ++i)
    times.push_back(family.horizon * i / (n_time_samples - 1));
  for (double tj : family.jump_times)
    if (tj > 0.0 && tj < family.horizon) times.push_back(tj);
  std::sort(times.begin(), times.end());

  SeededRng rng(seed);
  std::vector<DenseVector<Scalar>> vectors;
  for (int i = 0; i < n_vector_samples; ++i)
    vectors.push_back(rng.gaussian_vector<Scalar>(triple.dim));

  AxiomReport report;
  report.bv_checked = want_bv;
  report.worst_coercivity_margin = std::numeric_limits<double>::infinity();

  std::vector<DenseMatrix<Scalar>> mats;
  mats.reserve(times.size());
  for (double t : times) mats.push_back(family.matrix_at(t));

  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const DenseMatrix<Scalar>& A = mats[ti];
    if (A.rows() != triple.dim || A.cols() != triple.dim)
      throw std::invalid_argument("verify_form_axioms: form matrix has wrong shape");
    if (family.symmetric) {
      report.worst_symmetry_defect =
          std::max(report.worst_symmetry_defect,
                   static_cast<double>(detail::hermitian_defect(A)));
    }
    for (const auto& u : vectors) {
      const double norm_u = norm(triple, u, NormKind::V);
      const double norm_h = norm(triple, u, NormKind::H);
      const double quad = Eigen::numext::real((u.adjoint() * A * u).value());
      report.worst_coercivity_margin = std::min(
          report.worst_coercivity_margin,
          (quad + family.omega * norm_h * norm_h - family.alpha * norm_u * norm_u) /
              (norm_u * norm_u));
      for (const auto& v : vectors) {
        const double norm_v = norm(triple, v, NormKind::V);
        const double a_uv = std::abs((v.adjoint() * A * u).value());
        report.worst_continuity_ratio =
            std::max(report.worst_continuity_ratio, a_uv / (norm_u * norm_v));
      }
    }
  }

  if (want_bv) {
    const auto& g = *family.bv_modulus;
    for (std::size_t si = 0; si < times.size(); ++si) {
      for (std::size_t ti = si + 1; ti < times.size(); ++ti) {
        const double budget = g(times[ti]) - g(times[si]);
        const DenseMatrix<Scalar> diff = mats[ti] - mats[si];
        for (const auto& u : vectors) {
          const double norm_u = norm(triple, u, NormKind::V);
          for (const auto& v : vectors) {
            const double norm_v = norm(triple, v, NormKind::V);
            const double da = std::abs((v.adjoint() * diff * u).value());
            report.worst_bv_defect =
                std::max(report.worst_bv_defect,
                         da / (norm_u * norm_v) - budget);
          }
        }
      }
    }
  }
  return report;
}

/// Pass/fail decision for an axiom report at the library's standard
/// tolerances: rounding-level slack on continuity and coercivity, 1e-12 on
/// symmetry, 1e-10 (scaled by the modulus range) on the BV defect.
template <typename Scalar>
bool axioms_ok(const AxiomReport& report, const FormFamily<Scalar>& family) {
  const double g_scale =
      family.bv_modulus ? std::max(1.0, (*family.bv_modulus)(family.horizon)) : 1.0;
  if (report.worst_continuity_ratio > family.bound_M * (1.0 + 1e-10)) return false;
  if (report.worst_coercivity_margin < -1e-10 * family.alpha) return false;
  if (family.symmetric && report.worst_symmetry_defect > 1e-12) return false;
  if (report.bv_checked && report.worst_bv_defect > 1e-10 * g_scale) return false;
  return true;
}

/// Result of removing the coercivity shift: the shifted family has matrices
/// A(t) + omega * gram_H, is coercive with the same alpha at omega = 0, and a
/// trajectory v of the shifted problem driven by exp(-omega t) f pulls back to
/// the original solution through reconstruct (u(t) = exp(omega t) v(t)).
template <typename Scalar>
struct OmegaShift {
  FormFamily<Scalar> shifted;
  double omega = 0.0;

  double rhs_factor(double t) const { return std::exp(-omega * t); }

  Trajectory<Scalar> reconstruct(const Trajectory<Scalar>& v) const {
    Trajectory<Scalar> u = v;
    for (std::size_t j = 0; j < u.grid.size(); ++j)
      u.states[j] *= Scalar(std::exp(omega * u.grid[j]));
    rebuild_derivative(u);
    u.problem_tag = v.problem_tag + "|unshifted";
    return u;
  }
};

template <typename Scalar>
OmegaShift<Scalar> shift_omega(const FormFamily<Scalar>& family,
                               const GelfandTriple<Scalar>& triple) {
  validate_family(family);
  OmegaShift<Scalar> result;
  result.omega = family.omega;
  result.shifted = family;
  result.shifted.omega = 0.0;
  if (family.omega != 0.0) {
    const double w = family.omega;
    const DenseMatrix<Scalar> shift_matrix = Scalar(w) * triple.gram_H;
    auto base_eval = family.evaluate;
    result.shifted.evaluate = [base_eval, shift_matrix](double t) {
      return DenseMatrix<Scalar>(base_eval(t) + shift_matrix);
    };
    result.shifted.enable_memo();
    // The shift adds at most |omega| c_H^2 to the continuity constant.
    const double ch = embedding_constant(triple);
    result.shifted.bound_M = family.bound_M + std::abs(w) * ch * ch;
  }
  return result;
}

/// Time grid skeleton the solver must align to, plus evaluation access.
/// piecewise_constant marks sources whose matrix does not change between
/// consecutive skeleton nodes (the solver then factors once per interval).
template <typename Scalar>
struct FormSource {
  std::function<DenseMatrix<Scalar>(double)> eval;
  std::vector<double> skeleton;  // strictly increasing, spans [0, horizon]
  bool piecewise_constant = false;
  std::string tag;
};

namespace detail {

inline std::vector<double> merge_skeleton(double horizon,
                                          const std::vector<double>& interior,
                                          const std::vector<double>& extra) {
  std::vector<double> nodes{0.0, horizon};
  auto add = [&](double t) {
    if (t > 0.0 && t < horizon) nodes.push_back(t);
  };
  for (double t : interior) add(t);
  for (double t : extra) add(t);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

}  // namespace detail

/// Source for a direct solve of the family itself. The skeleton contains the
/// declared jumps so no time step straddles a form discontinuity; extra_nodes
/// lets callers align the grid with a subdivision for exact comparisons.
template <typename Scalar>
FormSource<Scalar> make_source(const FormFamily<Scalar>& family,
                               const std::vector<double>& extra_nodes = {}) {
  validate_family(family);
  FormSource<Scalar> src;
  src.eval = [family](double t) { return family.matrix_at(t); };
  src.skeleton = detail::merge_skeleton(family.horizon, family.jump_times, extra_nodes);
  src.piecewise_constant = false;
  src.tag = "family";
  return src;
}

/// The evolution problem u' + A(t) u = f, u(0) = u0, posed over the triple.
/// rhs values are H-coefficient vectors (the load enters as gram_H * f).
template <typename Scalar>
struct EvolutionProblem {
  FormSource<Scalar> source;
  std::function<DenseVector<Scalar>(double)> rhs;  // empty means f = 0
  DenseVector<Scalar> initial_u0;
  const GelfandTriple<Scalar>* triple = nullptr;
};

}  // namespace evoform
