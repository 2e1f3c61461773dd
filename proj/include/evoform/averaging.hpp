#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "evoform/form_family.hpp"
#include "evoform/gelfand_triple.hpp"
#include "evoform/types.hpp"

namespace evoform {

/// Uniform subdivision of [0, horizon] into n_intervals cells.
struct Subdivision {
  double horizon = 1.0;
  int n_intervals = 1;

  Subdivision(double horizon_, int n_intervals_)
      : horizon(horizon_), n_intervals(n_intervals_) {
    if (!(horizon > 0.0))
      throw std::invalid_argument("Subdivision: horizon must be positive");
    if (n_intervals < 1)
      throw std::invalid_argument("Subdivision: need at least one interval");
  }

  double mesh() const { return horizon / n_intervals; }

  double node(int k) const {
    if (k < 0 || k > n_intervals)
      throw std::invalid_argument("Subdivision: node index out of range");
    if (k == n_intervals) return horizon;  // exact right endpoint
    return horizon * k / n_intervals;
  }

  std::vector<double> nodes() const {
    std::vector<double> out(n_intervals + 1);
    for (int k = 0; k <= n_intervals; ++k) out[k] = node(k);
    return out;
  }

  /// Index of the interval containing t, with t == horizon mapped to the last
  /// interval. Robust against rounding at the nodes themselves.
  int interval_index(double t) const {
    if (!(t >= 0.0) || !(t <= horizon))
      throw std::invalid_argument("Subdivision: time outside [0, horizon]");
    int k = std::min(n_intervals - 1, static_cast<int>(std::floor(t / mesh())));
    if (k < 0) k = 0;
    while (k + 1 < n_intervals && t >= node(k + 1)) ++k;
    while (k > 0 && t < node(k)) --k;
    return k;
  }
};

/// Interval averages of a form family over a subdivision: averages[k] is the
/// mean of A over cell k, scalar_averages the analogous means of the BV
/// modulus when the family declares one. Constants transfer unchanged, so the
/// family's bounds are kept alongside.
template <typename Scalar>
struct AveragedFamily {
  Subdivision subdivision{1.0, 1};
  std::vector<DenseMatrix<Scalar>> averages;
  std::optional<std::vector<double>> scalar_averages;
  double alpha = 0.0;
  double bound_M = 0.0;
  double omega = 0.0;
  bool symmetric = true;
};

enum class ApproximantKind { Step, Linear };

inline const char* kind_name(ApproximantKind kind) {
  return kind == ApproximantKind::Step ? "step" : "linear";
}

struct QuadratureSpec {
  int nodes_per_interval = 32;
};

namespace detail {

// Composite midpoint over [a, b] split at declared jumps. The panel count per
// sub-piece is proportional to its length; a constant integrand is detected
// and returned exactly (bitwise), which is what makes piecewise-constant
// scenarios reproduce their own values through the averaging pipeline.
template <typename Value, typename Eval, typename Combine>
Value averaged_midpoint(double a, double b, const std::vector<double>& jumps,
                        int nodes_per_interval, const Eval& eval,
                        const Combine& axpy, const Value& zero) {
  std::vector<double> cuts{a};
  for (double j : jumps)
    if (j > a && j < b) cuts.push_back(j);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  Value acc = zero;
  double total_weight = 0.0;
  bool first = true, all_equal = true;
  Value first_sample = zero;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double lo = cuts[p], hi = cuts[p + 1];
    const double len = hi - lo;
    if (!(len > 0.0)) continue;
    const int panels = std::max(
        1, static_cast<int>(std::llround(nodes_per_interval * len / (b - a))));
    const double w = len / panels;
    for (int i = 0; i < panels; ++i) {
      const double mid = lo + (i + 0.5) * w;
      Value sample = eval(mid);
      if (first) {
        first_sample = sample;
        first = false;
      } else if (all_equal && !axpy.equal(sample, first_sample)) {
        all_equal = false;
      }
      axpy.add(acc, w, sample);
      total_weight += w;
    }
  }
  if (first) throw std::invalid_argument("averaging: empty interval");
  if (all_equal) return first_sample;
  axpy.scale(acc, 1.0 / total_weight);
  return acc;
}

template <typename Scalar>
struct MatrixOps {
  static bool is_equal(const DenseMatrix<Scalar>& x, const DenseMatrix<Scalar>& y) {
    return (x.array() == y.array()).all();
  }
  bool equal(const DenseMatrix<Scalar>& x, const DenseMatrix<Scalar>& y) const {
    return is_equal(x, y);
  }
  void add(DenseMatrix<Scalar>& acc, double w, const DenseMatrix<Scalar>& s) const {
    if (acc.size() == 0)
      acc = DenseMatrix<Scalar>::Zero(s.rows(), s.cols());
    acc += Scalar(w) * s;
  }
  void scale(DenseMatrix<Scalar>& acc, double f) const { acc *= Scalar(f); }
};

struct ScalarOps {
  bool equal(double x, double y) const { return x == y; }
  void add(double& acc, double w, double s) const { acc += w * s; }
  void scale(double& acc, double f) const { acc *= f; }
};

}  // namespace detail

/// Bochner averages of the family over every cell of the subdivision,
/// computed by composite midpoint quadrature with panels split at the
/// family's declared jumps (exact for piecewise-constant and piecewise-affine
/// data). The BV modulus, when present, is averaged with the same rule.
template <typename Scalar>
AveragedFamily<Scalar> average(const FormFamily<Scalar>& family,
                               const Subdivision& sub,
                               const QuadratureSpec& quad = {}) {
  validate_family(family);
  if (std::abs(family.horizon - sub.horizon) > 1e-12 * family.horizon)
    throw std::invalid_argument("average: subdivision horizon does not match family");
  if (quad.nodes_per_interval < 1)
    throw std::invalid_argument("average: need at least one quadrature node");

  AveragedFamily<Scalar> out;
  out.subdivision = sub;
  out.alpha = family.alpha;
  out.bound_M = family.bound_M;
  out.omega = family.omega;
  out.symmetric = family.symmetric;
  out.averages.reserve(sub.n_intervals);

  const detail::MatrixOps<Scalar> mat_ops;
  const detail::ScalarOps scalar_ops;
  for (int k = 0; k < sub.n_intervals; ++k) {
    const double a = sub.node(k), b = sub.node(k + 1);
    out.averages.push_back(detail::averaged_midpoint<DenseMatrix<Scalar>>(
        a, b, family.jump_times, quad.nodes_per_interval,
        [&](double t) { return family.matrix_at(t); }, mat_ops,
        DenseMatrix<Scalar>()));
  }
  if (family.bv_modulus) {
    std::vector<double> g_avgs;
    g_avgs.reserve(sub.n_intervals);
    const auto& g = *family.bv_modulus;
    for (int k = 0; k < sub.n_intervals; ++k) {
      const double a = sub.node(k), b = sub.node(k + 1);
      g_avgs.push_back(detail::averaged_midpoint<double>(
          a, b, family.jump_times, quad.nodes_per_interval,
          [&](double t) { return g(t); }, scalar_ops, 0.0));
    }
    out.scalar_averages = std::move(g_avgs);
  }
  return out;
}

/// Step approximant: the cell average of the cell containing t, with the
/// right endpoint t == horizon mapped to the last average.
template <typename Scalar>
const DenseMatrix<Scalar>& eval_step(const AveragedFamily<Scalar>& av, double t) {
  return av.averages[av.subdivision.interval_index(t)];
}

/// Piecewise-linear approximant: on cell k it interpolates between the
/// consecutive averages A_k and A_{k+1}, anchored at the cell's endpoints.
/// The last cell has no successor average and holds A_last constant, which
/// keeps the function globally continuous and every value inside the convex
/// hull of the averages. With a single cell this degenerates to the step
/// approximant.
template <typename Scalar>
DenseMatrix<Scalar> eval_linear(const AveragedFamily<Scalar>& av, double t) {
  const Subdivision& sub = av.subdivision;
  const int k = sub.interval_index(t);
  if (k == sub.n_intervals - 1) return av.averages[k];
  const double w = (t - sub.node(k)) / sub.mesh();
  if (w == 0.0) return av.averages[k];
  // Interpolating equal endpoints must reproduce them bitwise; the blended
  // expression below would perturb the last ulp.
  if ((av.averages[k].array() == av.averages[k + 1].array()).all())
    return av.averages[k];
  return DenseMatrix<Scalar>(Scalar(1.0 - w) * av.averages[k] +
                             Scalar(w) * av.averages[k + 1]);
}

/// Same interpolation applied to the scalar modulus averages.
template <typename Scalar>
double eval_scalar_linear(const AveragedFamily<Scalar>& av, double t) {
  if (!av.scalar_averages)
    throw std::invalid_argument("eval_scalar_linear: family has no scalar averages");
  const Subdivision& sub = av.subdivision;
  const std::vector<double>& g = *av.scalar_averages;
  const int k = sub.interval_index(t);
  if (k == sub.n_intervals - 1) return g[k];
  const double w = (t - sub.node(k)) / sub.mesh();
  return (1.0 - w) * g[k] + w * g[k + 1];
}

/// Derivative of the interpolated modulus: (g_{k+1} - g_k) / mesh on interior
/// cells, zero on the last one. Its integral over [0, horizon] telescopes to
/// g_last - g_0 <= g(horizon); the a-priori chain budgets against that.
template <typename Scalar>
double eval_scalar_rate(const AveragedFamily<Scalar>& av, double t) {
  if (!av.scalar_averages)
    throw std::invalid_argument("eval_scalar_rate: family has no scalar averages");
  const Subdivision& sub = av.subdivision;
  const std::vector<double>& g = *av.scalar_averages;
  const int k = sub.interval_index(t);
  if (k == sub.n_intervals - 1) return 0.0;
  return (g[k + 1] - g[k]) / sub.mesh();
}

/// Exact integral of eval_scalar_rate over [0, horizon].
template <typename Scalar>
double scalar_rate_integral(const AveragedFamily<Scalar>& av) {
  if (!av.scalar_averages)
    throw std::invalid_argument("scalar_rate_integral: family has no scalar averages");
  return av.scalar_averages->back() - av.scalar_averages->front();
}

/// Repackages the approximant as a form family (same constants; averaging is
/// convex, so continuity and coercivity transfer verbatim). For the Linear
/// kind the interpolated modulus is a valid BV modulus of the interpolated
/// form, so it is installed as such.
template <typename Scalar>
FormFamily<Scalar> as_form_family(const AveragedFamily<Scalar>& av,
                                  ApproximantKind kind) {
  FormFamily<Scalar> out;
  out.horizon = av.subdivision.horizon;
  out.alpha = av.alpha;
  out.bound_M = av.bound_M;
  out.omega = av.omega;
  out.symmetric = av.symmetric;
  AveragedFamily<Scalar> copy = av;
  if (kind == ApproximantKind::Step) {
    out.evaluate = [copy](double t) { return eval_step(copy, t); };
    for (int k = 1; k < av.subdivision.n_intervals; ++k)
      out.jump_times.push_back(av.subdivision.node(k));
  } else {
    out.evaluate = [copy](double t) { return eval_linear(copy, t); };
    if (av.scalar_averages) {
      const double g0 = av.scalar_averages->front();
      out.bv_modulus = [copy, g0](double t) {
        return eval_scalar_linear(copy, t) - g0;
      };
    }
  }
  out.enable_memo(false);
  return out;
}

/// ||(A_Lambda(t) - A(t)) x||_{V'} for each subdivision size in n_list.
template <typename Scalar>
std::vector<RealOf<Scalar>> probe_pointwise_convergence(
    const FormFamily<Scalar>& family, const DenseVector<Scalar>& x, double t,
    const std::vector<int>& n_list, ApproximantKind kind,
    const GelfandTriple<Scalar>& triple, const QuadratureSpec& quad = {}) {
  if (x.size() != triple.dim)
    throw std::invalid_argument("probe_pointwise_convergence: vector size mismatch");
  const DenseMatrix<Scalar> exact = family.matrix_at(t);
  std::vector<RealOf<Scalar>> errors;
  errors.reserve(n_list.size());
  for (int n : n_list) {
    const AveragedFamily<Scalar> av = average(family, Subdivision(family.horizon, n), quad);
    const DenseMatrix<Scalar> approx =
        kind == ApproximantKind::Step ? eval_step(av, t) : eval_linear(av, t);
    errors.push_back(norm(triple, ((approx - exact) * x).eval(), NormKind::Vdual));
  }
  return errors;
}

/// L2(0, horizon; V') error of t -> (A_Lambda(t) - A(t)) u(t) for each n,
/// by composite midpoint in time with the stated number of panels.
template <typename Scalar>
std::vector<RealOf<Scalar>> probe_l2_convergence(
    const FormFamily<Scalar>& family,
    const std::function<DenseVector<Scalar>(double)>& u,
    const std::vector<int>& n_list, ApproximantKind kind,
    const GelfandTriple<Scalar>& triple, int time_quadrature_nodes = 4096,
    const QuadratureSpec& quad = {}) {
  if (time_quadrature_nodes < 1)
    throw std::invalid_argument("probe_l2_convergence: need at least one time panel");
  const double T = family.horizon;
  const double w = T / time_quadrature_nodes;

  std::vector<double> times(time_quadrature_nodes);
  std::vector<DenseVector<Scalar>> samples(time_quadrature_nodes);
  std::vector<DenseVector<Scalar>> exact_applied(time_quadrature_nodes);
  for (int q = 0; q < time_quadrature_nodes; ++q) {
    times[q] = (q + 0.5) * w;
    samples[q] = u(times[q]);
    if (samples[q].size() != triple.dim)
      throw std::invalid_argument("probe_l2_convergence: u(t) has wrong size");
    exact_applied[q] = family.matrix_at(times[q]) * samples[q];
  }

  std::vector<RealOf<Scalar>> errors;
  errors.reserve(n_list.size());
  for (int n : n_list) {
    const AveragedFamily<Scalar> av = average(family, Subdivision(T, n), quad);
    RealOf<Scalar> acc = RealOf<Scalar>(0);
    for (int q = 0; q < time_quadrature_nodes; ++q) {
      const DenseMatrix<Scalar> approx = kind == ApproximantKind::Step
                                             ? eval_step(av, times[q])
                                             : eval_linear(av, times[q]);
      const RealOf<Scalar> e =
          norm(triple, (approx * samples[q] - exact_applied[q]).eval(), NormKind::Vdual);
      acc += w * e * e;
    }
    errors.push_back(std::sqrt(acc));
  }
  return errors;
}

}  // namespace evoform
