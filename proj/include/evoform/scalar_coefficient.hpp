#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace evoform {

/// Piecewise-affine scalar coefficient on [0, horizon]: on piece i the value
/// is offset[i] + slope[i] * t. Right-continuous at breakpoints; the final
/// piece includes the right endpoint. Covers every coefficient the scenario
/// catalog needs (constants, ramps, jumps, staircases) while keeping the
/// antiderivative, the total variation, and the extrema exactly computable.
class ScalarCoefficient {
 public:
  /// breaks: strictly increasing interior breakpoints (may be empty);
  /// offsets/slopes: one entry per piece (breaks.size() + 1 pieces).
  ScalarCoefficient(double horizon, std::vector<double> breaks,
                    std::vector<double> offsets, std::vector<double> slopes)
      : horizon_(horizon), breaks_(std::move(breaks)),
        offsets_(std::move(offsets)), slopes_(std::move(slopes)) {
    if (!(horizon_ > 0.0))
      throw std::invalid_argument("ScalarCoefficient: horizon must be positive");
    if (offsets_.size() != slopes_.size() || offsets_.empty())
      throw std::invalid_argument("ScalarCoefficient: offsets/slopes size mismatch");
    if (breaks_.size() + 1 != offsets_.size())
      throw std::invalid_argument("ScalarCoefficient: need one piece per breakpoint gap");
    double prev = 0.0;
    for (double b : breaks_) {
      if (!(b > prev) || !(b < horizon_))
        throw std::invalid_argument("ScalarCoefficient: breakpoints must be strictly inside (0, horizon) and increasing");
      prev = b;
    }
    build_tables();
  }

  static ScalarCoefficient constant(double value, double horizon) {
    return ScalarCoefficient(horizon, {}, {value}, {0.0});
  }

  static ScalarCoefficient affine(double a, double b, double horizon) {
    return ScalarCoefficient(horizon, {}, {a}, {b});
  }

  /// Piecewise constant: values[i] on [times[i-1], times[i]) with times[-1]=0.
  static ScalarCoefficient piecewise_constant(const std::vector<double>& jump_times,
                                              const std::vector<double>& values,
                                              double horizon) {
    if (values.size() != jump_times.size() + 1)
      throw std::invalid_argument("piecewise_constant: need one more value than jump time");
    std::vector<double> slopes(values.size(), 0.0);
    return ScalarCoefficient(horizon, jump_times, values, slopes);
  }

  /// c0 plus n_jumps equal upward steps of total height amplitude, at
  /// equispaced interior times. A bounded-variation stress case: no Lipschitz
  /// bound survives refinement, but the variation stays equal to amplitude.
  static ScalarCoefficient staircase(double c0, double amplitude, int n_jumps,
                                     double horizon) {
    if (n_jumps < 1) throw std::invalid_argument("staircase: need at least one jump");
    std::vector<double> times(n_jumps), values(n_jumps + 1);
    for (int i = 0; i < n_jumps; ++i)
      times[i] = horizon * (i + 1) / (n_jumps + 1);
    for (int i = 0; i <= n_jumps; ++i)
      values[i] = c0 + amplitude * i / n_jumps;
    return ScalarCoefficient(horizon, times, values, std::vector<double>(n_jumps + 1, 0.0));
  }

  double horizon() const { return horizon_; }

  double operator()(double t) const {
    const std::size_t i = piece_index(t);
    return offsets_[i] + slopes_[i] * t;
  }

  /// Exact antiderivative with C(0) = 0.
  double antiderivative(double t) const {
    const std::size_t i = piece_index(t);
    const double a = piece_start(i);
    return integral_at_start_[i] + offsets_[i] * (t - a) +
           0.5 * slopes_[i] * (t * t - a * a);
  }

  /// Total variation of the coefficient on [0, t]. Jumps at breakpoints count
  /// as soon as t reaches the breakpoint, matching right-continuity.
  double total_variation(double t) const {
    const std::size_t i = piece_index(t);
    return tv_at_start_[i] + std::abs(slopes_[i]) * (t - piece_start(i));
  }

  double min_value() const { return min_value_; }
  double max_value() const { return max_value_; }

  const std::vector<double>& jump_times() const { return jumps_; }

 private:
  std::size_t piece_index(double t) const {
    if (!(t >= 0.0) || !(t <= horizon_))
      throw std::invalid_argument("ScalarCoefficient: time outside [0, horizon]");
    // Right-continuous: t == breaks_[i] belongs to piece i+1.
    return std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin();
  }

  double piece_start(std::size_t i) const { return i == 0 ? 0.0 : breaks_[i - 1]; }
  double piece_end(std::size_t i) const {
    return i == breaks_.size() ? horizon_ : breaks_[i];
  }

  void build_tables() {
    const std::size_t n = offsets_.size();
    integral_at_start_.assign(n, 0.0);
    tv_at_start_.assign(n, 0.0);
    min_value_ = std::numeric_limits<double>::infinity();
    max_value_ = -min_value_;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = piece_start(i), b = piece_end(i);
      const double left = offsets_[i] + slopes_[i] * a;
      const double right = offsets_[i] + slopes_[i] * b;
      min_value_ = std::min({min_value_, left, right});
      max_value_ = std::max({max_value_, left, right});
      if (i + 1 < n) {
        integral_at_start_[i + 1] = integral_at_start_[i] + offsets_[i] * (b - a) +
                                    0.5 * slopes_[i] * (b * b - a * a);
        const double next_left = offsets_[i + 1] + slopes_[i + 1] * b;
        const double jump = std::abs(next_left - right);
        tv_at_start_[i + 1] =
            tv_at_start_[i] + std::abs(slopes_[i]) * (b - a) + jump;
        if (jump > 0.0) jumps_.push_back(b);
      }
    }
  }

  double horizon_;
  std::vector<double> breaks_;
  std::vector<double> offsets_;
  std::vector<double> slopes_;
  std::vector<double> integral_at_start_;
  std::vector<double> tv_at_start_;
  std::vector<double> jumps_;
  double min_value_ = 0.0;
  double max_value_ = 0.0;
};

}  // namespace evoform
