#pragma once

#include <cstdint>
#include <random>

#include "evoform/types.hpp"

namespace evoform {

/// Deterministic sample source for property checks. Gaussian variates are
/// produced by Box-Muller on top of mt19937_64 so that a given seed yields
/// the same byte stream on every run, independent of the standard library's
/// distribution internals.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // in [0, 1)
    return (engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  template <typename Scalar>
  DenseVector<Scalar> gaussian_vector(Index n) {
    DenseVector<Scalar> v(n);
    for (Index i = 0; i < n; ++i) v(i) = draw_scalar<Scalar>();
    return v;
  }

 private:
  template <typename Scalar>
  Scalar draw_scalar() {
    if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
      const double re = gaussian();
      const double im = gaussian();
      return Scalar(re * M_SQRT1_2, im * M_SQRT1_2);
    } else {
      return Scalar(gaussian());
    }
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace evoform
