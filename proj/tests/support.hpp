#pragma once

// Small helpers and independent reference computations shared by the tests.

#include <cmath>
#include <vector>

#include "tnorm/linalg.hpp"
#include "tnorm/tensor.hpp"

namespace testing {

using namespace tnorm;

inline FactorTuple random_unit_tuple(const Shape& shape, CounterRng& rng) {
  FactorTuple f;
  for (std::size_t k = 0; k < shape.order(); ++k) f.vectors.push_back(random_unit_vector(shape[k], rng));
  return f;
}

inline Vector basis(std::size_t n, std::size_t i) {
  Vector e(n, 0.0);
  e[i] = 1.0;
  return e;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) { return max_abs_diff(a.data(), b.data()); }

// Sine of the angle between u and a, insensitive to sign. Computed from the
// residual of the projection so that it stays accurate near zero.
inline double sin_angle(const Vector& u, const Vector& a) {
  const double nu = norm2(u), na = norm2(a);
  const double c = dot(u, a) / (nu * na);
  double r = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] / nu - c * a[i] / na;
    r += d * d;
  }
  return std::sqrt(r);
}

// Entry-by-entry sum, written out without any library contraction.
inline double brute_overlap(const DenseTensor& x, const FactorTuple& f) {
  double s = 0.0;
  IndexCounter it(x.shape());
  do {
    double p = x.at(it.index());
    for (std::size_t k = 0; k < f.order(); ++k) p *= f.vectors[k][it.index()[k]];
    s += p;
  } while (it.next());
  return s;
}

inline DenseTensor w_tensor() {
  const double c = 1.0 / std::sqrt(3.0);
  return DenseTensor(Shape{2, 2, 2}, {0, c, c, 0, c, 0, 0, 0});
}

// Maximum of <W, u(a) (x) u(b) (x) u(c)> with u(t) = (cos t, sin t) by grid
// refinement in the three angles, starting at `step` and shrinking around
// the best point until two successive levels agree to `stable`.
inline double w_grid_oracle(double step = 1e-2, double stable = 1e-6) {
  const double c = 1.0 / std::sqrt(3.0);
  auto f = [c](double a, double b, double g) {
    const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b), cg = std::cos(g),
                 sg = std::sin(g);
    return c * (ca * cb * sg + ca * sb * cg + sa * cb * cg);
  };
  const double pi = std::acos(-1.0);
  double best = -1.0, ba = 0, bb = 0, bg = 0;
  const int coarse = static_cast<int>(std::ceil(pi / 0.05));
  for (int i = 0; i < coarse; ++i)
    for (int j = 0; j < coarse; ++j)
      for (int k = 0; k < coarse; ++k) {
        const double a = i * pi / coarse, b = j * pi / coarse, g = k * pi / coarse;
        const double v = f(a, b, g);
        if (v > best) best = v, ba = a, bb = b, bg = g;
      }
  double prev = -2.0;
  double h = step;
  while (std::abs(best - prev) > stable || h > 1e-7) {
    prev = best;
    const double ca = ba, cb = bb, cg = bg;
    for (int i = -10; i <= 10; ++i)
      for (int j = -10; j <= 10; ++j)
        for (int k = -10; k <= 10; ++k) {
          const double a = ca + i * h, b = cb + j * h, g = cg + k * h;
          const double v = f(a, b, g);
          if (v > best) best = v, ba = a, bb = b, bg = g;
        }
    h /= 5.0;
  }
  return best;
}

}  // namespace testing
