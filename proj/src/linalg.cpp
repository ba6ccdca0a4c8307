#include "tnorm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace tnorm {

namespace {

constexpr int kMaxJacobiSweeps = 80;

// Gram-Schmidt (two passes) of e_0, e_1, ... against `basis`, appending
// until `basis` holds `want` orthonormal columns.
void complete_columns(std::vector<Vector>& basis, std::size_t dim, std::size_t want) {
  for (std::size_t e = 0; e < dim && basis.size() < want; ++e) {
    Vector c(dim, 0.0);
    c[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double p = dot(b, c);
        for (std::size_t i = 0; i < dim; ++i) c[i] -= p * b[i];
      }
    }
    const double n = norm2(c);
    if (n > 0.5) {
      for (double& v : c) v /= n;
      basis.push_back(std::move(c));
    }
  }
}

// One-sided Jacobi on the columns of a tall (rows >= cols) matrix.
SvdResult jacobi_tall(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<Vector> w(n, Vector(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) w[j][i] = a(i, j);
  std::vector<Vector> v(n, Vector(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) v[j][j] = 1.0;

  const double tol = std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(m));
  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(w[p], w[p]);
        const double beta = dot(w[q], w[q]);
        const double gamma = dot(w[p], w[q]);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w[p][i];
          const double wq = w[q][i];
          w[p][i] = c * wp - s * wq;
          w[q][i] = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v[p][i];
          const double vq = v[q][i];
          v[p][i] = c * vp - s * vq;
          v[q][i] = s * vp + c * vq;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) throw NumericalError("Jacobi SVD did not converge");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(w[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  std::vector<Vector> ucols;
  SvdResult r;
  r.singular_values.resize(n);
  r.v = Matrix(n, n);
  std::size_t nonzero = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    r.singular_values[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) r.v(i, k) = v[j][i];
    if (sigma[j] > 0.0) {
      Vector u = w[j];
      for (double& x : u) x /= sigma[j];
      ucols.push_back(std::move(u));
      ++nonzero;
    }
  }
  complete_columns(ucols, m, n);
  r.u = Matrix(m, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < m; ++i) r.u(i, k) = ucols[k][i];
  return r;
}

}  // namespace

SvdResult svd(const Matrix& a) {
  for (double x : a.data()) {
    if (!std::isfinite(x)) throw InvalidArgument("svd: non-finite entry");
  }
  if (a.rows() == 0 || a.cols() == 0) throw InvalidArgument("svd: empty matrix");
  if (a.rows() >= a.cols()) return jacobi_tall(a);
  SvdResult t = jacobi_tall(a.transposed());
  return {std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

void apply_sign_rule(Vector& u, Vector& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (std::abs(u[i]) > std::abs(u[best])) best = i;
  }
  if (!u.empty() && u[best] < 0.0) {
    for (double& x : u) x = -x;
    for (double& x : v) x = -x;
  }
}

SingularTriplet top_singular_triplet(const Matrix& a) {
  SvdResult r = svd(a);
  if (r.singular_values.front() == 0.0) {
    throw InvalidArgument("top singular direction of the zero matrix is undefined");
  }
  SingularTriplet t{r.singular_values.front(), r.u.column(0), r.v.column(0)};
  apply_sign_rule(t.u, t.v);
  return t;
}

Matrix complete_basis(std::span<const double> u) {
  const std::size_t n = u.size();
  if (n == 0 || std::abs(norm2(u) - 1.0) > 1e-10) {
    throw InvalidArgument("complete_basis needs a unit vector");
  }
  // reflect along w = u + s e_1 with s chosen to avoid cancellation;
  // H e_1 = -s u, so the first column is fixed up by the sign afterwards
  const double s = u[0] >= 0.0 ? 1.0 : -1.0;
  Vector w(u.begin(), u.end());
  w[0] += s;
  const double ww = dot(w, w);
  Matrix q = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) -= 2.0 * w[i] * w[j] / ww;
  if (s > 0.0) {
    for (std::size_t i = 0; i < n; ++i) q(i, 0) = -q(i, 0);
  }
  return q;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed Seed::derive(std::uint64_t salt) const {
  return {splitmix64(splitmix64(master ^ (stream * 0xd1b54a32d192ed03ULL)) + salt), 0};
}

CounterRng::CounterRng(Seed seed) : key_(splitmix64(seed.master) ^ splitmix64(~seed.stream)) {}

std::uint64_t CounterRng::next_u64() {
  return splitmix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

Vector gaussian_vector(std::size_t n, CounterRng& rng) {
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

DenseTensor gaussian_tensor(const Shape& shape, Seed seed) {
  CounterRng rng(seed);
  return DenseTensor(shape, gaussian_vector(shape.numel(), rng));
}

Vector random_unit_vector(std::size_t n, CounterRng& rng) {
  for (;;) {
    Vector v = gaussian_vector(n, rng);
    if (norm2(v) > 0.0) return normalized(v);
  }
}

Matrix random_orthogonal(std::size_t n, CounterRng& rng) {
  std::vector<Vector> cols;
  while (cols.size() < n) {
    Vector c = gaussian_vector(n, rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : cols) {
        const double p = dot(b, c);
        for (std::size_t i = 0; i < n; ++i) c[i] -= p * b[i];
      }
    }
    const double nc = norm2(c);
    if (nc < 1e-8) continue;
    for (double& x : c) x /= nc;
    cols.push_back(std::move(c));
  }
  Matrix q(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) q(i, j) = cols[j][i];
  return q;
}

double orthonormality_defect(const Matrix& q, bool columns) {
  const Matrix g = columns ? q.transposed() * q : q * q.transposed();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

}  // namespace tnorm
