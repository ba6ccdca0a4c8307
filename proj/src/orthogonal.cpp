#include "tnorm/orthogonal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tnorm {

namespace {

// Octonion multiplication table, 1-based signed basis indices: row i,
// column j holds s*k for e_i * e_j = s e_k. The leading 4x4 and 2x2 blocks
// are the quaternion and complex tables, and the leading 1x1 block the reals.
constexpr int kOctonionTable[8][8] = {
    {1, 2, 3, 4, 5, 6, 7, 8},         {2, -1, 4, -3, 6, -5, -8, 7},
    {3, -4, -1, 2, 7, 8, -5, -6},     {4, 3, -2, -1, 8, -7, 6, -5},
    {5, -6, -7, -8, -1, 2, 3, 4},     {6, 5, -8, 7, -2, -1, -4, 3},
    {7, 8, 5, -6, -3, 4, -1, -2},     {8, -7, 6, 5, -4, -3, 2, -1},
};

bool dims_sorted(const Shape& s) {
  return std::is_sorted(s.dims().begin(), s.dims().end());
}

struct GridVector {
  std::size_t i;
  std::size_t j;  // == i for e_i
  double norm_sq;
};

std::vector<GridVector> polarization_grid(std::size_t n) {
  std::vector<GridVector> g;
  for (std::size_t i = 0; i < n; ++i) g.push_back({i, i, 1.0});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.push_back({i, j, 2.0});
  return g;
}

Vector grid_vector(const GridVector& g, std::size_t n) {
  Vector v(n, 0.0);
  v[g.i] = 1.0;
  v[g.j] = 1.0;
  return v;
}

struct GridSearch {
  const std::vector<std::size_t>& dims;
  std::vector<std::vector<GridVector>> grids;
  std::vector<std::size_t> choice;
  std::vector<std::size_t> best_choice;
  double worst = -1.0;
  std::size_t visited = 0;

  // `block` holds the tensor with the first `level` modes contracted.
  void visit(std::size_t level, std::span<const double> block, double norm_product) {
    const std::size_t d = dims.size();
    if (level + 1 == d) {
      const double v = std::abs(dot(block, block) - norm_product);
      ++visited;
      if (v > worst) {
        worst = v;
        best_choice = choice;
      }
      return;
    }
    const std::size_t n = dims[level];
    const std::size_t inner = block.size() / n;
    Vector next(inner);
    for (std::size_t g = 0; g < grids[level].size(); ++g) {
      const GridVector& gv = grids[level][g];
      const double* a = block.data() + gv.i * inner;
      if (gv.i == gv.j) {
        std::copy(a, a + inner, next.begin());
      } else {
        const double* b = block.data() + gv.j * inner;
        for (std::size_t q = 0; q < inner; ++q) next[q] = a[q] + b[q];
      }
      choice[level] = g;
      visit(level + 1, next, norm_product * gv.norm_sq);
    }
  }
};

}  // namespace

std::size_t dimension(Algebra a) { return static_cast<std::size_t>(a); }

std::string to_string(Algebra a) {
  switch (a) {
    case Algebra::reals: return "reals";
    case Algebra::complexes: return "complexes";
    case Algebra::quaternions: return "quaternions";
    case Algebra::octonions: return "octonions";
  }
  return "?";
}

Algebra parse_algebra(const std::string& s) {
  if (s == "reals" || s == "R" || s == "1") return Algebra::reals;
  if (s == "complexes" || s == "complex" || s == "C" || s == "2") return Algebra::complexes;
  if (s == "quaternions" || s == "quaternion" || s == "H" || s == "4") return Algebra::quaternions;
  if (s == "octonions" || s == "octonion" || s == "O" || s == "8") return Algebra::octonions;
  throw InvalidArgument("unknown algebra '" + s + "'");
}

SignedIndex mult_table_entry(Algebra a, std::size_t i, std::size_t j) {
  const std::size_t n = dimension(a);
  if (i >= n || j >= n) throw InvalidArgument("multiplication table index out of range");
  const int e = kOctonionTable[i][j];
  return {e > 0 ? 1 : -1, static_cast<std::size_t>(std::abs(e) - 1)};
}

DenseTensor mult_tensor(Algebra a) {
  const std::size_t n = dimension(a);
  std::vector<double> data(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const SignedIndex e = mult_table_entry(a, i, j);
      data[(i * n + j) * n + e.index] = e.sign;
    }
  return DenseTensor(Shape{n, n, n}, std::move(data));
}

DenseTensor tall_orthogonal(std::size_t l, std::size_t m, std::size_t n,
                            const std::vector<Matrix>& blocks) {
  if (l < 1 || l > m || m > n || l * m > n) {
    throw InvalidArgument("tall_orthogonal needs 1 <= l <= m <= n and l*m <= n");
  }
  if (blocks.size() != l) throw InvalidArgument("tall_orthogonal needs exactly l blocks");
  for (const auto& q : blocks) {
    if (q.rows() != m || q.cols() != m) throw InvalidArgument("blocks must be m x m");
    if (orthonormality_defect(q) > 1e-10) throw InvalidArgument("blocks must be orthogonal");
  }
  std::vector<double> data(l * m * n, 0.0);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) data[(i * m + r) * n + i * m + c] = blocks[i](r, c);
  return DenseTensor(Shape{l, m, n}, std::move(data));
}

DenseTensor tall_orthogonal(std::size_t l, std::size_t m, std::size_t n, Seed seed) {
  CounterRng rng(seed);
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i < l; ++i) blocks.push_back(random_orthogonal(m, rng));
  return tall_orthogonal(l, m, n, blocks);
}

DenseTensor lift_orthogonal(const DenseTensor& x, std::size_t mode, Algebra a,
                            const std::vector<std::size_t>& slices) {
  const std::size_t d = x.order();
  const std::size_t n = dimension(a);
  if (!dims_sorted(x.shape())) throw InvalidArgument("lift_orthogonal needs nondecreasing dims");
  if (d < 2 || mode + 1 >= d) throw InvalidArgument("lift mode must be below the last mode");
  if (n > x.dim(mode)) throw InvalidArgument("algebra dimension exceeds the lifted mode");
  if (slices.size() != n) throw InvalidArgument("need one slice index per algebra basis vector");
  std::vector<std::size_t> sorted(slices);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
      sorted.back() >= x.dim(mode)) {
    throw InvalidArgument("slice indices must be distinct and in range");
  }
  if (!check_orthogonal(x).is_orthogonal) throw InvalidArgument("lift_orthogonal needs an orthogonal tensor");

  const auto& dims = x.shape().dims();
  std::size_t outer = 1;
  for (std::size_t k = 0; k < mode; ++k) outer *= dims[k];
  std::size_t inner = 1;
  for (std::size_t k = mode + 1; k < d; ++k) inner *= dims[k];
  const std::size_t nm = dims[mode];

  std::vector<double> data(outer * n * n * inner, 0.0);
  auto src = x.data();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const SignedIndex e = mult_table_entry(a, i, j);
        const double* from = src.data() + (o * nm + slices[e.index]) * inner;
        double* to = data.data() + ((o * n + i) * n + j) * inner;
        for (std::size_t q = 0; q < inner; ++q) to[q] = e.sign * from[q];
      }

  std::vector<std::size_t> out_dims(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(mode));
  out_dims.push_back(n);
  out_dims.push_back(n);
  out_dims.insert(out_dims.end(), dims.begin() + static_cast<std::ptrdiff_t>(mode) + 1, dims.end());
  return DenseTensor(Shape(std::move(out_dims)), std::move(data));
}

DenseTensor lift_orthogonal(const DenseTensor& x, std::size_t mode, Algebra a) {
  std::vector<std::size_t> slices(dimension(a));
  std::iota(slices.begin(), slices.end(), 0);
  return lift_orthogonal(x, mode, a, slices);
}

DenseTensor subtensor(const DenseTensor& x, const std::vector<std::vector<std::size_t>>& subsets) {
  const std::size_t d = x.order();
  if (subsets.size() + 1 != d) throw InvalidArgument("subtensor needs index sets for modes 1..d-1");
  std::vector<std::size_t> out_dims;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    if (subsets[k].empty()) throw InvalidArgument("subtensor index sets must be nonempty");
    for (std::size_t i : subsets[k]) {
      if (i >= x.dim(k)) throw InvalidArgument("subtensor index out of range");
    }
    out_dims.push_back(subsets[k].size());
  }
  const std::size_t last = x.dim(d - 1);
  out_dims.push_back(last);

  Shape out_shape(out_dims);
  std::vector<double> data;
  data.reserve(out_shape.numel());
  std::vector<std::size_t> lead(out_dims.begin(), out_dims.end() - 1);
  if (lead.empty()) lead.push_back(1);
  IndexCounter it(lead);
  std::vector<std::size_t> src(d, 0);
  do {
    for (std::size_t k = 0; k + 1 < d; ++k) src[k] = subsets[k][it.index()[k]];
    src[d - 1] = 0;
    const std::size_t base = x.linear_index(src);
    for (std::size_t q = 0; q < last; ++q) data.push_back(x.data()[base + q]);
  } while (it.next());
  return DenseTensor(std::move(out_shape), std::move(data));
}

OrthogonalityReport check_orthogonal(const DenseTensor& x, double tol) {
  OrthogonalityReport report;
  const std::size_t d = x.order();
  report.permutation.resize(d);
  std::iota(report.permutation.begin(), report.permutation.end(), 0);
  std::stable_sort(report.permutation.begin(), report.permutation.end(),
                   [&](std::size_t a, std::size_t b) { return x.dim(a) < x.dim(b); });
  const DenseTensor sorted = permute_modes(x, report.permutation);
  const auto& dims = sorted.shape().dims();

  GridSearch search{dims, {}, std::vector<std::size_t>(d - 1, 0), {}, -1.0, 0};
  for (std::size_t k = 0; k + 1 < d; ++k) search.grids.push_back(polarization_grid(dims[k]));
  search.visit(0, sorted.data(), 1.0);

  report.max_violation = search.worst;
  report.grid_size = search.visited;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    report.witness.vectors.push_back(grid_vector(search.grids[k][search.best_choice[k]], dims[k]));
  }
  const double fro_sq = frobenius_inner(x, x);
  report.is_orthogonal = report.max_violation <= tol * fro_sq;
  return report;
}

std::optional<double> orthogonal_scale(const DenseTensor& x, double tol) {
  const auto& dims = x.shape().dims();
  const std::size_t d = dims.size();
  if (d < 2) return std::nullopt;
  // the mode that the stable sort puts last
  std::size_t last = 0;
  for (std::size_t k = 1; k < d; ++k)
    if (dims[k] >= dims[last]) last = k;
  const double fro = frobenius_norm(x);
  if (fro == 0.0) return std::nullopt;
  const double c = fro / std::sqrt(static_cast<double>(x.numel() / dims[last]));
  std::vector<std::size_t> perm;
  for (std::size_t k = 0; k < d; ++k)
    if (k != last) perm.push_back(k);
  perm.push_back(last);
  const DenseTensor y = permute_modes(x, perm);
  const std::size_t n = dims[last];
  for (std::size_t r = 0; r < y.numel() / n; ++r) {
    if (std::abs(norm2(y.data().subspan(r * n, n)) - c) > 1e-8 * c) return std::nullopt;
  }
  if (!check_orthogonal(x.scaled(1.0 / c), tol).is_orthogonal) return std::nullopt;
  return c;
}

double sampled_orthogonality_violation(const DenseTensor& x, std::size_t samples, Seed seed) {
  std::vector<std::size_t> perm(x.order());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return x.dim(a) < x.dim(b); });
  const DenseTensor sorted = permute_modes(x, perm);
  CounterRng rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<Vector> us;
    for (std::size_t k = 0; k + 1 < sorted.order(); ++k) us.push_back(random_unit_vector(sorted.dim(k), rng));
    const Vector w = multiform_apply(sorted, us);
    worst = std::max(worst, std::abs(dot(w, w) - 1.0));
  }
  return worst;
}

DenseTensor fooling_tensor(std::size_t n) {
  if (n < 1) throw InvalidArgument("fooling_tensor needs n >= 1");
  std::vector<double> data(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) data[(i * n + (i + k) % n) * n + k] = 1.0;
  return DenseTensor(Shape{n, n, n}, std::move(data));
}

Known4 known4_tensor(std::size_t n, std::size_t m, Seed seed, double band) {
  if (n < 2 || m < 1) throw InvalidArgument("known4_tensor needs n >= 2 and m >= 1");
  if (band < 0.0 || band >= 1.0) throw InvalidArgument("eigenvalue band must lie in [0, 1)");
  CounterRng rng(seed);
  Known4 k;
  k.a = random_unit_vector(n, rng);
  k.b = random_unit_vector(n, rng);
  const Matrix qa = complete_basis(k.a);
  const Matrix qb = complete_basis(k.b);

  auto planted = [&](const Matrix& q) {
    Matrix scaled = q;  // q * diag(1, l_2, ..., l_n)
    for (std::size_t c = 1; c < n; ++c) {
      const double lambda = band == 0.0 ? 0.0 : rng.uniform(-band, band);
      for (std::size_t r = 0; r < n; ++r) scaled(r, c) *= lambda;
    }
    return scaled * q.transposed();
  };

  const std::size_t nn = n * n;
  std::vector<double> data(nn * nn, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    const Matrix a = planted(qa);
    const Matrix b = planted(qb);
    for (std::size_t r = 0; r < nn; ++r) {
      const double ar = a.data()[r];
      if (ar == 0.0) continue;
      double* row = data.data() + r * nn;
      for (std::size_t c = 0; c < nn; ++c) row[c] += ar * b.data()[c];
    }
  }
  k.tensor = DenseTensor(Shape{n, n, n, n}, std::move(data));
  return k;
}

}  // namespace tnorm
