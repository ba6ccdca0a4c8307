#include "tnorm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tnorm {

namespace {

std::size_t product(std::span<const std::size_t> dims, std::size_t begin, std::size_t end) {
  std::size_t p = 1;
  for (std::size_t k = begin; k < end; ++k) p *= dims[k];
  return p;
}

void require_mode(const DenseTensor& x, std::size_t mode) {
  if (mode >= x.order()) {
    throw InvalidArgument("mode " + std::to_string(mode + 1) + " out of range for order " +
                          std::to_string(x.order()));
  }
}

}  // namespace

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidArgument("shape must have at least one mode");
  for (std::size_t n : dims_) {
    if (n == 0) throw InvalidArgument("every dimension must be positive");
  }
}

std::size_t Shape::numel() const { return product(dims_, 0, dims_.size()); }

std::vector<std::size_t> Shape::strides() const {
  std::vector<std::size_t> s(dims_.size(), 1);
  for (std::size_t k = dims_.size(); k-- > 1;) s[k - 1] = s[k] * dims_[k];
  return s;
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.order() == 0) throw InvalidArgument("tensor needs a shape");
  if (data_.size() != shape_.numel()) {
    throw InvalidArgument("data length " + std::to_string(data_.size()) +
                          " does not match shape product " + std::to_string(shape_.numel()));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw InvalidArgument("tensor entries must be finite");
  }
}

DenseTensor DenseTensor::zeros(Shape shape) {
  std::vector<double> data(shape.numel(), 0.0);
  return DenseTensor(std::move(shape), std::move(data));
}

std::size_t DenseTensor::linear_index(std::span<const std::size_t> index) const {
  if (index.size() != order()) throw InvalidArgument("index has wrong number of modes");
  std::size_t lin = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= shape_[k]) throw InvalidArgument("index out of range");
    lin = lin * shape_[k] + index[k];
  }
  return lin;
}

double DenseTensor::at(std::span<const std::size_t> index) const {
  return data_[linear_index(index)];
}

DenseTensor DenseTensor::scaled(double alpha) const {
  std::vector<double> d(data_);
  for (double& v : d) v *= alpha;
  return DenseTensor(shape_, std::move(d));
}

Shape FactorTuple::shape() const {
  std::vector<std::size_t> dims;
  dims.reserve(vectors.size());
  for (const auto& v : vectors) dims.push_back(v.size());
  return Shape(std::move(dims));
}

bool FactorTuple::is_normalized(double tol) const {
  return std::all_of(vectors.begin(), vectors.end(),
                     [tol](const Vector& v) { return std::abs(norm2(v) - 1.0) <= tol; });
}

bool IndexCounter::next() {
  for (std::size_t k = index_.size(); k-- > 0;) {
    if (++index_[k] < dims_[k]) return true;
    index_[k] = 0;
  }
  return false;
}

DenseTensor make_tensor(Shape shape, std::vector<double> data) {
  return DenseTensor(std::move(shape), std::move(data));
}

DenseTensor rank_one(const FactorTuple& factors) {
  if (factors.vectors.empty()) throw InvalidArgument("rank_one needs at least one factor");
  Shape shape = factors.shape();
  std::vector<double> data{1.0};
  for (const auto& u : factors.vectors) {
    std::vector<double> next;
    next.reserve(data.size() * u.size());
    for (double a : data)
      for (double b : u) next.push_back(a * b);
    data = std::move(next);
  }
  return DenseTensor(std::move(shape), std::move(data));
}

double frobenius_inner(const DenseTensor& x, const DenseTensor& y) {
  if (x.shape() != y.shape()) throw InvalidArgument("frobenius_inner: shape mismatch");
  return dot(x.data(), y.data());
}

double frobenius_norm(const DenseTensor& x) { return norm2(x.data()); }

DenseTensor mode_contract(const DenseTensor& x, std::size_t mode, std::span<const double> u) {
  require_mode(x, mode);
  const auto& dims = x.shape().dims();
  if (u.size() != dims[mode]) throw InvalidArgument("mode_contract: vector length mismatch");
  const std::size_t outer = product(dims, 0, mode);
  const std::size_t inner = product(dims, mode + 1, dims.size());
  const std::size_t n = dims[mode];

  std::vector<double> out(outer * inner, 0.0);
  auto src = x.data();
  for (std::size_t o = 0; o < outer; ++o) {
    double* dst = out.data() + o * inner;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = u[i];
      if (w == 0.0) continue;
      const double* row = src.data() + (o * n + i) * inner;
      for (std::size_t j = 0; j < inner; ++j) dst[j] += w * row[j];
    }
  }

  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (k != mode) rest.push_back(dims[k]);
  // contracting a vector leaves a scalar, stored as a length-1 vector
  if (rest.empty()) rest.push_back(1);
  return DenseTensor(Shape(std::move(rest)), std::move(out));
}

Vector multiform_apply(const DenseTensor& x, std::span<const Vector> vectors) {
  if (vectors.size() + 1 != x.order()) {
    throw InvalidArgument("multiform_apply needs exactly d-1 vectors");
  }
  DenseTensor cur = x;
  // contracting the leading mode each time keeps the remaining modes aligned
  for (const auto& v : vectors) cur = mode_contract(cur, 0, v);
  auto d = cur.data();
  return Vector(d.begin(), d.end());
}

Vector contract_all_but(const DenseTensor& x, const FactorTuple& factors, std::size_t keep) {
  if (factors.order() != x.order()) throw InvalidArgument("factor count does not match order");
  require_mode(x, keep);
  DenseTensor cur = x;
  for (std::size_t k = x.order(); k-- > 0;) {
    if (k == keep) continue;
    cur = mode_contract(cur, k, factors.vectors[k]);
  }
  auto d = cur.data();
  return Vector(d.begin(), d.end());
}

double overlap(const DenseTensor& x, const FactorTuple& factors) {
  if (factors.order() != x.order()) throw InvalidArgument("factor count does not match order");
  return dot(contract_all_but(x, factors, 0), factors.vectors[0]);
}

Matrix contract_all_but_pair(const DenseTensor& x, const FactorTuple& factors,
                             std::size_t first, std::size_t second) {
  if (factors.order() != x.order()) throw InvalidArgument("factor count does not match order");
  if (!(first < second)) throw InvalidArgument("contract_all_but_pair needs first < second");
  require_mode(x, second);
  DenseTensor cur = x;
  for (std::size_t k = x.order(); k-- > 0;) {
    if (k == first || k == second) continue;
    cur = mode_contract(cur, k, factors.vectors[k]);
  }
  auto d = cur.data();
  return Matrix(x.dim(first), x.dim(second), std::vector<double>(d.begin(), d.end()));
}

Matrix matricize(const DenseTensor& x, std::vector<std::size_t> row_modes) {
  const std::size_t d = x.order();
  std::sort(row_modes.begin(), row_modes.end());
  if (row_modes.empty() || row_modes.size() >= d ||
      std::adjacent_find(row_modes.begin(), row_modes.end()) != row_modes.end() ||
      row_modes.back() >= d) {
    throw InvalidArgument("matricize needs a nonempty proper subset of modes");
  }
  std::vector<bool> in_rows(d, false);
  for (std::size_t m : row_modes) in_rows[m] = true;

  // per-mode weights into the row or column linearization
  std::vector<std::size_t> weight(d, 0);
  std::size_t rows = 1;
  std::size_t cols = 1;
  for (std::size_t k = d; k-- > 0;) {
    if (in_rows[k]) {
      weight[k] = rows;
      rows *= x.dim(k);
    } else {
      weight[k] = cols;
      cols *= x.dim(k);
    }
  }

  Matrix m(rows, cols);
  IndexCounter it(x.shape());
  auto data = x.data();
  std::size_t lin = 0;
  do {
    std::size_t r = 0;
    std::size_t c = 0;
    const auto& idx = it.index();
    for (std::size_t k = 0; k < d; ++k) (in_rows[k] ? r : c) += idx[k] * weight[k];
    m(r, c) = data[lin++];
  } while (it.next());
  return m;
}

DenseTensor slice(const DenseTensor& x, std::size_t mode, std::size_t index) {
  require_mode(x, mode);
  if (index >= x.dim(mode)) throw InvalidArgument("slice index out of range");
  Vector e(x.dim(mode), 0.0);
  e[index] = 1.0;
  return mode_contract(x, mode, e);
}

Vector fiber(const DenseTensor& x, std::size_t mode, std::span<const std::size_t> fixed) {
  require_mode(x, mode);
  if (fixed.size() + 1 != x.order()) throw InvalidArgument("fiber needs d-1 fixed indices");
  std::vector<std::size_t> idx;
  idx.reserve(x.order());
  for (std::size_t k = 0, f = 0; k < x.order(); ++k) idx.push_back(k == mode ? 0 : fixed[f++]);
  const std::size_t stride = x.shape().strides()[mode];
  const std::size_t base = x.linear_index(idx);
  Vector out(x.dim(mode));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x.data()[base + i * stride];
  return out;
}

DenseTensor permute_modes(const DenseTensor& x, std::span<const std::size_t> perm) {
  const std::size_t d = x.order();
  std::vector<std::size_t> check(perm.begin(), perm.end());
  std::sort(check.begin(), check.end());
  for (std::size_t k = 0; k < check.size(); ++k) {
    if (check.size() != d || check[k] != k) throw InvalidArgument("not a permutation of the modes");
  }
  if (perm.size() != d) throw InvalidArgument("not a permutation of the modes");

  std::vector<std::size_t> dims(d);
  for (std::size_t k = 0; k < d; ++k) dims[k] = x.dim(perm[k]);
  Shape out_shape(dims);
  const auto out_strides = out_shape.strides();
  // stride in Y contributed by each mode of X
  std::vector<std::size_t> weight(d);
  for (std::size_t k = 0; k < d; ++k) weight[perm[k]] = out_strides[k];

  std::vector<double> out(x.numel());
  IndexCounter it(x.shape());
  std::size_t lin = 0;
  do {
    std::size_t target = 0;
    for (std::size_t k = 0; k < d; ++k) target += it.index()[k] * weight[k];
    out[target] = x.data()[lin++];
  } while (it.next());
  return DenseTensor(std::move(out_shape), std::move(out));
}

DenseTensor mode_multiply(const DenseTensor& x, std::size_t mode, const Matrix& m) {
  require_mode(x, mode);
  const auto& dims = x.shape().dims();
  if (m.cols() != dims[mode]) throw InvalidArgument("mode_multiply: matrix columns mismatch");
  const std::size_t outer = product(dims, 0, mode);
  const std::size_t inner = product(dims, mode + 1, dims.size());
  const std::size_t n = dims[mode];
  const std::size_t r = m.rows();

  std::vector<double> out(outer * r * inner, 0.0);
  auto src = x.data();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t j = 0; j < r; ++j) {
      double* dst = out.data() + (o * r + j) * inner;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = m(j, i);
        if (w == 0.0) continue;
        const double* row = src.data() + (o * n + i) * inner;
        for (std::size_t q = 0; q < inner; ++q) dst[q] += w * row[q];
      }
    }
  std::vector<std::size_t> new_dims(dims);
  new_dims[mode] = r;
  return DenseTensor(Shape(std::move(new_dims)), std::move(out));
}

}  // namespace tnorm
