#pragma once

// Dense real tensors of arbitrary order.
//
// Storage is lexicographic in the multi-index (i_1, ..., i_d) with the last
// index running fastest. Every flattening in this library (matricization,
// fiber order, file format) derives from that single rule. Indices are
// 0-based in this API; the command line and documentation use 1-based
// indices.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "tnorm/matrix.hpp"

namespace tnorm {

class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<std::size_t> dims);
  Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

  std::size_t order() const { return dims_.size(); }
  std::size_t operator[](std::size_t mode) const { return dims_[mode]; }
  const std::vector<std::size_t>& dims() const { return dims_; }

  /// Number of entries, the product of all dimensions.
  std::size_t numel() const;
  /// Row-major strides (last mode has stride 1).
  std::vector<std::size_t> strides() const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<std::size_t> dims_;
};

/// Immutable dense tensor.
class DenseTensor {
 public:
  DenseTensor() = default;
  /// Validates length and finiteness of `data`.
  DenseTensor(Shape shape, std::vector<double> data);

  static DenseTensor zeros(Shape shape);

  const Shape& shape() const { return shape_; }
  std::size_t order() const { return shape_.order(); }
  std::size_t dim(std::size_t mode) const { return shape_[mode]; }
  std::size_t numel() const { return data_.size(); }

  std::span<const double> data() const { return data_; }

  double at(std::span<const std::size_t> index) const;
  double operator()(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  std::size_t linear_index(std::span<const std::size_t> index) const;

  DenseTensor scaled(double alpha) const;

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// u^1, ..., u^d defining the elementary tensor u^1 (x) ... (x) u^d.
struct FactorTuple {
  std::vector<Vector> vectors;

  std::size_t order() const { return vectors.size(); }
  Shape shape() const;
  /// True when every vector has unit Euclidean norm within `tol`.
  bool is_normalized(double tol = 1e-12) const;
};

DenseTensor make_tensor(Shape shape, std::vector<double> data);

DenseTensor rank_one(const FactorTuple& factors);

double frobenius_inner(const DenseTensor& x, const DenseTensor& y);
double frobenius_norm(const DenseTensor& x);

/// X x_mode u: sum over i of u(i) * slice(X, mode, i). Order drops by one.
DenseTensor mode_contract(const DenseTensor& x, std::size_t mode, std::span<const double> u);

/// Contracts modes 1..d-1 with the given vectors, returning a vector of
/// length n_d. With d - 1 vectors this is the induced (d-1)-form.
Vector multiform_apply(const DenseTensor& x, std::span<const Vector> vectors);

/// <X, u^1 (x) ... (x) u^d>_F without forming the elementary tensor.
double overlap(const DenseTensor& x, const FactorTuple& factors);

/// Contracts every mode except `keep` with the corresponding factor.
Vector contract_all_but(const DenseTensor& x, const FactorTuple& factors, std::size_t keep);

/// Contracts every mode except `first` < `second`; row index runs over
/// `first`, column index over `second`.
Matrix contract_all_but_pair(const DenseTensor& x, const FactorTuple& factors,
                             std::size_t first, std::size_t second);

/// t-matricization. Rows are indexed by the modes in `row_modes` (taken in
/// increasing order, last fastest), columns by the remaining modes in the
/// same way. `row_modes` must be a nonempty proper subset.
Matrix matricize(const DenseTensor& x, std::vector<std::size_t> row_modes);

DenseTensor slice(const DenseTensor& x, std::size_t mode, std::size_t index);

/// The 1-D section along `mode`; `fixed` holds the indices of the other
/// modes in increasing mode order (d - 1 entries).
Vector fiber(const DenseTensor& x, std::size_t mode, std::span<const std::size_t> fixed);

/// Y with Y(i_{perm[0]}, ..., i_{perm[d-1]}) = X(i_0, ..., i_{d-1}), so the
/// k-th mode of Y is mode perm[k] of X.
DenseTensor permute_modes(const DenseTensor& x, std::span<const std::size_t> perm);

/// Applies `m` (rows indexed by the new index) along `mode`:
/// Y(.., j, ..) = sum_i m(j, i) X(.., i, ..).
DenseTensor mode_multiply(const DenseTensor& x, std::size_t mode, const Matrix& m);

/// Iterates over all multi-indices of `shape` in storage order.
class IndexCounter {
 public:
  explicit IndexCounter(const Shape& shape) : dims_(shape.dims()), index_(dims_.size(), 0) {}
  explicit IndexCounter(std::vector<std::size_t> dims) : dims_(std::move(dims)), index_(dims_.size(), 0) {}

  const std::vector<std::size_t>& index() const { return index_; }
  /// Advances; returns false after the last index.
  bool next();

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> index_;
};

}  // namespace tnorm
