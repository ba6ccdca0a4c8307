#pragma once

// Orthogonal tensors: X with n_1 <= ... <= n_d is orthogonal when its induced
// (d-1)-form is length preserving,
//   ||omega_X(u^1, ..., u^{d-1})||_2 = prod ||u^mu||_2   for all u^mu.
// Such tensors have ||X||_2 = 1 and ||X||_F^2 = n_1 ... n_{d-1}, i.e. they
// attain the smallest possible spectral-to-Frobenius ratio.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tnorm/linalg.hpp"
#include "tnorm/tensor.hpp"

namespace tnorm {

enum class Algebra { reals = 1, complexes = 2, quaternions = 4, octonions = 8 };

std::size_t dimension(Algebra a);
std::string to_string(Algebra a);
Algebra parse_algebra(const std::string& s);

/// Signed basis index of the product e_i * e_j: table entry (i, j) is
/// sign * e_index (0-based index).
struct SignedIndex {
  int sign;
  std::size_t index;
};
SignedIndex mult_table_entry(Algebra a, std::size_t i, std::size_t j);

/// n x n x n multiplication tensor with X(i, j, :) = e_i * e_j.
DenseTensor mult_tensor(Algebra a);

/// l x m x n tensor whose i-th mode-1 slice is [0 ... Q_i ... 0] with Q_i in
/// column block i. Requires l <= m <= n, l*m <= n and orthogonal Q_i.
DenseTensor tall_orthogonal(std::size_t l, std::size_t m, std::size_t n,
                            const std::vector<Matrix>& blocks);
/// Same with seeded random orthogonal blocks.
DenseTensor tall_orthogonal(std::size_t l, std::size_t m, std::size_t n, Seed seed);

/// Order-(d+1) orthogonal tensor from an orthogonal X with sorted dims: the
/// algebra table is expanded with slice(X, mode, slices[k]) in place of e_k,
/// producing shape n_1 x ... x n_{mode-1} x n x n x n_{mode+1} x ... x n_d.
/// `mode` is 0-based and must be below d - 1; n = dimension(a) <= n_mode.
DenseTensor lift_orthogonal(const DenseTensor& x, std::size_t mode, Algebra a,
                            const std::vector<std::size_t>& slices);
/// Uses the first n slices.
DenseTensor lift_orthogonal(const DenseTensor& x, std::size_t mode, Algebra a);

/// Restriction of modes 0..d-2 to the given index sets; the last mode is
/// kept whole.
DenseTensor subtensor(const DenseTensor& x, const std::vector<std::vector<std::size_t>>& subsets);

struct OrthogonalityReport {
  bool is_orthogonal = false;
  double max_violation = 0.0;
  /// Grid tuple (in sorted mode order) attaining max_violation.
  FactorTuple witness;
  std::size_t grid_size = 0;
  /// Sorted tensor has mode k equal to mode permutation[k] of the input.
  std::vector<std::size_t> permutation;
};

/// Exact orthogonality test. The violation
///   v(s^1, ..., s^{d-1}) = ||omega_X(s)||^2 - prod ||s^mu||^2
/// is a quadratic form in each argument, so it vanishes identically iff it
/// vanishes on the grid s^mu in {e_i} u {e_i + e_j : i < j}. Modes are sorted
/// by dimension first (stable). Passes iff max |v| <= tol * ||X||_F^2.
OrthogonalityReport check_orthogonal(const DenseTensor& x, double tol = 1e-10);

/// c > 0 with X / c orthogonal (then ||X||_2 = c), or nullopt. A cheap
/// fiber-norm screen runs before the exact check.
std::optional<double> orthogonal_scale(const DenseTensor& x, double tol = 1e-10);

/// max |v| over `samples` random unit tuples, for cross-checking the grid.
double sampled_orthogonality_violation(const DenseTensor& x, std::size_t samples, Seed seed);

/// n x n x n tensor with slices X(:, :, k) = S^(k-1), S the cyclic shift.
DenseTensor fooling_tensor(std::size_t n);

struct Known4 {
  DenseTensor tensor;
  Vector a;
  Vector b;
};

/// X = sum_{i<m} A_i (x) B_i with A_i = Q_a diag(1, l_2, ..., l_n) Q_a^T,
/// Q_a = complete_basis(a), l uniform in [-band, band] (B_i likewise with b).
/// ||X||_2 = m, attained at a (x) a (x) b (x) b.
Known4 known4_tensor(std::size_t n, std::size_t m, Seed seed, double band = 0.9);

}  // namespace tnorm
