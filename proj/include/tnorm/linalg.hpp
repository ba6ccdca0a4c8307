#pragma once

#include <cstdint>
#include <span>

#include "tnorm/matrix.hpp"
#include "tnorm/tensor.hpp"

namespace tnorm {

/// Thin SVD A = U diag(s) V^T with k = min(m, n) columns in U and V.
struct SvdResult {
  Matrix u;
  std::vector<double> singular_values;  // nonincreasing
  Matrix v;
};

/// Deterministic one-sided Jacobi SVD. Throws NumericalError if the sweep
/// limit is hit and InvalidArgument on non-finite input.
SvdResult svd(const Matrix& a);

struct SingularTriplet {
  double sigma = 0.0;
  Vector u;
  Vector v;
};

/// Largest singular value with unit singular vectors. The sign is fixed so
/// that the entry of u with the largest magnitude is positive (ties go to
/// the smallest index). Throws InvalidArgument for the zero matrix.
SingularTriplet top_singular_triplet(const Matrix& a);

/// Flips `u` (and `v` with it) to satisfy the sign rule above.
void apply_sign_rule(Vector& u, Vector& v);

/// Orthogonal n x n matrix whose first column is the unit vector `u`,
/// built from a single Householder reflection. complete_basis(e_1) = I.
Matrix complete_basis(std::span<const double> u);

/// Master seed plus stream id. Distinct streams of one master seed are
/// independent; identical (master, stream) pairs yield identical draws.
struct Seed {
  std::uint64_t master = 0x5eedULL;
  std::uint64_t stream = 0;

  /// Same master, another stream.
  Seed with_stream(std::uint64_t s) const { return {master, s}; }
  /// New master derived from this seed and `salt`, stream reset to 0.
  Seed derive(std::uint64_t salt) const;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5eedULL;

/// Counter-based generator: the k-th 64-bit word of stream (master, stream)
/// is splitmix64(key + k * 0x9e3779b97f4a7c15) with
/// key = splitmix64(master) ^ splitmix64(~stream). Uniforms use the top 53
/// bits shifted by half an ulp, so they lie strictly inside (0, 1).
/// Normals come from Box-Muller on consecutive uniform pairs.
class CounterRng {
 public:
  explicit CounterRng(Seed seed);

  std::uint64_t next_u64();
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

DenseTensor gaussian_tensor(const Shape& shape, Seed seed);
Vector gaussian_vector(std::size_t n, CounterRng& rng);
Vector random_unit_vector(std::size_t n, CounterRng& rng);
/// Haar-like random orthogonal matrix (Gram-Schmidt on a Gaussian matrix).
Matrix random_orthogonal(std::size_t n, CounterRng& rng);

/// ||Q Q^T - I||_max, or ||Q^T Q - I||_max when `columns` is set.
double orthonormality_defect(const Matrix& q, bool columns = false);

}  // namespace tnorm
