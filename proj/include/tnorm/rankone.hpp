#pragma once

// Best rank-one approximation and spectral-norm estimation.
//
// The spectral norm ||X||_2 is the largest overlap <X, u^1 (x) ... (x) u^d>_F
// over unit vectors; the best rank-one approximation is sigma * u^1 (x) ... (x) u^d
// at a maximizer. Two local solvers are provided:
//
//   hopm  cyclic single-factor updates u^mu <- normalize(X contracted with
//         every other factor),
//   asvd  overlapping two-factor updates (1,2), (2,3), ..., (d-1,d); each
//         pair is set to the top singular pair of X contracted with all
//         remaining factors.
//
// Both are monotone in sigma. Certified upper bounds come from the top
// singular values of matricizations, since ||X||_2 <= ||X^t||_2.

#include <cstddef>
#include <string>
#include <vector>

#include "tnorm/linalg.hpp"
#include "tnorm/tensor.hpp"

namespace tnorm {

enum class InitKind { hosvd, random, fibers, given };
enum class Method { asvd, hopm };

std::string to_string(InitKind k);
std::string to_string(Method m);
InitKind parse_init(const std::string& s);
Method parse_method(const std::string& s);

struct OptimOptions {
  double tol = 1e-10;  // relative stall tolerance
  int max_sweeps = 500;
  int restarts = 0;  // random starts added by best_rank_one
  InitKind init = InitKind::hosvd;
  Method method = Method::asvd;
  Seed seed{};
  /// Starting points for init == given; best_rank_one also tries them
  /// after the random restarts.
  std::vector<FactorTuple> given;
  /// Worker threads for independent restarts; results do not depend on it.
  unsigned threads = 1;

  void validate() const;
};

struct RankOneResult {
  double sigma = 0.0;
  FactorTuple factors;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> history;  // sigma after each sweep
  std::string start;            // label of the starting point
};

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  FactorTuple lower_witness;
  std::vector<std::size_t> upper_split;  // row modes of the best matricization
  /// "matricization", or "orthogonal" when X is a multiple of an orthogonal
  /// tensor and upper is that exact multiple (upper_split is then empty).
  std::string upper_source = "matricization";
  RankOneResult lower_result;
};

/// u^mu = top left singular vector of the {mu}-matricization.
FactorTuple hosvd_init(const DenseTensor& x);

/// Elementary tuple supported on the largest-norm mode-d fiber (ties go to
/// the smallest multi-index); its overlap equals that fiber's norm.
FactorTuple fiber_init(const DenseTensor& x);

/// Independent Gaussian directions, one stream per call.
FactorTuple random_init(const Shape& shape, Seed seed);

/// Every entry 1/sqrt(n_mu).
FactorTuple constant_init(const Shape& shape);

RankOneResult hopm(const DenseTensor& x, FactorTuple init, const OptimOptions& opts);
RankOneResult asvd(const DenseTensor& x, FactorTuple init, const OptimOptions& opts);

/// opts.method from a single start (hopm for order-1 tensors).
RankOneResult optimize(const DenseTensor& x, FactorTuple init, const OptimOptions& opts);

/// Runs opts.method from the starting point(s) selected by opts.init:
/// hosvd, fibers, max(1, restarts) random starts, or every given tuple.
RankOneResult estimate_rank_one(const DenseTensor& x, const OptimOptions& opts);

/// Runs opts.method from hosvd_init, fiber_init, opts.restarts random starts
/// (restart r uses stream r of opts.seed) and opts.given, and keeps the
/// largest sigma (lowest start index on ties).
RankOneResult best_rank_one(const DenseTensor& x, const OptimOptions& opts);

/// ||X - sigma * u^1 (x) ... (x) u^d||_F for the result's sigma and factors.
double approximation_error(const DenseTensor& x, const RankOneResult& result);

/// min over matricizations of the top singular value; all splits for d <= 5,
/// single modes otherwise. Writes the minimizing split when asked.
double spectral_upper_bound(const DenseTensor& x, std::vector<std::size_t>* split = nullptr);

/// Largest Euclidean norm among the mode-d fibers.
double longest_fiber_norm(const DenseTensor& x);

/// lower from best_rank_one; upper from spectral_upper_bound, tightened to
/// the exact value when orthogonal_scale applies.
NormBracket spectral_norm_bounds(const DenseTensor& x, const OptimOptions& opts);

struct NuclearBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = ||X||_F^2 / (upper end of the spectral bracket); upper = sqrt(min_nu prod_{mu != nu} n_mu) ||X||_F.
NuclearBounds nuclear_bounds(const DenseTensor& x);

/// X expressed in bases complete_basis(u^mu) in each mode; entry (1,...,1)
/// is the overlap.
DenseTensor spectral_normal_form(const DenseTensor& x, const FactorTuple& factors);

/// Largest |entry| on fibers through (1,...,1) in a normal form, excluding
/// the corner itself. Zero at a global maximizer.
double normal_form_residual(const DenseTensor& c);

/// One elementary term per mode-`mode` fiber (prod_{mu != mode} n_mu terms,
/// zero terms kept), in storage order of the fixed indices.
std::vector<DenseTensor> fiber_decomposition(const DenseTensor& x, std::size_t mode);

}  // namespace tnorm
