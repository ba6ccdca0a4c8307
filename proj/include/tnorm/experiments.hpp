#pragma once

// Seeded desk-scale studies of spectral-norm estimation:
//
//   orthogonal  algebra tensors of size 2, 4, 8 scaled to unit Frobenius norm
//   known4      fourth-order tensors with planted spectral norm m
//   fooling     cyclic-shift tensors on which HOSVD starts at a critical point
//   random      Gaussian n x n x n tensors against the 1/n curve
//
// Every tensor is normalized to Frobenius norm one, so sigma is the
// spectral-to-Frobenius ratio. Records are emitted in a fixed order and are
// identical across runs with the same parameters apart from wall_ms.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tnorm/rankone.hpp"

namespace tnorm {

struct ExperimentRecord {
  std::string experiment;
  std::vector<std::size_t> dims;
  std::uint64_t seed = 0;
  std::string method;
  std::string init;
  double sigma = 0.0;
  std::optional<double> reference;
  int sweeps = 0;
  double wall_ms = 0.0;
};

struct ExperimentParams {
  std::vector<std::size_t> sizes;  // empty: experiment default
  std::size_t samples = 10;
  std::size_t m = 10;  // known4 summands
  int restarts = 8;
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-10;
  int max_sweeps = 500;
  bool include_constant_start = true;  // fooling: add the all-ones tuple to the multistart
};

std::vector<std::size_t> default_sizes(const std::string& experiment);

/// Throws InvalidArgument for an unknown name or invalid parameters.
std::vector<ExperimentRecord> run_experiment(const std::string& name, const ExperimentParams& params);

inline constexpr const char* kCsvHeader = "experiment,dims,seed,method,init,sigma,reference,sweeps,wall_ms";

std::string dims_label(const std::vector<std::size_t>& dims);
void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_json(std::ostream& os, const std::vector<ExperimentRecord>& records);

}  // namespace tnorm
