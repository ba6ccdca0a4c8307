#pragma once

// Tensor file format: {"shape": [n1, ..., nd], "data": [...]} with data in
// storage order (last index fastest).

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "tnorm/tensor.hpp"

namespace tnorm {

nlohmann::json tensor_to_json(const DenseTensor& x);
/// Throws InvalidArgument on a malformed document or a length mismatch.
DenseTensor tensor_from_json(const nlohmann::json& j);

void write_tensor(std::ostream& os, const DenseTensor& x);
DenseTensor read_tensor(std::istream& is);

void save_tensor(const std::string& path, const DenseTensor& x);
DenseTensor load_tensor(const std::string& path);

nlohmann::json factors_to_json(const FactorTuple& f);

}  // namespace tnorm
