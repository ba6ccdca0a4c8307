#include "tnorm/io.hpp"

#include <fstream>

namespace tnorm {

using nlohmann::json;

json tensor_to_json(const DenseTensor& x) {
  return json{{"shape", x.shape().dims()},
              {"data", std::vector<double>(x.data().begin(), x.data().end())}};
}

DenseTensor tensor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("data")) {
    throw InvalidArgument("tensor file needs \"shape\" and \"data\"");
  }
  const json& shape = j.at("shape");
  const json& data = j.at("data");
  if (!shape.is_array() || !data.is_array()) throw InvalidArgument("\"shape\" and \"data\" must be arrays");
  std::vector<std::size_t> dims;
  for (const auto& v : shape) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw InvalidArgument("shape entries must be positive integers");
    }
    dims.push_back(v.get<std::size_t>());
  }
  std::vector<double> values;
  values.reserve(data.size());
  for (const auto& v : data) {
    if (!v.is_number()) throw InvalidArgument("data entries must be numbers");
    values.push_back(v.get<double>());
  }
  return DenseTensor(Shape(std::move(dims)), std::move(values));
}

void write_tensor(std::ostream& os, const DenseTensor& x) {
  os << tensor_to_json(x).dump() << '\n';
}

DenseTensor read_tensor(std::istream& is) {
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed tensor file: ") + e.what());
  }
  return tensor_from_json(j);
}

void save_tensor(const std::string& path, const DenseTensor& x) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open '" + path + "' for writing");
  write_tensor(os, x);
}

DenseTensor load_tensor(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open '" + path + "'");
  return read_tensor(is);
}

json factors_to_json(const FactorTuple& f) {
  json out = json::array();
  for (const auto& v : f.vectors) out.push_back(v);
  return out;
}

}  // namespace tnorm
