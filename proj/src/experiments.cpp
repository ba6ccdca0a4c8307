#include "tnorm/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>

#include <json.hpp>

#include "tnorm/orthogonal.hpp"

namespace tnorm {

namespace {

using Clock = std::chrono::steady_clock;

struct Run {
  std::string method;
  std::string init;
  std::function<RankOneResult()> solve;
};

struct Instance {
  std::string experiment;
  DenseTensor tensor;  // unit Frobenius norm
  std::optional<double> reference;
  OptimOptions opts;
};

OptimOptions base_options(const ExperimentParams& p, Seed optimizer_seed) {
  OptimOptions o;
  o.tol = p.tol;
  o.max_sweeps = p.max_sweeps;
  o.restarts = p.restarts;
  o.seed = optimizer_seed;
  return o;
}

// Tensor and optimizer seeds for the i-th instance of an experiment.
Seed tensor_seed(const ExperimentParams& p, std::size_t i) { return Seed{p.seed, 0}.derive(2 * i); }
Seed optimizer_seed(const ExperimentParams& p, std::size_t i) { return Seed{p.seed, 0}.derive(2 * i + 1); }

DenseTensor normalized_tensor(const DenseTensor& x) { return x.scaled(1.0 / frobenius_norm(x)); }

void run_instance(const Instance& inst, const std::vector<Run>& runs, std::uint64_t seed,
                  std::vector<ExperimentRecord>& out) {
  for (const auto& run : runs) {
    const auto t0 = Clock::now();
    const RankOneResult r = run.solve();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    out.push_back({inst.experiment, inst.tensor.shape().dims(), seed, run.method, run.init, r.sigma,
                   inst.reference, r.sweeps, ms});
  }
}

// The standard comparison: single runs from HOSVD and from one random start
// for both solvers, plus the ASVD multistart portfolio.
std::vector<Run> standard_runs(const Instance& inst, bool with_hopm) {
  std::vector<Run> runs;
  const DenseTensor& x = inst.tensor;
  const OptimOptions& o = inst.opts;
  const std::vector<Method> methods = with_hopm ? std::vector<Method>{Method::asvd, Method::hopm}
                                                : std::vector<Method>{Method::asvd};
  for (Method m : methods) {
    OptimOptions om = o;
    om.method = m;
    runs.push_back({to_string(m), "hosvd", [&x, om] { return optimize(x, hosvd_init(x), om); }});
    runs.push_back({to_string(m), "random",
                    [&x, om] { return optimize(x, random_init(x.shape(), om.seed.with_stream(0)), om); }});
  }
  runs.push_back({"asvd", "multistart", [&x, o] { return best_rank_one(x, o); }});
  return runs;
}

std::vector<ExperimentRecord> orthogonal_experiment(const ExperimentParams& p) {
  std::vector<ExperimentRecord> out;
  std::size_t i = 0;
  for (std::size_t n : p.sizes) {
    Algebra a;
    switch (n) {
      case 2: a = Algebra::complexes; break;
      case 4: a = Algebra::quaternions; break;
      case 8: a = Algebra::octonions; break;
      default: throw InvalidArgument("orthogonal experiment supports n in {2, 4, 8}");
    }
    Instance inst{"orthogonal", normalized_tensor(mult_tensor(a)), 1.0 / static_cast<double>(n),
                  base_options(p, optimizer_seed(p, i++))};
    run_instance(inst, standard_runs(inst, true), p.seed, out);
  }
  return out;
}

std::vector<ExperimentRecord> known4_experiment(const ExperimentParams& p) {
  std::vector<ExperimentRecord> out;
  std::size_t i = 0;
  for (std::size_t n : p.sizes) {
    const Known4 k = known4_tensor(n, p.m, tensor_seed(p, i));
    const double fro = frobenius_norm(k.tensor);
    Instance inst{"known4", k.tensor.scaled(1.0 / fro), static_cast<double>(p.m) / fro,
                  base_options(p, optimizer_seed(p, i))};
    ++i;
    run_instance(inst, standard_runs(inst, true), p.seed, out);
  }
  return out;
}

std::vector<ExperimentRecord> fooling_experiment(const ExperimentParams& p) {
  std::vector<ExperimentRecord> out;
  std::size_t i = 0;
  for (std::size_t n : p.sizes) {
    const double nn = static_cast<double>(n);
    Instance inst{"fooling", fooling_tensor(n).scaled(1.0 / nn), std::sqrt(nn) / nn,
                  base_options(p, optimizer_seed(p, i++))};
    if (p.include_constant_start) inst.opts.given.push_back(constant_init(inst.tensor.shape()));
    run_instance(inst, standard_runs(inst, true), p.seed, out);
  }
  return out;
}

std::vector<ExperimentRecord> random_experiment(const ExperimentParams& p) {
  std::vector<ExperimentRecord> out;
  std::vector<ExperimentRecord> means;
  std::size_t i = 0;
  for (std::size_t n : p.sizes) {
    std::vector<ExperimentRecord> rows;
    for (std::size_t s = 0; s < p.samples; ++s, ++i) {
      Instance inst{"random", normalized_tensor(gaussian_tensor(Shape{n, n, n}, tensor_seed(p, i))),
                    std::nullopt, base_options(p, optimizer_seed(p, i))};
      run_instance(inst, standard_runs(inst, false), p.seed, rows);
    }
    // per-(method, init) averages against the 1/n curve
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& r : rows) {
      auto key = std::make_pair(r.method, r.init);
      if (!acc.count(key)) order.push_back(key);
      acc[key].first += r.sigma;
      acc[key].second += 1;
    }
    for (const auto& key : order) {
      const auto& [sum, count] = acc[key];
      means.push_back({"random_mean", {n, n, n}, p.seed, key.first, key.second, sum / count,
                       1.0 / static_cast<double>(n), 0, 0.0});
    }
    out.insert(out.end(), rows.begin(), rows.end());
  }
  out.insert(out.end(), means.begin(), means.end());
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::vector<std::size_t> default_sizes(const std::string& experiment) {
  if (experiment == "orthogonal") return {2, 4, 8};
  if (experiment == "known4") return {10, 15, 20, 25, 30};
  if (experiment == "fooling") {
    std::vector<std::size_t> s;
    for (std::size_t n = 2; n <= 20; ++n) s.push_back(n);
    return s;
  }
  if (experiment == "random") return {5, 10, 15, 20, 25, 30};
  throw InvalidArgument("unknown experiment '" + experiment + "'");
}

std::vector<ExperimentRecord> run_experiment(const std::string& name, const ExperimentParams& params) {
  ExperimentParams p = params;
  if (p.sizes.empty()) p.sizes = default_sizes(name);
  if (p.samples < 1) throw InvalidArgument("samples must be positive");
  if (p.restarts < 0) throw InvalidArgument("restarts must be nonnegative");
  if (name == "orthogonal") return orthogonal_experiment(p);
  if (name == "known4") {
    for (std::size_t n : p.sizes)
      if (n < 2) throw InvalidArgument("known4 needs n >= 2");
    if (p.m < 1) throw InvalidArgument("known4 needs m >= 1");
    return known4_experiment(p);
  }
  if (name == "fooling") {
    for (std::size_t n : p.sizes)
      if (n < 1) throw InvalidArgument("fooling needs n >= 1");
    return fooling_experiment(p);
  }
  if (name == "random") {
    for (std::size_t n : p.sizes)
      if (n < 1) throw InvalidArgument("random needs n >= 1");
    return random_experiment(p);
  }
  throw InvalidArgument("unknown experiment '" + name + "'");
}

std::string dims_label(const std::vector<std::size_t>& dims) {
  std::string s;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k) s += 'x';
    s += std::to_string(dims[k]);
  }
  return s;
}

void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.experiment << ',' << dims_label(r.dims) << ',' << r.seed << ',' << r.method << ',' << r.init
       << ',' << format_double(r.sigma) << ',' << (r.reference ? format_double(*r.reference) : "") << ','
       << r.sweeps << ',' << format_double(r.wall_ms) << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j{{"experiment", r.experiment}, {"dims", r.dims},     {"seed", r.seed},
                     {"method", r.method},         {"init", r.init},     {"sigma", r.sigma},
                     {"reference", nullptr},       {"sweeps", r.sweeps}, {"wall_ms", r.wall_ms}};
    if (r.reference) j["reference"] = *r.reference;
    arr.push_back(std::move(j));
  }
  os << arr.dump(2) << '\n';
}

}  // namespace tnorm
