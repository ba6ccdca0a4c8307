#include "tnorm/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tnorm/experiments.hpp"
#include "tnorm/hurwitz.hpp"
#include "tnorm/io.hpp"
#include "tnorm/orthogonal.hpp"
#include "tnorm/rankone.hpp"

namespace tnorm {

namespace {

using nlohmann::json;

std::uint64_t parse_seed(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos, 0);
  } catch (const std::exception&) {
    throw InvalidArgument("invalid seed '" + s + "'");
  }
  if (pos != s.size() || (!s.empty() && s[0] == '-')) throw InvalidArgument("invalid seed '" + s + "'");
  return v;
}

std::vector<std::size_t> one_based(std::vector<std::size_t> v) {
  for (auto& k : v) ++k;
  return v;
}

void emit(std::ostream& out, const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream os(*path);
  if (!os) throw InvalidArgument("cannot open '" + *path + "' for writing");
  os << text;
}

struct SolverFlags {
  std::string method = "asvd";
  std::optional<std::string> init;
  int restarts = 8;
  double tol = 1e-10;
  int max_sweeps = 500;
  std::string seed = "0x5eed";
  unsigned threads = 1;

  void attach(CLI::App* app) {
    app->add_option("--method", method, "asvd or hopm")->check(CLI::IsMember({"asvd", "hopm"}));
    app->add_option("--init", init, "single start kind: hosvd, random or fibers")
        ->check(CLI::IsMember({"hosvd", "random", "fibers"}));
    app->add_option("--restarts", restarts, "random restarts")->check(CLI::NonNegativeNumber);
    app->add_option("--tol", tol, "relative stall tolerance");
    app->add_option("--max-sweeps", max_sweeps, "sweep limit per start");
    app->add_option("--seed", seed, "master seed (decimal or 0x hex)");
    app->add_option("--threads", threads, "worker threads for restarts");
  }

  OptimOptions options() const {
    OptimOptions o;
    o.method = parse_method(method);
    o.restarts = restarts;
    o.tol = tol;
    o.max_sweeps = max_sweeps;
    o.seed = Seed{parse_seed(seed), 0};
    o.threads = threads;
    if (init) o.init = parse_init(*init);
    o.validate();
    return o;
  }
};

json norm_report(const DenseTensor& x, const SolverFlags& flags) {
  const OptimOptions opts = flags.options();
  RankOneResult r = flags.init ? estimate_rank_one(x, opts) : best_rank_one(x, opts);
  std::vector<std::size_t> split;
  double upper = spectral_upper_bound(x, &split);
  std::string source = "matricization";
  if (const auto c = orthogonal_scale(x); c && *c < upper) {
    upper = *c;
    split.clear();
    source = "orthogonal";
  }
  return json{{"shape", x.shape().dims()},
              {"frobenius", frobenius_norm(x)},
              {"lower", r.sigma},
              {"upper", upper},
              {"upper_split", one_based(split)},
              {"upper_source", source},
              {"factors", factors_to_json(r.factors)},
              {"sweeps", r.sweeps},
              {"converged", r.converged},
              {"start", r.start}};
}

json check_report(const DenseTensor& x, double tol) {
  const OrthogonalityReport rep = check_orthogonal(x, tol);
  return json{{"orthogonal", rep.is_orthogonal},
              {"max_violation", rep.max_violation},
              {"grid_size", rep.grid_size},
              {"permutation", one_based(rep.permutation)},
              {"witness", factors_to_json(rep.witness)}};
}

json admissibility_json(std::size_t l, std::size_t m, std::size_t n) {
  const Admissibility a = is_admissible(l, m, n);
  return json{{"triple", {l, m, n}}, {"verdict", to_string(a.verdict)}, {"reason", a.reason}};
}

json app_ratio_json(const AppRatio& r, const std::vector<std::size_t>& dims) {
  json j{{"field", to_string(r.field)}, {"dims", dims},      {"kind", to_string(r.kind)},
         {"value", r.value},            {"source", r.source}};
  if (r.kind == AppRatio::Kind::bracket) j["upper"] = r.upper;
  if (r.kind == AppRatio::Kind::lower_bound_only) j["strict"] = r.strict;
  return j;
}

DenseTensor lift_base(const std::string& base) {
  try {
    return mult_tensor(parse_algebra(base));
  } catch (const InvalidArgument&) {
    return load_tensor(base);
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral norms, orthogonal tensors and Hurwitz admissibility"};
  app.require_subcommand(1);

  std::optional<std::string> out_path;

  // norm
  auto* norm = app.add_subcommand("norm", "spectral-norm bracket and rank-one witness of a tensor file");
  std::string norm_file;
  SolverFlags norm_flags;
  norm->add_option("file", norm_file, "tensor file (JSON)")->required();
  norm_flags.attach(norm);
  norm->add_option("--out", out_path, "write the report here instead of stdout");

  // construct
  auto* construct = app.add_subcommand("construct", "build a tensor and write it as JSON");
  construct->require_subcommand(1);
  double scale = 1.0;
  bool normalize = false;
  std::string construct_seed = "0x5eed";
  construct->add_option("--out", out_path, "output file (stdout if absent)");
  construct->add_option("--scale", scale, "multiply entries by this factor");
  construct->add_flag("--normalize", normalize, "scale to unit Frobenius norm");
  construct->add_option("--seed", construct_seed, "master seed (decimal or 0x hex)");

  std::string algebra_name;
  auto* c_algebra = construct->add_subcommand("algebra", "multiplication tensor of R, C, H or O");
  c_algebra->add_option("name", algebra_name, "reals|complexes|quaternions|octonions")->required();

  std::vector<std::size_t> tall_dims;
  auto* c_tall = construct->add_subcommand("tall", "l x m x n orthogonal tensor with l*m <= n");
  c_tall->add_option("dims", tall_dims, "l m n")->expected(3)->required();

  std::string lift_from, lift_by;
  std::size_t lift_mode = 1;
  auto* c_lift = construct->add_subcommand("lift", "raise the order of an orthogonal tensor");
  c_lift->add_option("base", lift_from, "algebra name or tensor file")->required();
  c_lift->add_option("by", lift_by, "algebra used for the expansion")->required();
  c_lift->add_option("--mode", lift_mode, "expanded mode (1-based, below the last)");

  std::size_t fooling_n = 0;
  auto* c_fooling = construct->add_subcommand("fooling", "n x n x n cyclic-shift tensor");
  c_fooling->add_option("n", fooling_n)->required();

  std::size_t known4_n = 0, known4_m = 10;
  auto* c_known4 = construct->add_subcommand("known4", "fourth-order tensor with spectral norm m");
  c_known4->add_option("n", known4_n)->required();
  c_known4->add_option("--m", known4_m, "number of summands");

  std::vector<std::size_t> random_dims;
  auto* c_random = construct->add_subcommand("random", "Gaussian tensor");
  c_random->add_option("dims", random_dims)->required();

  // check
  auto* check = app.add_subcommand("check", "exact orthogonality test of a tensor file");
  std::string check_file;
  double check_tol = 1e-10;
  check->add_option("file", check_file)->required();
  check->add_option("--tol", check_tol, "relative tolerance");
  check->add_option("--out", out_path);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "seeded spectral-norm studies");
  std::string exp_name, exp_format = "csv", exp_seed = "0x5eed";
  ExperimentParams params;
  experiment->add_option("name", exp_name)->required()->check(
      CLI::IsMember({"orthogonal", "known4", "fooling", "random"}));
  experiment->add_option("--sizes", params.sizes, "tensor sizes n");
  experiment->add_option("--samples", params.samples, "random: samples per size");
  experiment->add_option("--m", params.m, "known4: number of summands");
  experiment->add_option("--restarts", params.restarts, "random restarts of the multistart run");
  experiment->add_option("--tol", params.tol);
  experiment->add_option("--max-sweeps", params.max_sweeps);
  experiment->add_option("--seed", exp_seed, "master seed (decimal or 0x hex)");
  bool no_constant_start = false;
  experiment->add_flag("--no-constant-start", no_constant_start,
                       "fooling: leave the constant tuple out of the multistart");
  experiment->add_option("--format", exp_format)->check(CLI::IsMember({"csv", "json"}));
  experiment->add_option("--out", out_path);

  // query
  auto* query = app.add_subcommand("query", "admissibility and approximation-ratio lookups");
  query->require_subcommand(1);
  query->add_option("--out", out_path);
  std::vector<std::size_t> adm;
  auto* q_adm = query->add_subcommand("admissible", "is [l, m, n] admissible");
  q_adm->add_option("dims", adm, "l m n")->expected(3)->required();
  std::string app_field;
  std::vector<std::size_t> app_dims;
  auto* q_app = query->add_subcommand("appratio", "best rank-one approximation ratio");
  q_app->add_option("field", app_field, "real or complex")->required();
  q_app->add_option("dims", app_dims)->required();
  std::size_t radon_n = 0;
  auto* q_radon = query->add_subcommand("radon", "Hurwitz-Radon number");
  q_radon->add_option("n", radon_n)->required();
  auto* q_table = query->add_subcommand("table", "catalog of known ratios");
  for (auto* sub : {c_algebra, c_tall, c_lift, c_fooling, c_known4, c_random, q_adm, q_app, q_radon, q_table}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (norm->parsed()) {
      emit(out, out_path, norm_report(load_tensor(norm_file), norm_flags).dump(2) + "\n");
    } else if (construct->parsed()) {
      const Seed seed{parse_seed(construct_seed), 0};
      std::optional<DenseTensor> x;
      bool verify = false;
      if (c_algebra->parsed()) {
        x = mult_tensor(parse_algebra(algebra_name));
        verify = true;
      } else if (c_tall->parsed()) {
        x = tall_orthogonal(tall_dims[0], tall_dims[1], tall_dims[2], seed);
        verify = true;
      } else if (c_lift->parsed()) {
        if (lift_mode < 1) throw InvalidArgument("--mode is 1-based");
        x = lift_orthogonal(lift_base(lift_from), lift_mode - 1, parse_algebra(lift_by));
        verify = true;
      } else if (c_fooling->parsed()) {
        x = fooling_tensor(fooling_n);
      } else if (c_known4->parsed()) {
        x = known4_tensor(known4_n, known4_m, seed).tensor;
      } else if (c_random->parsed()) {
        x = gaussian_tensor(Shape(random_dims), seed);
      }
      if (verify) {
        const OrthogonalityReport rep = check_orthogonal(*x);
        if (!rep.is_orthogonal) {
          err << "error: constructed tensor failed the orthogonality check (violation "
              << rep.max_violation << ")\n";
          return kExitNumerical;
        }
      }
      if (!std::isfinite(scale)) throw InvalidArgument("--scale must be finite");
      double factor = scale;
      if (normalize) {
        const double fro = frobenius_norm(*x);
        if (fro == 0.0) throw InvalidArgument("cannot normalize the zero tensor");
        factor /= fro;
      }
      if (factor != 1.0) x = x->scaled(factor);
      emit(out, out_path, tensor_to_json(*x).dump() + "\n");
    } else if (check->parsed()) {
      emit(out, out_path, check_report(load_tensor(check_file), check_tol).dump(2) + "\n");
    } else if (experiment->parsed()) {
      params.seed = parse_seed(exp_seed);
      params.include_constant_start = !no_constant_start;
      const auto records = run_experiment(exp_name, params);
      std::ostringstream os;
      if (exp_format == "csv") {
        write_csv(os, records);
      } else {
        write_json(os, records);
      }
      emit(out, out_path, os.str());
    } else if (query->parsed()) {
      json j;
      if (q_adm->parsed()) {
        j = admissibility_json(adm[0], adm[1], adm[2]);
      } else if (q_app->parsed()) {
        j = app_ratio_json(app_ratio(parse_field(app_field), app_dims), app_dims);
      } else if (q_radon->parsed()) {
        if (radon_n < 1) throw InvalidArgument("n must be positive");
        j = json{{"n", radon_n}, {"hurwitz_radon", hurwitz_radon(radon_n)}};
      } else if (q_table->parsed()) {
        j = json::array();
        for (const auto& e : app_catalog()) j.push_back(app_ratio_json(e.ratio, e.dims));
      }
      emit(out, out_path, j.dump(2) + "\n");
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace tnorm
