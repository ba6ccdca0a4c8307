#include "tnorm/rankone.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "tnorm/orthogonal.hpp"

namespace tnorm {

namespace {

void require_nonzero(const DenseTensor& x) {
  if (std::all_of(x.data().begin(), x.data().end(), [](double v) { return v == 0.0; })) {
    throw InvalidArgument("operation undefined for the zero tensor");
  }
}

void require_compatible(const DenseTensor& x, const FactorTuple& f) {
  if (f.order() != x.order() || f.shape() != x.shape()) {
    throw InvalidArgument("factor lengths do not match the tensor shape");
  }
  if (!f.is_normalized(1e-10)) throw InvalidArgument("starting factors must be unit vectors");
}

bool stalled(double previous, double current, double tol) {
  return std::abs(current - previous) <= tol * std::max(1.0, current);
}

struct Start {
  std::string label;
  std::function<FactorTuple()> make;
};

// Runs every start and keeps the best; ties go to the earliest start so the
// answer does not depend on scheduling.
RankOneResult run_starts(const DenseTensor& x, const std::vector<Start>& starts,
                         const OptimOptions& opts) {
  std::vector<RankOneResult> results(starts.size());
  auto work = [&](std::size_t i) {
    results[i] = optimize(x, starts[i].make(), opts);
    results[i].start = starts[i].label;
  };
  const unsigned workers = std::min<unsigned>(std::max(1u, opts.threads),
                                              static_cast<unsigned>(starts.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < starts.size(); i = next++) work(i);
      });
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].sigma > results[best].sigma) best = i;
  }
  return std::move(results[best]);
}

}  // namespace

std::string to_string(InitKind k) {
  switch (k) {
    case InitKind::hosvd: return "hosvd";
    case InitKind::random: return "random";
    case InitKind::fibers: return "fibers";
    case InitKind::given: return "given";
  }
  return "?";
}

std::string to_string(Method m) { return m == Method::asvd ? "asvd" : "hopm"; }

InitKind parse_init(const std::string& s) {
  if (s == "hosvd") return InitKind::hosvd;
  if (s == "random") return InitKind::random;
  if (s == "fibers") return InitKind::fibers;
  if (s == "given") return InitKind::given;
  throw InvalidArgument("unknown init '" + s + "'");
}

Method parse_method(const std::string& s) {
  if (s == "asvd") return Method::asvd;
  if (s == "hopm") return Method::hopm;
  throw InvalidArgument("unknown method '" + s + "'");
}

void OptimOptions::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (max_sweeps < 1) throw InvalidArgument("max_sweeps must be at least 1");
  if (restarts < 0) throw InvalidArgument("restarts must be nonnegative");
}

FactorTuple hosvd_init(const DenseTensor& x) {
  require_nonzero(x);
  FactorTuple f;
  if (x.order() == 1) {
    Vector u = normalized(x.data());
    Vector none;
    apply_sign_rule(u, none);
    f.vectors.push_back(std::move(u));
    return f;
  }
  for (std::size_t mode = 0; mode < x.order(); ++mode) {
    f.vectors.push_back(top_singular_triplet(matricize(x, {mode})).u);
  }
  return f;
}

FactorTuple fiber_init(const DenseTensor& x) {
  require_nonzero(x);
  const std::size_t d = x.order();
  const std::size_t n = x.dim(d - 1);
  const std::size_t count = x.numel() / n;
  std::size_t best = 0;
  double best_norm = -1.0;
  for (std::size_t r = 0; r < count; ++r) {
    const double nr = norm2(x.data().subspan(r * n, n));
    if (nr > best_norm) {
      best_norm = nr;
      best = r;
    }
  }
  FactorTuple f;
  std::size_t rem = best;
  std::vector<std::size_t> idx(d - 1);
  for (std::size_t k = d - 1; k-- > 0;) {
    idx[k] = rem % x.dim(k);
    rem /= x.dim(k);
  }
  for (std::size_t k = 0; k + 1 < d; ++k) {
    Vector e(x.dim(k), 0.0);
    e[idx[k]] = 1.0;
    f.vectors.push_back(std::move(e));
  }
  f.vectors.push_back(normalized(x.data().subspan(best * n, n)));
  return f;
}

FactorTuple random_init(const Shape& shape, Seed seed) {
  CounterRng rng(seed);
  FactorTuple f;
  for (std::size_t n : shape.dims()) f.vectors.push_back(random_unit_vector(n, rng));
  return f;
}

FactorTuple constant_init(const Shape& shape) {
  FactorTuple f;
  for (std::size_t n : shape.dims()) {
    f.vectors.emplace_back(n, 1.0 / std::sqrt(static_cast<double>(n)));
  }
  return f;
}

RankOneResult hopm(const DenseTensor& x, FactorTuple init, const OptimOptions& opts) {
  opts.validate();
  require_compatible(x, init);
  RankOneResult r;
  r.factors = std::move(init);
  double sigma = overlap(x, r.factors);
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double current = sigma;
    for (std::size_t mode = 0; mode < x.order(); ++mode) {
      Vector g = contract_all_but(x, r.factors, mode);
      const double ng = norm2(g);
      if (ng == 0.0) {
        // collapsed contraction: no direction to move in
        r.sweeps = sweep;
        r.converged = false;
        r.sigma = overlap(x, r.factors);
        return r;
      }
      for (double& v : g) v /= ng;
      r.factors.vectors[mode] = std::move(g);
      current = ng;
    }
    r.history.push_back(current);
    r.sweeps = sweep;
    if (stalled(sigma, current, opts.tol)) {
      r.converged = true;
      sigma = current;
      break;
    }
    sigma = current;
  }
  r.sigma = overlap(x, r.factors);
  return r;
}

RankOneResult asvd(const DenseTensor& x, FactorTuple init, const OptimOptions& opts) {
  opts.validate();
  require_compatible(x, init);
  if (x.order() < 2) throw InvalidArgument("asvd needs a tensor of order at least 2");
  RankOneResult r;
  r.factors = std::move(init);
  double sigma = overlap(x, r.factors);
  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    double current = sigma;
    for (std::size_t mode = 0; mode + 1 < x.order(); ++mode) {
      const Matrix m = contract_all_but_pair(x, r.factors, mode, mode + 1);
      if (std::all_of(m.data().begin(), m.data().end(), [](double v) { return v == 0.0; })) {
        r.sweeps = sweep;
        r.converged = false;
        r.sigma = overlap(x, r.factors);
        return r;
      }
      SingularTriplet t = top_singular_triplet(m);
      r.factors.vectors[mode] = std::move(t.u);
      r.factors.vectors[mode + 1] = std::move(t.v);
      current = t.sigma;
    }
    r.history.push_back(current);
    r.sweeps = sweep;
    if (stalled(sigma, current, opts.tol)) {
      r.converged = true;
      break;
    }
    sigma = current;
  }
  r.sigma = overlap(x, r.factors);
  return r;
}

RankOneResult optimize(const DenseTensor& x, FactorTuple init, const OptimOptions& opts) {
  if (opts.method == Method::asvd && x.order() >= 2) return asvd(x, std::move(init), opts);
  return hopm(x, std::move(init), opts);
}

RankOneResult estimate_rank_one(const DenseTensor& x, const OptimOptions& opts) {
  opts.validate();
  require_nonzero(x);
  std::vector<Start> starts;
  switch (opts.init) {
    case InitKind::hosvd:
      starts.push_back({"hosvd", [&] { return hosvd_init(x); }});
      break;
    case InitKind::fibers:
      starts.push_back({"fibers", [&] { return fiber_init(x); }});
      break;
    case InitKind::random:
      for (int k = 0; k < std::max(1, opts.restarts); ++k) {
        const Seed s = opts.seed.with_stream(static_cast<std::uint64_t>(k));
        starts.push_back({"random:" + std::to_string(k), [&x, s] { return random_init(x.shape(), s); }});
      }
      break;
    case InitKind::given:
      if (opts.given.empty()) throw InvalidArgument("init=given needs at least one starting tuple");
      for (std::size_t k = 0; k < opts.given.size(); ++k) {
        starts.push_back({"given:" + std::to_string(k), [&opts, k] { return opts.given[k]; }});
      }
      break;
  }
  return run_starts(x, starts, opts);
}

RankOneResult best_rank_one(const DenseTensor& x, const OptimOptions& opts) {
  opts.validate();
  require_nonzero(x);
  std::vector<Start> starts;
  starts.push_back({"hosvd", [&] { return hosvd_init(x); }});
  starts.push_back({"fibers", [&] { return fiber_init(x); }});
  for (int k = 0; k < opts.restarts; ++k) {
    const Seed s = opts.seed.with_stream(static_cast<std::uint64_t>(k));
    starts.push_back({"random:" + std::to_string(k), [&x, s] { return random_init(x.shape(), s); }});
  }
  for (std::size_t k = 0; k < opts.given.size(); ++k) {
    starts.push_back({"given:" + std::to_string(k), [&opts, k] { return opts.given[k]; }});
  }
  return run_starts(x, starts, opts);
}

double approximation_error(const DenseTensor& x, const RankOneResult& result) {
  const DenseTensor y = rank_one(result.factors);
  if (y.shape() != x.shape()) throw InvalidArgument("result factors do not match the tensor");
  Vector diff(x.numel());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = x.data()[i] - result.sigma * y.data()[i];
  return norm2(diff);
}

double spectral_upper_bound(const DenseTensor& x, std::vector<std::size_t>* split) {
  const std::size_t d = x.order();
  if (d == 1) {
    if (split) split->clear();
    return frobenius_norm(x);
  }
  std::vector<std::vector<std::size_t>> splits;
  if (d <= 5) {
    // subsets containing mode 0; the complement gives the transposed matrix
    const std::size_t full = (std::size_t{1} << (d - 1)) - 1;
    for (std::size_t mask = 0; mask < full; ++mask) {
      std::vector<std::size_t> t{0};
      for (std::size_t k = 1; k < d; ++k)
        if (mask & (std::size_t{1} << (k - 1))) t.push_back(k);
      splits.push_back(std::move(t));
    }
  } else {
    for (std::size_t k = 0; k < d; ++k) splits.push_back({k});
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : splits) {
    const double s = svd(matricize(x, t)).singular_values.front();
    if (s < best) {
      best = s;
      if (split) *split = t;
    }
  }
  return best;
}

double longest_fiber_norm(const DenseTensor& x) {
  const std::size_t n = x.dim(x.order() - 1);
  double best = 0.0;
  for (std::size_t r = 0; r < x.numel() / n; ++r) {
    best = std::max(best, norm2(x.data().subspan(r * n, n)));
  }
  return best;
}

NormBracket spectral_norm_bounds(const DenseTensor& x, const OptimOptions& opts) {
  NormBracket b;
  b.lower_result = best_rank_one(x, opts);
  b.lower = b.lower_result.sigma;
  b.lower_witness = b.lower_result.factors;
  b.upper = spectral_upper_bound(x, &b.upper_split);
  if (const auto c = orthogonal_scale(x); c && *c < b.upper) {
    b.upper = *c;
    b.upper_split.clear();
    b.upper_source = "orthogonal";
  }
  return b;
}

NuclearBounds nuclear_bounds(const DenseTensor& x) {
  require_nonzero(x);
  const double fro = frobenius_norm(x);
  const auto& dims = x.shape().dims();
  const std::size_t largest = *std::max_element(dims.begin(), dims.end());
  const double min_fibers = static_cast<double>(x.numel() / largest);
  NuclearBounds nb;
  double upper = spectral_upper_bound(x);
  if (const auto c = orthogonal_scale(x)) upper = std::min(upper, *c);
  nb.lower = fro * fro / upper;
  nb.upper = std::sqrt(min_fibers) * fro;
  return nb;
}

DenseTensor spectral_normal_form(const DenseTensor& x, const FactorTuple& factors) {
  if (factors.order() != x.order() || factors.shape() != x.shape()) {
    throw InvalidArgument("factor lengths do not match the tensor shape");
  }
  if (!factors.is_normalized(1e-10)) throw InvalidArgument("normal form needs unit factors");
  DenseTensor c = x;
  for (std::size_t mode = 0; mode < x.order(); ++mode) {
    c = mode_multiply(c, mode, complete_basis(factors.vectors[mode]).transposed());
  }
  return c;
}

double normal_form_residual(const DenseTensor& c) {
  const auto strides = c.shape().strides();
  double worst = 0.0;
  for (std::size_t mode = 0; mode < c.order(); ++mode) {
    for (std::size_t i = 1; i < c.dim(mode); ++i) {
      worst = std::max(worst, std::abs(c.data()[i * strides[mode]]));
    }
  }
  return worst;
}

std::vector<DenseTensor> fiber_decomposition(const DenseTensor& x, std::size_t mode) {
  if (mode >= x.order()) throw InvalidArgument("fiber_decomposition: invalid mode");
  const std::size_t d = x.order();
  std::vector<std::size_t> other_dims;
  for (std::size_t k = 0; k < d; ++k)
    if (k != mode) other_dims.push_back(x.dim(k));
  if (other_dims.empty()) other_dims.push_back(1);

  const auto strides = x.shape().strides();
  std::vector<DenseTensor> terms;
  IndexCounter it(other_dims);
  do {
    std::vector<std::size_t> full(d, 0);
    for (std::size_t k = 0, f = 0; k < d; ++k)
      if (k != mode) full[k] = it.index()[f++];
    const std::size_t base = x.linear_index(full);
    std::vector<double> data(x.numel(), 0.0);
    for (std::size_t i = 0; i < x.dim(mode); ++i) {
      const std::size_t lin = base + i * strides[mode];
      data[lin] = x.data()[lin];
    }
    terms.emplace_back(x.shape(), std::move(data));
  } while (it.next());
  return terms;
}

}  // namespace tnorm
