#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tnorm/orthogonal.hpp"
#include "tnorm/rankone.hpp"

using namespace tnorm;
using testing::basis;

namespace {

OptimOptions with_restarts(int r) {
  OptimOptions o;
  o.restarts = r;
  return o;
}

}  // namespace

TEST_CASE("options and names") {
  CHECK(parse_method("asvd") == Method::asvd);
  CHECK(parse_method("hopm") == Method::hopm);
  CHECK(parse_init("fibers") == InitKind::fibers);
  CHECK(to_string(InitKind::random) == "random");
  CHECK_THROWS_AS(parse_method("als"), InvalidArgument);
  OptimOptions o;
  CHECK(o.tol == 1e-10);
  CHECK(o.max_sweeps == 500);
  o.tol = 0.0;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o.tol = 1e-8;
  o.max_sweeps = 0;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
  o.max_sweeps = 1;
  o.restarts = -1;
  CHECK_THROWS_AS(o.validate(), InvalidArgument);
}

TEST_CASE("hosvd_init") {
  const Known4 k = known4_tensor(8, 5, Seed{3, 0});
  const FactorTuple f = hosvd_init(k.tensor);
  CHECK(testing::sin_angle(f.vectors[0], k.a) <= 1e-8);
  CHECK(testing::sin_angle(f.vectors[1], k.a) <= 1e-8);
  CHECK(testing::sin_angle(f.vectors[2], k.b) <= 1e-8);
  CHECK(testing::sin_angle(f.vectors[3], k.b) <= 1e-8);

  for (std::size_t n : {2, 3, 7}) {
    const DenseTensor x = fooling_tensor(n);
    const FactorTuple g = hosvd_init(x);
    for (const auto& v : g.vectors) {
      int ones = 0;
      for (double e : v) ones += (e == 1.0);
      CHECK(ones == 1);
    }
    CHECK(overlap(x, g) == 1.0);
  }

  CounterRng rng(Seed{4, 0});
  const FactorTuple u = testing::random_unit_tuple(Shape{3, 4, 5}, rng);
  const FactorTuple h = hosvd_init(rank_one(u));
  for (std::size_t k2 = 0; k2 < 3; ++k2) CHECK(testing::sin_angle(h.vectors[k2], u.vectors[k2]) <= 1e-12);

  CHECK_THROWS_AS(hosvd_init(DenseTensor::zeros(Shape{2, 2})), InvalidArgument);
}

TEST_CASE("fiber_init") {
  const DenseTensor xc = mult_tensor(Algebra::complexes);
  const FactorTuple f = fiber_init(xc);
  CHECK(overlap(xc, f) == doctest::Approx(1.0));
  CHECK(f.vectors[0] == basis(2, 0));
  CHECK(f.vectors[1] == basis(2, 0));

  std::vector<double> data(27, 0.0);
  data[13] = 5.0;
  const DenseTensor single(Shape{3, 3, 3}, data);
  const FactorTuple g = fiber_init(single);
  CHECK(overlap(single, g) == 5.0);
  CHECK(best_rank_one(single, OptimOptions{}).sigma == doctest::Approx(5.0));

  const DenseTensor r = gaussian_tensor(Shape{3, 3, 3}, Seed{12, 0});
  CHECK(overlap(r, fiber_init(r)) >= frobenius_norm(r) / 3.0);
  CHECK(overlap(r, fiber_init(r)) == doctest::Approx(longest_fiber_norm(r)));
}

TEST_CASE("constant and random starts") {
  const FactorTuple c = constant_init(Shape{4, 9});
  CHECK(c.vectors[0] == Vector(4, 0.5));
  CHECK(c.is_normalized());
  const FactorTuple r1 = random_init(Shape{3, 5}, Seed{1, 2});
  const FactorTuple r2 = random_init(Shape{3, 5}, Seed{1, 2});
  CHECK(r1.vectors == r2.vectors);
  CHECK(r1.is_normalized(1e-14));
}

TEST_CASE("hopm") {
  CounterRng rng(Seed{13, 0});
  const FactorTuple u = testing::random_unit_tuple(Shape{3, 4, 5}, rng);
  const DenseTensor x = rank_one(u).scaled(3.0);
  const RankOneResult r = hopm(x, u, OptimOptions{});
  CHECK(r.sigma == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(r.sweeps == 1);
  CHECK(r.converged);

  for (std::size_t n = 2; n <= 8; ++n) {
    const DenseTensor f = fooling_tensor(n);
    CHECK(std::abs(hopm(f, hosvd_init(f), OptimOptions{}).sigma - 1.0) <= 1e-10);
  }

  const DenseTensor xc = mult_tensor(Algebra::complexes).scaled(0.5);
  const RankOneResult rc = hopm(xc, random_init(xc.shape(), Seed{}), OptimOptions{});
  CHECK(std::abs(rc.sigma - 0.5) <= 1e-8);

  const DenseTensor g = gaussian_tensor(Shape{4, 4, 4}, Seed{14, 0});
  const RankOneResult rg = hopm(g, random_init(g.shape(), Seed{15, 0}), OptimOptions{});
  for (std::size_t i = 1; i < rg.history.size(); ++i) CHECK(rg.history[i] >= rg.history[i - 1] - 1e-12);

  // contraction vanishes: x (x) e_1 against a start orthogonal to x
  const DenseTensor m = rank_one({{basis(2, 0), basis(2, 0)}});
  const RankOneResult rm = hopm(m, {{basis(2, 1), basis(2, 1)}}, OptimOptions{});
  CHECK_FALSE(rm.converged);
  CHECK(rm.sigma == 0.0);

  CHECK_THROWS_AS(hopm(x, {{basis(3, 0), basis(4, 0)}}, OptimOptions{}), InvalidArgument);
  CHECK_THROWS_AS(hopm(x, {{Vector{1, 1, 0}, basis(4, 0), basis(5, 0)}}, OptimOptions{}), InvalidArgument);
}

TEST_CASE("asvd") {
  const DenseTensor xh = mult_tensor(Algebra::quaternions).scaled(0.25);
  CHECK(std::abs(asvd(xh, random_init(xh.shape(), Seed{}), OptimOptions{}).sigma - 0.25) <= 1e-8);
  const DenseTensor xo = mult_tensor(Algebra::octonions).scaled(0.125);
  CHECK(std::abs(asvd(xo, random_init(xo.shape(), Seed{}), OptimOptions{}).sigma - 0.125) <= 1e-8);

  for (std::size_t n = 2; n <= 20; ++n) {
    const DenseTensor f = fooling_tensor(n);
    CHECK(std::abs(asvd(f, hosvd_init(f), OptimOptions{}).sigma - 1.0) <= 1e-10);
    CHECK(std::abs(asvd(f, constant_init(f.shape()), OptimOptions{}).sigma - std::sqrt(double(n))) <= 1e-8);
  }

  for (int t = 0; t < 10; ++t) {
    const DenseTensor g = gaussian_tensor(Shape{3, 4, 3, 2}, Seed{16, static_cast<std::uint64_t>(t)});
    const RankOneResult r = asvd(g, random_init(g.shape(), Seed{17, static_cast<std::uint64_t>(t)}), OptimOptions{});
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1] - 1e-12);
    CHECK(std::abs(r.sigma - overlap(g, r.factors)) <= 1e-10 * std::max(1.0, frobenius_norm(g)));
    CHECK(r.factors.is_normalized(1e-12));
  }

  OptimOptions one;
  one.max_sweeps = 1;
  const DenseTensor g = gaussian_tensor(Shape{6, 6, 6}, Seed{18, 0});
  const RankOneResult r1 = asvd(g, random_init(g.shape(), Seed{19, 0}), one);
  CHECK(r1.sweeps == 1);

  CHECK_THROWS_AS(asvd(make_tensor(Shape{3}, {1, 2, 3}), {{Vector{1, 0, 0}}}, OptimOptions{}), InvalidArgument);
}

TEST_CASE("best_rank_one") {
  const RankOneResult w = best_rank_one(testing::w_tensor(), with_restarts(8));
  CHECK(std::abs(w.sigma - 2.0 / 3.0) <= 1e-6);

  for (std::size_t n = 2; n <= 20; ++n) {
    CAPTURE(n);
    const RankOneResult r = best_rank_one(fooling_tensor(n), with_restarts(8));
    CHECK(std::abs(r.sigma - std::sqrt(double(n))) <= 1e-6);
  }

  const DenseTensor xc = mult_tensor(Algebra::complexes);
  const RankOneResult rc = best_rank_one(xc, with_restarts(4));
  CHECK(rc.sigma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(overlap(xc, rc.factors) == doctest::Approx(1.0).epsilon(1e-12));

  const DenseTensor g = gaussian_tensor(Shape{5, 4, 6}, Seed{20, 0});
  const RankOneResult a = best_rank_one(g, with_restarts(6));
  const RankOneResult b = best_rank_one(g, with_restarts(6));
  CHECK(a.sigma == b.sigma);
  CHECK(a.factors.vectors == b.factors.vectors);
  CHECK(a.sigma >= longest_fiber_norm(g) - 1e-12);

  OptimOptions threaded = with_restarts(6);
  threaded.threads = 3;
  const RankOneResult t = best_rank_one(g, threaded);
  CHECK(t.sigma == a.sigma);
  CHECK(t.start == a.start);

  OptimOptions given;
  given.given.push_back(constant_init(Shape{7, 7, 7}));
  const RankOneResult fg = best_rank_one(fooling_tensor(7), given);
  CHECK(std::abs(fg.sigma - std::sqrt(7.0)) <= 1e-8);

  CHECK_THROWS_AS(best_rank_one(DenseTensor::zeros(Shape{2, 2, 2}), OptimOptions{}), InvalidArgument);
}

TEST_CASE("estimate_rank_one uses only the selected start") {
  const DenseTensor f = fooling_tensor(6);
  OptimOptions o;
  o.init = InitKind::hosvd;
  CHECK(estimate_rank_one(f, o).sigma == doctest::Approx(1.0));
  CHECK(estimate_rank_one(f, o).start == "hosvd");
  o.init = InitKind::given;
  CHECK_THROWS_AS(estimate_rank_one(f, o), InvalidArgument);
  o.given.push_back(constant_init(f.shape()));
  CHECK(estimate_rank_one(f, o).sigma == doctest::Approx(std::sqrt(6.0)));
  o.init = InitKind::random;
  o.restarts = 3;
  CHECK(estimate_rank_one(f, o).start.rfind("random:", 0) == 0);
  o.init = InitKind::fibers;
  CHECK(estimate_rank_one(f, o).start == "fibers");
}

TEST_CASE("approximation error") {
  CounterRng rng(Seed{22, 0});
  const FactorTuple u = testing::random_unit_tuple(Shape{3, 4, 5}, rng);
  const DenseTensor x = rank_one(u).scaled(2.0);
  RankOneResult exact;
  exact.sigma = 2.0;
  exact.factors = u;
  CHECK(approximation_error(x, exact) <= 1e-14);

  const DenseTensor xc = mult_tensor(Algebra::complexes);
  const RankOneResult rc = best_rank_one(xc, OptimOptions{});
  CHECK(approximation_error(xc, rc) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  for (int t = 0; t < 20; ++t) {
    const DenseTensor g = gaussian_tensor(Shape{3, 4, 5}, Seed{23, static_cast<std::uint64_t>(t)});
    RankOneResult any;
    any.factors = testing::random_unit_tuple(g.shape(), rng);
    any.sigma = overlap(g, any.factors);
    const double fro = frobenius_norm(g);
    CHECK(std::abs(approximation_error(g, any) - std::sqrt(fro * fro - any.sigma * any.sigma)) <= 1e-8);
    const RankOneResult r = asvd(g, random_init(g.shape(), Seed{24, static_cast<std::uint64_t>(t)}), OptimOptions{});
    CHECK(std::abs(approximation_error(g, r) - std::sqrt(fro * fro - r.sigma * r.sigma)) <= 1e-8);
  }
}

TEST_CASE("spectral norm bounds") {
  const NormBracket bo = spectral_norm_bounds(mult_tensor(Algebra::octonions), OptimOptions{});
  CHECK(std::abs(bo.lower - 1.0) <= 1e-8);
  CHECK(std::abs(bo.upper - 1.0) <= 1e-8);
  CHECK(bo.upper_source == "orthogonal");

  for (std::size_t n : {2, 5, 11}) {
    const NormBracket b = spectral_norm_bounds(fooling_tensor(n), with_restarts(8));
    CHECK(std::abs(b.lower - std::sqrt(double(n))) <= 1e-6);
    CHECK(std::abs(b.upper - std::sqrt(double(n))) <= 1e-10);
    CHECK(b.upper_source == "matricization");
    CHECK(b.upper_split.size() == 1);
  }

  CounterRng rng(Seed{25, 0});
  const DenseTensor e = rank_one(testing::random_unit_tuple(Shape{3, 2, 4}, rng)).scaled(1.7);
  const NormBracket be = spectral_norm_bounds(e, OptimOptions{});
  CHECK(be.lower == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(be.upper == doctest::Approx(1.7).epsilon(1e-12));

  for (int t = 0; t < 20; ++t) {
    const DenseTensor g = gaussian_tensor(Shape{2, 3, 4}, Seed{26, static_cast<std::uint64_t>(t)});
    const NormBracket b = spectral_norm_bounds(g, OptimOptions{});
    CHECK(b.lower <= b.upper + 1e-12);
    CHECK(b.lower >= longest_fiber_norm(g) - 1e-12);
  }
}

TEST_CASE("upper bound over splits") {
  const DenseTensor g = gaussian_tensor(Shape{2, 3, 2, 2}, Seed{27, 0});
  std::vector<std::size_t> split;
  const double ub = spectral_upper_bound(g, &split);
  double best = INFINITY;
  for (const auto& t : std::vector<std::vector<std::size_t>>{{0}, {0, 1}, {0, 2}, {0, 3}, {0, 1, 2}, {0, 1, 3}, {0, 2, 3}}) {
    best = std::min(best, svd(matricize(g, t)).singular_values[0]);
  }
  CHECK(ub == doctest::Approx(best).epsilon(1e-12));
  CHECK(!split.empty());
  CHECK(svd(matricize(g, split)).singular_values[0] == doctest::Approx(ub).epsilon(1e-12));

  const DenseTensor v = make_tensor(Shape{2}, {3, 4});
  CHECK(spectral_upper_bound(v) == doctest::Approx(5.0));
}

TEST_CASE("slice bound") {
  CounterRng rng(Seed{28, 0});
  for (int t = 0; t < 10; ++t) {
    const DenseTensor g = gaussian_tensor(Shape{3, 4, 5}, Seed{29, static_cast<std::uint64_t>(t)});
    const double upper = spectral_norm_bounds(g, OptimOptions{}).upper;
    for (std::size_t mode = 0; mode < 3; ++mode) {
      std::vector<std::size_t> rest;
      for (std::size_t k = 0; k < 3; ++k)
        if (k != mode) rest.push_back(g.dim(k));
      const FactorTuple z = testing::random_unit_tuple(Shape(rest), rng);
      double s = 0.0;
      for (std::size_t i = 0; i < g.dim(mode); ++i) {
        const double o = overlap(slice(g, mode, i), z);
        s += o * o;
      }
      CHECK(std::sqrt(s) <= upper + 1e-10);
    }
  }
}

TEST_CASE("invariances of the estimate") {
  CounterRng rng(Seed{30, 0});
  for (int t = 0; t < 5; ++t) {
    const DenseTensor g = gaussian_tensor(Shape{3, 4, 5}, Seed{31, static_cast<std::uint64_t>(t)});
    const double s = best_rank_one(g, with_restarts(8)).sigma;
    const std::vector<std::size_t> perm{2, 0, 1};
    CHECK(std::abs(best_rank_one(permute_modes(g, perm), with_restarts(8)).sigma - s) <= 1e-8);
    const DenseTensor rotated = mode_multiply(g, 1, random_orthogonal(4, rng));
    CHECK(std::abs(best_rank_one(rotated, with_restarts(8)).sigma - s) <= 1e-8);
    CHECK(std::abs(best_rank_one(g.scaled(3.0), with_restarts(8)).sigma - 3.0 * s) <= 1e-8);
  }
}

TEST_CASE("nuclear bounds") {
  const NuclearBounds o = nuclear_bounds(mult_tensor(Algebra::octonions));
  CHECK(std::abs(o.lower - 64.0) <= 1e-8);
  const NuclearBounds c = nuclear_bounds(mult_tensor(Algebra::complexes));
  CHECK(std::abs(c.lower - 4.0) <= 1e-8);
  CHECK(std::abs(c.upper - 4.0) <= 1e-8);

  CounterRng rng(Seed{32, 0});
  const DenseTensor e = rank_one(testing::random_unit_tuple(Shape{3, 3, 2}, rng));
  CHECK(nuclear_bounds(e).lower == doctest::Approx(1.0).epsilon(1e-12));

  const DenseTensor g = gaussian_tensor(Shape{3, 4, 5}, Seed{33, 0});
  const NuclearBounds b = nuclear_bounds(g);
  CHECK(b.lower <= b.upper);
  CHECK_THROWS_AS(nuclear_bounds(DenseTensor::zeros(Shape{2, 2})), InvalidArgument);
}

TEST_CASE("spectral normal form") {
  const DenseTensor xc = mult_tensor(Algebra::complexes);
  const DenseTensor c = spectral_normal_form(xc, {{basis(2, 0), basis(2, 0), basis(2, 0)}});
  CHECK(testing::max_abs_diff(c, xc) <= 1e-15);
  CHECK(c({0, 0, 0}) == 1.0);
  CHECK(normal_form_residual(c) == 0.0);

  CounterRng rng(Seed{34, 0});
  const FactorTuple u = testing::random_unit_tuple(Shape{3, 4, 2}, rng);
  const DenseTensor e = rank_one(u).scaled(2.5);
  const DenseTensor ce = spectral_normal_form(e, u);
  CHECK(ce({0, 0, 0}) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(std::abs(frobenius_norm(ce) - 2.5) <= 1e-13);
  CHECK(std::abs(frobenius_norm(ce) - std::abs(ce({0, 0, 0}))) <= 1e-12);

  for (int t = 0; t < 5; ++t) {
    const DenseTensor g = gaussian_tensor(Shape{3, 3, 3}, Seed{35, static_cast<std::uint64_t>(t)});
    OptimOptions tight = with_restarts(4);
    tight.tol = 1e-14;
    const RankOneResult r = best_rank_one(g, tight);
    const DenseTensor cg = spectral_normal_form(g, r.factors);
    CHECK(cg({0, 0, 0}) == doctest::Approx(r.sigma).epsilon(1e-10));
    CHECK(normal_form_residual(cg) <= 1e-6);
    CHECK(std::abs(frobenius_norm(cg) - frobenius_norm(g)) <= 1e-12);
  }
  CHECK_THROWS_AS(spectral_normal_form(xc, {{Vector{1, 1}, basis(2, 0), basis(2, 0)}}), InvalidArgument);
}

TEST_CASE("fiber decomposition") {
  const auto terms = fiber_decomposition(mult_tensor(Algebra::complexes), 2);
  REQUIRE(terms.size() == 4);
  for (const auto& t : terms) CHECK(frobenius_norm(t) == doctest::Approx(1.0));

  for (const auto& t : fiber_decomposition(DenseTensor::zeros(Shape{2, 2}), 0)) CHECK(frobenius_norm(t) == 0.0);

  const DenseTensor g = gaussian_tensor(Shape{2, 3, 4}, Seed{36, 0});
  const auto parts = fiber_decomposition(g, 0);
  REQUIRE(parts.size() == 12);
  std::vector<double> sum(g.numel(), 0.0);
  for (const auto& p : parts)
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p.data()[i];
  CHECK(testing::max_abs_diff(sum, g.data()) <= 1e-14);
  CHECK_THROWS_AS(fiber_decomposition(g, 3), InvalidArgument);
}
