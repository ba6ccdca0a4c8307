#include "tnorm/hurwitz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tnorm/matrix.hpp"

namespace tnorm {

namespace {

// Yiu's table, rows l = 10..16, columns m = 10..16 (0 below the diagonal).
constexpr std::size_t kYiu[7][7] = {
    {16, 26, 26, 27, 27, 28, 28}, {0, 26, 26, 28, 28, 30, 30}, {0, 0, 26, 28, 30, 32, 32},
    {0, 0, 0, 28, 32, 32, 32},    {0, 0, 0, 0, 32, 32, 32},    {0, 0, 0, 0, 0, 32, 32},
    {0, 0, 0, 0, 0, 0, 32},
};

std::size_t ceil_half(std::size_t k) { return (k + 1) / 2; }

bool is_composition_dimension(std::size_t n) { return n == 1 || n == 2 || n == 4 || n == 8; }

AppRatio exact(Field f, double v, std::string source) {
  return {AppRatio::Kind::exact, f, v, v, false, std::move(source)};
}

AppRatio lower_only(Field f, double v, bool strict, std::string source) {
  return {AppRatio::Kind::lower_bound_only, f, v, 1.0, strict, std::move(source)};
}

std::vector<CatalogEntry> build_catalog() {
  const Field R = Field::real;
  const Field C = Field::complex;
  auto entry = [](Field f, std::vector<std::size_t> dims, double v, const char* src) {
    return CatalogEntry{f, std::move(dims), exact(f, v, src)};
  };
  std::vector<CatalogEntry> c;
  c.push_back(entry(R, {2, 2, 2}, 0.5, "cobos_kuehn_peetre"));
  c.push_back(entry(R, {2, 2, 3}, 0.5, "kuehn_peetre"));
  c.push_back(entry(R, {2, 2, 4}, 0.5, "kuehn_peetre"));
  c.push_back(entry(R, {2, 3, 3}, 1.0 / std::sqrt(5.0), "kuehn_peetre"));
  c.push_back(entry(R, {2, 3, 4}, 1.0 / std::sqrt(6.0), "kuehn_peetre"));
  c.push_back(entry(R, {2, 4, 4}, 1.0 / std::sqrt(8.0), "kuehn_peetre"));
  c.push_back(entry(R, {3, 3, 4}, 1.0 / 3.0, "kuehn_peetre"));
  c.push_back(entry(R, {3, 4, 4}, 1.0 / std::sqrt(12.0), "kuehn_peetre"));
  c.push_back(entry(R, {4, 4, 4}, 0.25, "kuehn_peetre"));
  c.push_back(entry(R, {8, 8, 8}, 0.125, "kuehn_peetre"));
  c.push_back({R,
               {3, 3, 3},
               {AppRatio::Kind::bracket, R, 1.0 / std::sqrt(7.36), 1.0 / std::sqrt(7.0), false,
                "kuehn_peetre"}});
  c.push_back(entry(C, {2, 2, 2}, 2.0 / 3.0, "cobos_kuehn_peetre"));
  c.push_back(entry(C, {2, 2, 2, 2}, std::sqrt(2.0) / 3.0, "derksen_friedland_lim_wang"));
  return c;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::admissible: return "Admissible";
    case Verdict::not_admissible: return "NotAdmissible";
    case Verdict::unknown: return "Unknown";
  }
  return "?";
}

std::size_t hurwitz_radon(std::size_t n) {
  if (n < 1) throw InvalidArgument("hurwitz_radon needs n >= 1");
  std::size_t twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  const std::size_t alpha = twos / 4;
  const std::size_t beta = twos % 4;
  return (std::size_t{1} << beta) + 8 * alpha;
}

std::size_t l_star_m(std::size_t l, std::size_t m) {
  if (l < 1 || l > m) throw InvalidArgument("l_star_m needs 1 <= l <= m");
  if (l > 9) throw InvalidArgument("l * m is only known exactly for l <= 9; use yiu_upper");
  if (l == 1) return m;
  const std::size_t hl = ceil_half(l);
  const std::size_t hm = ceil_half(m);
  const std::size_t half = l_star_m(hl, hm);
  if (l % 2 == 1 && m % 2 == 1 && half == hl + hm - 1) return 2 * half - 1;
  return 2 * half;
}

std::size_t yiu_upper(std::size_t l, std::size_t m) {
  if (l < 10 || l > m || m > 16) throw InvalidArgument("yiu_upper needs 10 <= l <= m <= 16");
  return kYiu[l - 10][m - 10];
}

Admissibility is_admissible(std::size_t l, std::size_t m, std::size_t n) {
  std::size_t t[3] = {l, m, n};
  std::sort(t, t + 3);
  l = t[0];
  m = t[1];
  n = t[2];
  if (l < 1) throw InvalidArgument("dimensions must be positive");

  if (n >= l * m) return {Verdict::admissible, "trivial_tall"};
  if (l <= 9) {
    return {n >= l_star_m(l, m) ? Verdict::admissible : Verdict::not_admissible, "l_star_table"};
  }
  if (m == n) {
    return {l <= hurwitz_radon(n) ? Verdict::admissible : Verdict::not_admissible, "hurwitz_radon"};
  }
  if (m <= 16 && yiu_upper(l, m) <= n) return {Verdict::admissible, "yiu_table"};

  // [l', m', n'] admissible implies the same for l <= l', m <= m', n >= n'
  if (m <= 16) {
    for (std::size_t lp = l; lp <= 16; ++lp)
      for (std::size_t mp = std::max(lp, m); mp <= 16; ++mp)
        if (yiu_upper(lp, mp) <= n) return {Verdict::admissible, "monotonicity"};
  }
  for (std::size_t np = m; np <= n; ++np) {
    if (hurwitz_radon(np) >= l) return {Verdict::admissible, "monotonicity"};
  }
  // ...and conversely [9, m, n] failing rules out every l >= 9
  if (l_star_m(9, m) > n) return {Verdict::not_admissible, "monotonicity"};
  return {Verdict::unknown, "out_of_table"};
}

double naive_lower_bound(const std::vector<std::size_t>& dims) {
  if (dims.empty()) throw InvalidArgument("naive_lower_bound needs at least one dimension");
  double prod = 1.0;
  std::size_t largest = 0;
  for (std::size_t n : dims) {
    if (n < 1) throw InvalidArgument("dimensions must be positive");
    prod *= static_cast<double>(n);
    largest = std::max(largest, n);
  }
  return 1.0 / std::sqrt(prod / static_cast<double>(largest));
}

std::string to_string(Field f) { return f == Field::real ? "real" : "complex"; }

Field parse_field(const std::string& s) {
  if (s == "real" || s == "R") return Field::real;
  if (s == "complex" || s == "C") return Field::complex;
  throw InvalidArgument("unknown field '" + s + "'");
}

std::string to_string(AppRatio::Kind k) {
  switch (k) {
    case AppRatio::Kind::exact: return "Exact";
    case AppRatio::Kind::bracket: return "Bracket";
    case AppRatio::Kind::lower_bound_only: return "LowerBoundOnly";
  }
  return "?";
}

const std::vector<CatalogEntry>& app_catalog() {
  static const std::vector<CatalogEntry> catalog = build_catalog();
  return catalog;
}

AppRatio app_ratio(Field field, std::vector<std::size_t> dims) {
  if (dims.size() < 2) throw InvalidArgument("app_ratio needs order d >= 2");
  std::sort(dims.begin(), dims.end());
  if (dims.front() < 1) throw InvalidArgument("dimensions must be positive");
  const std::size_t d = dims.size();
  const double naive = naive_lower_bound(dims);

  if (d == 2) return exact(field, naive, "matrix_svd");
  for (const auto& e : app_catalog()) {
    if (e.field == field && e.dims == dims) return e.ratio;
  }
  const std::size_t largest = dims.back();
  const std::size_t rest = std::accumulate(dims.begin(), dims.end() - 1, std::size_t{1}, std::multiplies<>());
  if (rest <= largest) return exact(field, naive, "tall_sharpness");

  if (field == Field::complex) {
    if (dims[d - 3] * dims[d - 2] > dims[d - 1]) return lower_only(field, naive, true, "complex_nonexistence");
    return lower_only(field, naive, false, "unknown");
  }

  if (d == 3) {
    if (dims[0] == 2 && dims[1] == dims[2] && dims[1] % 2 == 1) {
      return exact(field, 1.0 / std::sqrt(2.0 * static_cast<double>(dims[1]) - 1.0), "kong_meng");
    }
    const Admissibility a = is_admissible(dims[0], dims[1], dims[2]);
    if (a.verdict == Verdict::admissible) return exact(field, naive, "hurwitz:" + a.reason);
    if (a.verdict == Verdict::not_admissible) return lower_only(field, naive, true, "hurwitz:" + a.reason);
  }
  if (d >= 3 && dims.front() == dims.back()) {
    if (is_composition_dimension(dims.front())) return exact(field, naive, "higher_order_cubic");
    return lower_only(field, naive, true, "higher_order_cubic");
  }
  if (is_composition_dimension(largest)) return exact(field, naive, "small_dimensions");
  if (d >= 4) {
    // slices along the smallest mode of an orthogonal tensor are orthogonal,
    // so one would exist on the three largest modes
    const Admissibility a = is_admissible(dims[d - 3], dims[d - 2], dims[d - 1]);
    if (a.verdict == Verdict::not_admissible) return lower_only(field, naive, true, "order_reduction");
  }
  return lower_only(field, naive, false, "unknown");
}

}  // namespace tnorm
