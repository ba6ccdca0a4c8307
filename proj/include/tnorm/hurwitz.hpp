#pragma once

// Admissibility for the Hurwitz problem and the best rank-one approximation
// ratio App_d(K; n_1, ..., n_d) = min_{X != 0} ||X||_2 / ||X||_F.
//
// A triple [l, m, n] is admissible when a bilinear map R^l x R^m -> R^n
// with ||omega(u, v)|| = ||u|| ||v|| exists, which is the same as an
// orthogonal l x m x n tensor existing. Admissibility is known exactly only
// in parts of the parameter range, so verdicts are three-valued and always
// carry the rule that produced them.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tnorm {

enum class Verdict { admissible, not_admissible, unknown };

std::string to_string(Verdict v);

struct Admissibility {
  Verdict verdict = Verdict::unknown;
  /// trivial_tall, l_star_table, yiu_table, hurwitz_radon, monotonicity,
  /// out_of_table
  std::string reason;
};

/// Largest l with [l, n, n] admissible: 2^beta + 8 alpha for
/// n = 2^(4 alpha + beta) gamma, gamma odd, beta in {0,1,2,3}.
std::size_t hurwitz_radon(std::size_t n);

/// l * m = min{n : [l, m, n] admissible} for l <= 9, m >= l, by the
/// halving recursion with base 1 * m = m. Values are minimal over integer
/// composition formulas; minimality over the reals is assumed.
std::size_t l_star_m(std::size_t l, std::size_t m);

/// Yiu's upper bounds on l * m for 10 <= l <= m <= 16.
std::size_t yiu_upper(std::size_t l, std::size_t m);

/// Inputs are sorted first.
Admissibility is_admissible(std::size_t l, std::size_t m, std::size_t n);

/// 1 / sqrt(min_nu prod_{mu != nu} n_mu).
double naive_lower_bound(const std::vector<std::size_t>& dims);

enum class Field { real, complex };
std::string to_string(Field f);
Field parse_field(const std::string& s);

struct AppRatio {
  enum class Kind { exact, bracket, lower_bound_only };
  Kind kind = Kind::lower_bound_only;
  Field field = Field::real;
  double value = 0.0;  // exact value, bracket low end, or the lower bound
  double upper = 0.0;  // bracket high end (== value for exact)
  bool strict = false;  // lower_bound_only: true if App is known to exceed `value`
  std::string source;
};

std::string to_string(AppRatio::Kind k);

/// Known value, bracket or lower bound for App_d(field; dims), d >= 2.
AppRatio app_ratio(Field field, std::vector<std::size_t> dims);

struct CatalogEntry {
  Field field;
  std::vector<std::size_t> dims;
  AppRatio ratio;
};

/// Literature values stored as data (each with its source tag).
const std::vector<CatalogEntry>& app_catalog();

}  // namespace tnorm
