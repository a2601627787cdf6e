#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace ymjoin {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q);

/// Parses "3", "-2", "3/2", "0.99", "1.5e-3" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

enum class Family { Identity, CirclePower, StandardImmersion, Custom };

std::string family_name(Family f);
/// Accepts the long names used in catalog records and the short CLI tags
/// (id, circle, standard, custom).
Family parse_family(std::string_view name);

/// Homogeneous building block h: S^m -> S^n with energy density lambda and
/// curvature eigenvalue mu. Values are exact; solvers read the doubles.
struct Eigenmap {
  Family family = Family::Identity;
  int m = 1;
  std::int64_t n = 1;
  int ell = 1;
  Rational lambda{1};
  Rational mu{0};

  double lambda_value() const { return to_double(lambda); }
  double mu_value() const { return to_double(mu); }

  friend bool operator==(const Eigenmap&, const Eigenmap&) = default;
};

inline constexpr int kMaxCatalogDegree = 64;

Eigenmap identity_eigenmap(int m);
Eigenmap circle_power(int ell);
Eigenmap standard_immersion(int m, int ell);
/// Hypothetical eigenmap used to explore the solver; needs lambda > 0, mu >= 0.
Eigenmap custom_eigenmap(int m, const Rational& lambda, const Rational& mu);

/// |F(h^* d_LC)|^2, constant over S^m.
Rational curvature_norm_constant(const Eigenmap& e);

/// mu * m == (m - 1) * lambda; holds for every non-custom family.
bool satisfies_trace_relation(const Eigenmap& e);

/// Exact (n + 1) for the degree-ell harmonic polynomial representation.
BigInt harmonic_polynomial_dimension(int m, int ell);

/// Mini-grammar: id:m | circle:ell | circle:1:ell | standard:m:ell |
/// custom:m:lambda:mu. Throws std::invalid_argument on malformed input.
Eigenmap parse_eigenmap_spec(std::string_view spec);
std::string to_spec(const Eigenmap& e);

nlohmann::json to_json(const Eigenmap& e);
Eigenmap eigenmap_from_json(const nlohmann::json& j);

struct CatalogFilter {
  std::optional<Family> family;
  std::optional<int> m;
  std::optional<int> ell;
  int max_m = 12;
  int max_ell = 6;
};

/// Bounded listing in canonical order (family, m, ell). Standard immersions
/// whose n overflows are skipped.
std::vector<Eigenmap> catalog(const CatalogFilter& filter);

}  // namespace ymjoin
