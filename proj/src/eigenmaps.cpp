#include "ymjoin/eigenmaps.hpp"

#include <charconv>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ymjoin {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("invalid integer for " + std::string(what) + ": '" +
                                std::string(text) + "'");
  }
  return value;
}

BigInt factorial(int k) {
  BigInt r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_rational(text.substr(0, slash));
    auto den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  std::string s(text);
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  int scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_point) --scale;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      scale += parse_int(std::string_view(s).substr(i + 1), "exponent");
      i = s.size();
      break;
    } else {
      throw std::invalid_argument("invalid number '" + s + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("invalid number '" + s + "'");
  Rational q(digits);
  BigInt ten = 1;
  for (int k = 0; k < std::abs(scale); ++k) ten *= 10;
  q = scale >= 0 ? q * Rational(ten) : q / Rational(ten);
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << '/' << denominator(q);
  return os.str();
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Identity: return "identity";
    case Family::CirclePower: return "circle";
    case Family::StandardImmersion: return "standard";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "identity" || name == "id") return Family::Identity;
  if (name == "circle" || name == "circle_power") return Family::CirclePower;
  if (name == "standard" || name == "standard_immersion") return Family::StandardImmersion;
  if (name == "custom") return Family::Custom;
  throw std::invalid_argument("unknown eigenmap family '" + std::string(name) + "'");
}

Eigenmap identity_eigenmap(int m) {
  if (m < 1) throw std::invalid_argument("identity eigenmap needs m >= 1");
  return Eigenmap{Family::Identity, m, m, 1, Rational(m), Rational(m - 1)};
}

Eigenmap circle_power(int ell) {
  if (ell == 0) throw std::invalid_argument("circle power needs ell != 0");
  int k = std::abs(ell);
  return Eigenmap{Family::CirclePower, 1, 1, k, Rational(k) * k, Rational(0)};
}

BigInt harmonic_polynomial_dimension(int m, int ell) {
  BigInt num = BigInt(2 * ell + m - 1) * factorial(ell + m - 2);
  BigInt den = factorial(ell) * factorial(m - 1);
  return num / den;
}

Eigenmap standard_immersion(int m, int ell) {
  if (m < 2) throw std::invalid_argument("standard immersion needs m >= 2");
  if (ell < 1) throw std::invalid_argument("standard immersion needs ell >= 1");
  if (m > kMaxCatalogDegree || ell > kMaxCatalogDegree) {
    throw std::out_of_range("standard immersion outside supported range m, ell <= 64");
  }
  BigInt n = harmonic_polynomial_dimension(m, ell) - 1;
  if (n > BigInt(std::numeric_limits<std::int64_t>::max())) {
    throw std::overflow_error("target dimension overflows for standard immersion (m=" +
                              std::to_string(m) + ", ell=" + std::to_string(ell) + ")");
  }
  Rational lambda = Rational(ell) * (ell + m - 1);
  Rational mu = lambda * Rational(m - 1) / Rational(m);
  return Eigenmap{Family::StandardImmersion, m, n.convert_to<std::int64_t>(), ell, lambda, mu};
}

Eigenmap custom_eigenmap(int m, const Rational& lambda, const Rational& mu) {
  if (m < 1) throw std::invalid_argument("custom eigenmap needs m >= 1");
  if (lambda <= 0) throw std::invalid_argument("custom eigenmap needs lambda > 0");
  if (mu < 0) throw std::invalid_argument("custom eigenmap needs mu >= 0");
  return Eigenmap{Family::Custom, m, m, 1, lambda, mu};
}

Rational curvature_norm_constant(const Eigenmap& e) { return 2 * e.lambda * e.mu; }

bool satisfies_trace_relation(const Eigenmap& e) { return e.mu * e.m == (e.m - 1) * e.lambda; }

Eigenmap parse_eigenmap_spec(std::string_view spec) {
  auto parts = split(spec, ':');
  Family f = parse_family(parts[0]);
  auto need = [&](std::size_t count) {
    if (parts.size() != count) {
      throw std::invalid_argument("malformed eigenmap spec '" + std::string(spec) + "'");
    }
  };
  switch (f) {
    case Family::Identity:
      need(2);
      return identity_eigenmap(parse_int(parts[1], "m"));
    case Family::CirclePower:
      if (parts.size() == 3) {
        if (parse_int(parts[1], "m") != 1) {
          throw std::invalid_argument("circle powers live on S^1: '" + std::string(spec) + "'");
        }
        return circle_power(parse_int(parts[2], "ell"));
      }
      need(2);
      return circle_power(parse_int(parts[1], "ell"));
    case Family::StandardImmersion:
      need(3);
      return standard_immersion(parse_int(parts[1], "m"), parse_int(parts[2], "ell"));
    case Family::Custom:
      need(4);
      return custom_eigenmap(parse_int(parts[1], "m"), parse_rational(parts[2]),
                             parse_rational(parts[3]));
  }
  throw std::invalid_argument("malformed eigenmap spec");
}

std::string to_spec(const Eigenmap& e) {
  switch (e.family) {
    case Family::Identity: return "id:" + std::to_string(e.m);
    case Family::CirclePower: return "circle:" + std::to_string(e.ell);
    case Family::StandardImmersion:
      return "standard:" + std::to_string(e.m) + ":" + std::to_string(e.ell);
    case Family::Custom:
      return "custom:" + std::to_string(e.m) + ":" + to_string(e.lambda) + ":" + to_string(e.mu);
  }
  return {};
}

nlohmann::json to_json(const Eigenmap& e) {
  return {{"family", family_name(e.family)},
          {"m", e.m},
          {"n", e.n},
          {"ell", e.ell},
          {"lambda_num", numerator(e.lambda).str()},
          {"lambda_den", denominator(e.lambda).str()},
          {"mu_num", numerator(e.mu).str()},
          {"mu_den", denominator(e.mu).str()}};
}

Eigenmap eigenmap_from_json(const nlohmann::json& j) {
  auto rational = [&](const char* num, const char* den) {
    auto text = [&](const char* key) {
      const auto& v = j.at(key);
      return v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>());
    };
    return Rational(BigInt(text(num)), BigInt(text(den)));
  };
  Eigenmap e;
  e.family = parse_family(j.at("family").get<std::string>());
  e.m = j.at("m").get<int>();
  e.n = j.at("n").get<std::int64_t>();
  e.ell = j.at("ell").get<int>();
  e.lambda = rational("lambda_num", "lambda_den");
  e.mu = rational("mu_num", "mu_den");
  return e;
}

std::vector<Eigenmap> catalog(const CatalogFilter& filter) {
  std::vector<Eigenmap> out;
  auto wants = [&](Family f) { return !filter.family || *filter.family == f; };
  auto m_ok = [&](int m) { return !filter.m || *filter.m == m; };
  auto ell_ok = [&](int ell) { return !filter.ell || *filter.ell == ell; };
  int max_m = filter.m ? *filter.m : filter.max_m;
  int max_ell = filter.ell ? *filter.ell : filter.max_ell;

  if (wants(Family::Identity)) {
    for (int m = 1; m <= max_m; ++m) {
      if (m_ok(m) && ell_ok(1)) out.push_back(identity_eigenmap(m));
    }
  }
  if (wants(Family::CirclePower) && m_ok(1)) {
    for (int ell = 1; ell <= max_ell; ++ell) {
      if (ell_ok(ell)) out.push_back(circle_power(ell));
    }
  }
  if (wants(Family::StandardImmersion)) {
    for (int m = 2; m <= std::min(max_m, kMaxCatalogDegree); ++m) {
      for (int ell = 1; ell <= std::min(max_ell, kMaxCatalogDegree); ++ell) {
        if (!m_ok(m) || !ell_ok(ell)) continue;
        try {
          out.push_back(standard_immersion(m, ell));
        } catch (const std::overflow_error&) {
        }
      }
    }
  }
  return out;
}

}  // namespace ymjoin
