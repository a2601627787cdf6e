#include "ymjoin/damping.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ymjoin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double as_double(const Rational& q) { return to_double(q); }
double as_double(double v) { return v; }

bool strictly_less(const Rational& a, const Rational& b) { return a < b; }
bool strictly_less(double a, double b) { return a < b - kComparisonBand; }

// sqrt(X) + sqrt(Y) < Z with X, Y >= 0.
bool sqrt_sum_less(const Rational& X, const Rational& Y, const Rational& Z) {
  if (Z <= 0) return false;
  Rational W = Z * Z - X - Y;
  if (W <= 0) return false;
  return 4 * X * Y < W * W;
}
bool sqrt_sum_less(double X, double Y, double Z) {
  return std::sqrt(X) + std::sqrt(Y) < Z - kComparisonBand;
}

ClauseState state_of(bool b) { return b ? ClauseState::True : ClauseState::False; }

Clause categorical(const std::string& expr, bool holds, int m) {
  return {"a", expr, state_of(holds), {{"m", double(m)}}, kNaN};
}

void finish(DampingReport& r) {
  r.satisfied = false;
  r.margin = -INFINITY;
  for (const auto& c : r.clauses) {
    if (c.holds()) r.satisfied = true;
    if (c.state == ClauseState::NotApplicable) continue;
    if (std::isnan(c.margin)) {
      if (c.holds()) r.margin = INFINITY;
      continue;
    }
    r.margin = std::max(r.margin, c.margin);
  }
}

// Shared D1 / main2 layout: clause a m in {2,3}; clause b (m-3)^2 < 4 mu;
// clause c sqrt(X) + sqrt((m-3)^2 - 4 mu) < Z.
template <class T>
DampingReport three_clause(ConditionSet set, int m, const T& mu, const T& X, const T& Z,
                           const std::string& c_expr) {
  DampingReport r;
  r.set = set;
  r.exact = std::is_same_v<T, Rational>;
  r.clauses.push_back(categorical("m in {2,3}", m == 2 || m == 3, m));

  T mm3 = T(m - 3);
  T lhs = mm3 * mm3, rhs = 4 * mu;
  Clause b{"b", "(m-3)^2 < 4 mu", state_of(strictly_less(lhs, rhs)),
           {{"(m-3)^2", as_double(lhs)}, {"4mu", as_double(rhs)}, {"(m-3)^2-4mu", as_double(lhs - rhs)}},
           as_double(rhs) - as_double(lhs)};
  r.clauses.push_back(b);

  Clause c{"c", c_expr, ClauseState::NotApplicable, {}, kNaN};
  if (!b.holds()) {
    T Y = lhs - rhs;  // nonnegative here
    if (as_double(Y) < 0) Y = T(0);
    double sx = std::sqrt(as_double(X)), sy = std::sqrt(as_double(Y));
    c.state = state_of(sqrt_sum_less(X, Y, Z));
    c.quantities = {{"sqrt X", sx}, {"sqrt Y", sy}, {"Z", as_double(Z)}};
    c.margin = as_double(Z) - sx - sy;
  }
  r.clauses.push_back(c);
  finish(r);
  return r;
}

template <class T>
DampingReport d1_impl(ConditionSet set, int m1, int m2, const T& l2, const T& u1) {
  if (m1 < 2) throw std::invalid_argument("damping condition needs m >= 2 on its side");
  if (!(u1 > 0)) throw std::invalid_argument("damping condition needs mu > 0 (use main2 or suspension checks)");
  T X = T(m2 - 1) * T(m2 - 1) + 4 * l2;
  T Z = T(m1 + m2 - 4);
  return three_clause<T>(set, m1, u1, X, Z, "sqrt((m'-1)^2+4 lambda') + sqrt((m-3)^2-4mu) < m+m'-4");
}

template <class T>
DampingReport main2_impl(int m1, const T& mu1, int k) {
  if (k == 0) throw std::invalid_argument("main2 needs k != 0");
  if (m1 < 2) throw std::invalid_argument("main2 needs m1 >= 2");
  if (!(mu1 > 0)) throw std::invalid_argument("main2 needs mu1 > 0");
  T X = T(4) * T(k) * T(k);
  T Z = T(m1 - 3);
  return three_clause<T>(ConditionSet::Main2, m1, mu1, X, Z, "2|k| + sqrt((m1-3)^2-4mu1) < m1-3");
}

template <class T>
DampingReport suspension_impl(int m1, const T& mu1) {
  DampingReport r;
  r.set = ConditionSet::Suspension;
  r.exact = std::is_same_v<T, Rational>;
  bool small = m1 == 2 || m1 == 3;
  r.clauses.push_back(categorical("m1 in {2,3}", small, m1));
  T thr = T(m1 - 3);
  r.clauses.push_back({"b", "mu1 > m1-3", state_of(strictly_less(thr, mu1)),
                       {{"mu1", as_double(mu1)}, {"m1-3", as_double(thr)}},
                       as_double(mu1) - as_double(thr)});
  finish(r);
  T q = thr * thr / 4;
  bool many = m1 >= 4 && strictly_less(q, mu1);
  r.clauses.push_back({"countable", "m1 >= 4 and mu1 > (m1-3)^2/4", state_of(many),
                       {{"mu1", as_double(mu1)}, {"(m1-3)^2/4", as_double(q)}},
                       as_double(mu1) - as_double(q)});
  r.existence_minimizer = r.satisfied;
  r.countably_many = many;
  return r;
}

}  // namespace

std::string condition_name(ConditionSet c) {
  switch (c) {
    case ConditionSet::D1: return "D1";
    case ConditionSet::D2: return "D2";
    case ConditionSet::Main2: return "main2";
    case ConditionSet::Suspension: return "suspension";
  }
  return "?";
}

std::string clause_state_name(ClauseState s) {
  switch (s) {
    case ClauseState::True: return "true";
    case ClauseState::False: return "false";
    case ClauseState::NotApplicable: return "not applicable";
  }
  return "?";
}

DampingReport check_D1(const JoinProblem& p) {
  return d1_impl<Rational>(ConditionSet::D1, p.eig1.m, p.eig2.m, p.eig2.lambda, p.eig1.mu);
}

DampingReport check_D2(const JoinProblem& p) {
  return d1_impl<Rational>(ConditionSet::D2, p.eig2.m, p.eig1.m, p.eig1.lambda, p.eig2.mu);
}

DampingReport check_main2(int m1, const Rational& mu1, int k) { return main2_impl<Rational>(m1, mu1, k); }
DampingReport check_suspension(int m1, const Rational& mu1) { return suspension_impl<Rational>(m1, mu1); }

DampingReport check_D1(const JoinCoefficients& c) {
  return d1_impl<double>(ConditionSet::D1, int(c.m1), int(c.m2), c.l2, c.u1);
}
DampingReport check_D2(const JoinCoefficients& c) {
  return d1_impl<double>(ConditionSet::D2, int(c.m2), int(c.m1), c.l1, c.u2);
}
DampingReport check_main2(int m1, double mu1, int k) { return main2_impl<double>(m1, mu1, k); }
DampingReport check_suspension(int m1, double mu1) { return suspension_impl<double>(m1, mu1); }

JoinVerdict check_join(const JoinProblem& p) {
  JoinVerdict v;
  auto circle_degree = [](const Eigenmap& e) {
    BigInt k = sqrt(numerator(e.lambda));
    if (denominator(e.lambda) != 1 || k * k != numerator(e.lambda)) {
      throw std::invalid_argument("main2 needs lambda = k^2 on the circle factor");
    }
    return k.convert_to<int>();
  };
  if (p.eig2.m == 1) {
    if (p.eig2.mu != 0) throw std::invalid_argument("m2 = 1 requires mu2 = 0");
    v.reports.push_back(check_main2(p.eig1.m, p.eig1.mu, circle_degree(p.eig2)));
  } else if (p.eig1.m == 1) {
    if (p.eig1.mu != 0) throw std::invalid_argument("m1 = 1 requires mu1 = 0");
    v.reports.push_back(check_main2(p.eig2.m, p.eig2.mu, circle_degree(p.eig1)));
  } else {
    v.reports.push_back(check_D1(p));
    v.reports.push_back(check_D2(p));
  }
  v.satisfied = true;
  for (const auto& r : v.reports) v.satisfied = v.satisfied && r.satisfied;
  return v;
}

namespace {
Eigenmap build_factor(const FactorRange& r, int m) {
  switch (r.family) {
    case Family::Identity: return identity_eigenmap(m);
    case Family::StandardImmersion: return standard_immersion(m, r.ell);
    case Family::CirclePower: return circle_power(r.ell);
    case Family::Custom: break;
  }
  throw std::invalid_argument("sweep does not enumerate custom eigenmaps");
}
}  // namespace

std::vector<SweepRow> sweep(const FactorRange& first, const FactorRange& second) {
  struct Cell {
    int m1, m2;
  };
  std::vector<Cell> cells;
  auto range = [](const FactorRange& r, int& lo, int& hi) {
    lo = r.family == Family::CirclePower ? 1 : r.m_lo;
    hi = r.family == Family::CirclePower ? 1 : r.m_hi;
  };
  int a0, a1, b0, b1;
  range(first, a0, a1);
  range(second, b0, b1);
  for (int m1 = a0; m1 <= a1; ++m1) {
    for (int m2 = b0; m2 <= b1; ++m2) cells.push_back({m1, m2});
  }
  std::vector<SweepRow> rows(cells.size());
  std::vector<char> keep(cells.size(), 0);
  const int n = static_cast<int>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      auto e1 = build_factor(first, cells[i].m1);
      auto e2 = build_factor(second, cells[i].m2);
      rows[i] = {e1, e2, check_join(make_join(e1, e2))};
      keep[i] = 1;
    } catch (const std::exception&) {
    }
  }
  std::vector<SweepRow> out;
  for (int i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(std::move(rows[i]));
  }
  return out;
}

namespace {
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
std::string csv_num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "family1,m1,ell1,family2,m2,ell2,lambda1,mu1,lambda2,mu2,D1,D1_margin,D2,D2_margin,main2,"
        "main2_margin,satisfied\n";
  for (const auto& r : rows) {
    os << family_name(r.eig1.family) << ',' << r.eig1.m << ',' << r.eig1.ell << ','
       << family_name(r.eig2.family) << ',' << r.eig2.m << ',' << r.eig2.ell << ','
       << to_string(r.eig1.lambda) << ',' << to_string(r.eig1.mu) << ',' << to_string(r.eig2.lambda)
       << ',' << to_string(r.eig2.mu);
    const DampingReport* d1 = nullptr;
    const DampingReport* d2 = nullptr;
    const DampingReport* m2 = nullptr;
    for (const auto& rep : r.verdict.reports) {
      if (rep.set == ConditionSet::D1) d1 = &rep;
      if (rep.set == ConditionSet::D2) d2 = &rep;
      if (rep.set == ConditionSet::Main2) m2 = &rep;
    }
    for (auto* rep : {d1, d2, m2}) {
      if (rep) {
        os << ',' << (rep->satisfied ? "true" : "false") << ',' << csv_num(rep->margin);
      } else {
        os << ",,";
      }
    }
    os << ',' << (r.verdict.satisfied ? "true" : "false") << '\n';
  }
}

nlohmann::json to_json(const DampingReport& r) {
  nlohmann::json j{{"condition", condition_name(r.set)},
                   {"satisfied", r.satisfied},
                   {"margin", num(r.margin)},
                   {"exact", r.exact}};
  j["clauses"] = nlohmann::json::array();
  for (const auto& c : r.clauses) {
    nlohmann::json q = nlohmann::json::object();
    for (const auto& [k, v] : c.quantities) q[k] = num(v);
    j["clauses"].push_back({{"label", c.label},
                            {"expression", c.expression},
                            {"state", clause_state_name(c.state)},
                            {"quantities", q},
                            {"margin", num(c.margin)}});
  }
  if (r.existence_minimizer) j["existence_minimizer"] = *r.existence_minimizer;
  if (r.countably_many) j["countably_many"] = *r.countably_many;
  if (!r.satisfied && r.set != ConditionSet::Suspension) j["verdict"] = "existence unknown";
  return j;
}

nlohmann::json to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& rep : r.verdict.reports) reps.push_back(to_json(rep));
    j.push_back({{"eig1", to_json(r.eig1)}, {"eig2", to_json(r.eig2)}, {"reports", reps},
                 {"satisfied", r.verdict.satisfied}});
  }
  return j;
}

}  // namespace ymjoin
