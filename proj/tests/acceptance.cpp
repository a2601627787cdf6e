// Acceptance gate. Run with --criterion N (1..10) or without arguments for all.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdarg>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ymjoin/damping.hpp"
#include "ymjoin/functional.hpp"
#include "ymjoin/geometry.hpp"
#include "ymjoin/ode.hpp"
#include "ymjoin/results.hpp"
#include "ymjoin/solvers.hpp"

using namespace ymjoin;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances and budgets.
constexpr double kExactResidualTol = 1e-12;
constexpr double kGridResidualTol = 1e-4;
constexpr double kClosedFormRelTol = 1e-6;
constexpr double kIdentityRelTol = 1e-10;
constexpr double kMinimizeResidualTol = 1e-6;
constexpr double kShootMismatchTol = 1e-10;
constexpr double kCrossMethodTol = 1e-4;
constexpr double kSymmetryTol = 1e-5;
constexpr double kSuspensionResidualTol = 1e-8;
constexpr double kSlopeSeparation = 1e-6;
constexpr double kStabilityMargin = 0.1;
constexpr double kTamper = 1e-3;
constexpr double kGradientRelTol = 1e-6;

// Collects sub-check lines; a criterion passes when every hard check passes.
class Checker {
 public:
  void hard(bool ok, const std::string& what) {
    lines_.push_back(std::string(ok ? "    ok   " : "    FAIL ") + what);
    ok_ = ok_ && ok;
  }
  void soft(bool ok, const std::string& what) {
    lines_.push_back(std::string(ok ? "    ok   " : "    note ") + what);
  }
  void info(const std::string& what) { lines_.push_back("    info " + what); }
  bool ok() const { return ok_; }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  bool ok_ = true;
  std::vector<std::string> lines_;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

JoinProblem join(const char* a, const char* b) { return make_join(parse_eigenmap_spec(a), parse_eigenmap_spec(b)); }

SolveOptions options(int nodes, Method m = Method::Minimize) {
  SolveOptions o;
  o.grid.nodes = nodes;
  o.method = m;
  return o;
}

Grid join_grid(int n) {
  GridSpec g;
  g.nodes = n;
  return Grid(g);
}

Profile random_smooth_profile(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  Profile f = levi_civita_profile(g);
  double ca[5], cb[5];
  for (int k = 0; k < 5; ++k) {
    ca[k] = u(rng);
    cb[k] = u(rng);
  }
  for (int i = 0; i < g.size(); ++i) {
    const double t = g.t(i);
    for (int k = 0; k < 5; ++k) {
      f.alpha[i] += ca[k] * std::sin(2 * (k + 1) * t);
      f.beta[i] += cb[k] * std::sin(2 * (k + 1) * t);
    }
  }
  return f;
}

double sup_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

double symmetry_defect(const Profile& f) {
  const int n = f.size();
  double d = 0;
  for (int i = 0; i < n; ++i) d = std::max(d, std::abs(f.alpha[n - 1 - i] - f.beta[i]));
  return d;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(YMJOIN_CLI) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 1. Exact-solution residual and second-order grid convergence.
void criterion1(Checker& c) {
  auto t0 = std::chrono::steady_clock::now();
  JoinCoefficients k = make_join(identity_eigenmap(4), identity_eigenmap(4)).coeffs;
  // Rounding of cos t near 0 (and sin t near pi/2) enters divided by sin^2 t,
  // so the absolute bound is checked on [pi/64, pi/2 - pi/64]. Over the whole
  // interval the residual is reported relative to the largest term.
  double worst = 0, scaled = 0;
  for (int i = 0; i < 1000; ++i) {
    double t = kPi / 64 + (i + 0.5) / 1000 * (kPi / 2 - kPi / 32);
    double s = std::sin(t), co = std::cos(t);
    auto r = el_residual_t(k, t, s, co, -s, co, -s, -co);
    worst = std::max({worst, std::abs(r.first), std::abs(r.second)});
  }
  for (int i = 0; i < 1000; ++i) {
    double t = (i + 0.5) / 1000 * kPi / 2;
    double s = std::sin(t), co = std::cos(t);
    auto r = el_residual_t(k, t, s, co, -s, co, -s, -co);
    double big = std::max({k.m2 / std::tan(t), k.m1 * std::tan(t), k.l2 / (s * s), k.l1 / (co * co)});
    scaled = std::max(scaled, std::max(std::abs(r.first), std::abs(r.second)) / big);
  }
  c.hard(worst < kExactResidualTol, fmt("analytic residual at 1000 points %.3g < %.0e", worst, kExactResidualTol));
  c.hard(scaled < kExactResidualTol, fmt("residual relative to the largest term on (0, pi/2): %.3g", scaled));
  JoinProblem p = join("id:4", "id:4");
  double r1 = grid_residual_sup(p, levi_civita_profile(join_grid(2048)));
  double r2 = grid_residual_sup(p, levi_civita_profile(join_grid(4095)));
  c.hard(r1 < kGridResidualTol, fmt("grid residual at 2048 nodes %.3g < %.0e", r1, kGridResidualTol));
  double ratio = r1 / r2;
  c.hard(ratio > 3.5 && ratio < 4.5, fmt("refinement ratio %.3f in (3.5, 4.5)", ratio));
  double dt = seconds_since(t0);
  c.hard(dt < 1.0, fmt("runtime %.3f s < 1 s", dt));
}

// 2. Closed-form energies.
void criterion2(Checker& c) {
  auto t0 = std::chrono::steady_clock::now();
  double j = evaluate_J(join("id:2", "id:2"), levi_civita_profile(join_grid(4096))).value;
  double want = 5 * kPi / 4;
  c.hard(std::abs(j / want - 1) < kClosedFormRelTol, fmt("J(id2 x id2, LC) = %.10f vs 5pi/4 = %.10f", j, want));
  auto k = classify_constant_solutions(join("id:4", "id:4"), join_grid(4096).spec());
  double q = 9 * kPi / 4;
  c.hard(std::abs(k.j01.value / q - 1) < kClosedFormRelTol, fmt("J(0,1) = %.10f vs 9pi/4 = %.10f", k.j01.value, q));
  c.hard(std::abs(k.j10.value / q - 1) < kClosedFormRelTol, fmt("J(1,0) = %.10f vs 9pi/4", k.j10.value));
  c.hard(k.j00.value > std::max(k.j01.value, k.j10.value), fmt("J(0,0) = %.10f above both", k.j00.value));
  double dt = seconds_since(t0);
  c.hard(dt < 1.0, fmt("runtime %.3f s < 1 s", dt));
}

// 3. Energy identity on random smooth and on solved profiles.
void criterion3(Checker& c) {
  std::mt19937_64 rng(20240613);
  const char* specs[][2] = {{"id:4", "id:4"}, {"id:2", "id:5"}, {"standard:3:2", "id:4"}, {"id:6", "standard:2:2"},
                            {"custom:5:7:2.5", "id:3"}};
  Grid g = join_grid(2048);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    JoinProblem p = join(specs[k % 5][0], specs[k % 5][1]);
    Profile f = random_smooth_profile(g, rng);
    double j = evaluate_J(p, f).value, y = ym_energy_from_F(p, f).value;
    worst = std::max(worst, std::abs(y / (2 * j) - 1));
  }
  c.hard(worst < kIdentityRelTol, fmt("20 random profiles: max |YM/(2J) - 1| = %.3g", worst));

  double solved = 0;
  int count = 0;
  auto add = [&](double y, double j) {
    solved = std::max(solved, std::abs(y / (2 * j) - 1));
    ++count;
  };
  for (Method m : {Method::Minimize, Method::Shoot}) {
    for (auto [a, b] : {std::pair{"id:4", "id:4"}, {"id:5", "id:3"}, {"id:4", "id:9"}}) {
      JoinProblem p = join(a, b);
      auto r = solve_join(p, options(2048, m));
      if (!r.report.converged) continue;
      add(ym_energy_from_F(p, r.profile).value, evaluate_J(p, r.profile).value);
    }
  }
  {
    JoinProblem p = join("id:4", "circle:1");
    auto r = solve_join(p, options(2048));
    if (r.report.converged) add(ym_energy_from_F(p, r.profile).value, evaluate_J(p, r.profile).value);
  }
  for (int k = 0; k <= 2; ++k) {
    auto r = solve_suspension(make_suspension(4, 4, 3), k, options(2049));
    if (!r.report.converged) continue;
    add(ym_energy_from_F_suspension(4, 4, 3, r.profile).value, evaluate_J_suspension(4, 4, 3, r.profile).value);
  }
  c.hard(count >= 10, fmt("%d solved profiles collected", count));
  c.hard(solved < kIdentityRelTol, fmt("solved profiles: max |YM/(2J) - 1| = %.3g", solved));
}

// 4. Minimize vs shoot for (id_4, id_4).
void criterion4(Checker& c) {
  auto t0 = std::chrono::steady_clock::now();
  JoinProblem p = join("id:4", "id:4");
  auto mo = options(2048);
  mo.seed_perturbation = 0.05;
  auto m = minimize_join(p, mo);
  auto s = shoot_join(p, options(2048, Method::Shoot));
  c.hard(m.report.converged && m.report.el_residual_sup <= kMinimizeResidualTol,
         fmt("minimize converged, discrete EL residual %.3g <= %.0e", m.report.el_residual_sup, kMinimizeResidualTol));
  c.hard(s.report.converged && s.report.el_residual_sup < kShootMismatchTol,
         fmt("shoot converged, Newton mismatch %.3g < %.0e", s.report.el_residual_sup, kShootMismatchTol));
  double d = std::max(sup_diff(m.profile.alpha, s.profile.alpha), sup_diff(m.profile.beta, s.profile.beta));
  c.hard(d < kCrossMethodTol, fmt("sup distance between methods %.3g < %.0e", d, kCrossMethodTol));
  c.hard(m.report.interior_min > 0 && m.report.interior_max < 1,
         fmt("minimizer interior range (%.3g, 1 - %.3g)", m.report.interior_min, 1 - m.report.interior_max));
  double sm = symmetry_defect(m.profile), ss = symmetry_defect(s.profile);
  c.hard(sm < kSymmetryTol && ss < kSymmetryTol, fmt("symmetry defect minimize %.3g, shoot %.3g", sm, ss));
  double dt = seconds_since(t0);
  c.hard(dt < 30.0, fmt("runtime %.3f s < 30 s", dt));
}

// 5. Nodal branches k = 0, 1 for identity suspensions.
void criterion5(Checker& c) {
  auto t0 = std::chrono::steady_clock::now();
  for (int m1 = 4; m1 <= 8; ++m1) {
    auto p = make_suspension(identity_eigenmap(m1));
    double slope[2] = {NAN, NAN};
    bool both = true;
    for (int k = 0; k <= 1; ++k) {
      try {
        auto r = solve_suspension(p, k, options(2049));
        bool ok = r.report.converged && r.report.el_residual_sup < kSuspensionResidualTol;
        slope[k] = r.report.details.at("slope").get<double>();
        c.hard(ok, fmt("m1=%d k=%d residual %.3g, alpha'(0) = %.9f", m1, k, r.report.el_residual_sup, slope[k]));
        both = both && ok;
      } catch (const BranchNotFound& e) {
        c.hard(false, fmt("m1=%d k=%d not found", m1, k));
        both = false;
      }
    }
    if (both) {
      c.hard(std::abs(slope[0] - slope[1]) > kSlopeSeparation,
             fmt("m1=%d slope separation %.3g", m1, std::abs(slope[0] - slope[1])));
    }
  }
  auto flags = check_suspension(9, Rational(8));
  c.hard(flags.countably_many && !*flags.countably_many, "m1=9: countably_many = false");
  bool not_found = false;
  try {
    solve_suspension(make_suspension(identity_eigenmap(9)), 1, options(2049));
  } catch (const BranchNotFound&) {
    not_found = true;
  }
  c.hard(not_found, "m1=9 k=1: branch not found in the default box");
  double dt = seconds_since(t0);
  c.hard(dt < 60.0, fmt("runtime %.3f s < 60 s", dt));
}

// 6. Suspension existence threshold mu1 > m1 - 3.
void criterion6(Checker& c) {
  struct Case {
    int m1;
    const char* mu;
    bool near;  // within 0.01 of the threshold: solver outcome may be inconclusive
  };
  for (Case k : {Case{6, "3.5", false}, Case{6, "2.9", false}, Case{4, "1.01", true}, Case{4, "0.99", true}}) {
    Rational mu = parse_rational(k.mu);
    bool expect = mu > Rational(k.m1 - 3);
    auto rep = check_suspension(k.m1, mu);
    c.hard(rep.existence_minimizer && *rep.existence_minimizer == expect,
           fmt("(%d, %s): existence flag %s, inequality %s", k.m1, k.mu,
               rep.existence_minimizer && *rep.existence_minimizer ? "true" : "false", expect ? "true" : "false"));
    bool found = false;
    double slope = NAN, jv = NAN;
    try {
      auto r = solve_suspension(make_suspension(k.m1, double(k.m1), to_double(mu)), 0, options(2049));
      found = r.report.converged;
      slope = r.report.details.at("slope").get<double>();
      jv = r.report.J;
    } catch (const BranchNotFound&) {
    }
    std::string what = fmt("(%d, %s): nodal-0 shooting %s", k.m1, k.mu, found ? "found a solution" : "found nothing");
    if (found) what += fmt(" (alpha'(0) = %.6f, J = %.6f)", slope, jv);
    what += fmt(", expected %s", expect ? "success" : "failure");
    if (k.near) {
      c.soft(found == expect, what + " [inconclusive band]");
    } else {
      c.hard(found == expect, what);
    }
  }
}

// 7. Damping truth table, exact arithmetic.
void criterion7(Checker& c) {
  auto rows = sweep({Family::Identity, 2, 12, 1}, {Family::Identity, 2, 12, 1});
  c.hard(rows.size() == 121, fmt("identity sweep has %zu rows", rows.size()));
  int bad = 0;
  bool exact = true;
  for (const auto& row : rows) {
    JoinProblem p = make_join(row.eig1, row.eig2);
    auto d1 = check_D1(p), d2 = check_D2(p);
    exact = exact && d1.exact && d2.exact;
    if (d2.clauses[1].holds() != (row.eig2.m <= 8)) ++bad;
    if (d1.clauses[1].holds() != (row.eig1.m <= 8)) ++bad;
  }
  c.hard(bad == 0, fmt("clause b (D1 on m1, D2 on m2) true exactly for m <= 8: %d mismatches", bad));
  c.hard(exact, "all reports evaluated in rational arithmetic");
  int flips = 0, checked = 0;
  for (int m1 = 2; m1 <= 6; ++m1) {
    for (int ell = 2; ell <= 3; ++ell) {
      auto srows = sweep({Family::StandardImmersion, m1, m1, ell}, {Family::Identity, 2, 12, 1});
      for (const auto& row : srows) {
        auto d2 = check_D2(make_join(row.eig1, row.eig2));
        ++checked;
        if (d2.satisfied != (row.eig2.m <= 8)) ++flips;
      }
    }
  }
  c.hard(checked > 0 && flips == 0, fmt("standard x identity: D2 holds exactly for m2 <= 8 on %d rows (%d mismatches)",
                                        checked, flips));
}

// 8. Sign of the second-variation eigenvalue against D1.
void criterion8(Checker& c) {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(8);
  // First factor an identity; second an identity or a standard immersion,
  // since identity pairs alone always satisfy D1.
  std::uniform_int_distribution<int> um1(4, 14), um2(2, 9), uell(1, 3);
  Grid g = join_grid(4096);
  int sampled = 0, agree = 0, satisfied = 0;
  while (sampled < 20) {
    int m2 = um2(rng), ell = uell(rng);
    Eigenmap second = ell == 1 ? identity_eigenmap(m2) : standard_immersion(m2, ell);
    JoinProblem p = make_join(identity_eigenmap(um1(rng)), second);
    auto d1 = check_D1(p);
    if (!(std::abs(d1.margin) > kStabilityMargin)) continue;
    ++sampled;
    satisfied += d1.satisfied;
    double lam = h_form_min_eig(p, g);
    bool ok = (lam < 0) == d1.satisfied;
    agree += ok;
    if (!ok) {
      c.info(fmt("disagreement at %s x %s: eig %.3g, D1 %d", to_spec(p.eig1).c_str(), to_spec(p.eig2).c_str(), lam,
                 d1.satisfied));
    }
  }
  c.info(fmt("%d of the samples satisfy D1", satisfied));
  c.hard(agree == sampled, fmt("%d of %d sampled problems agree", agree, sampled));
  double dt = seconds_since(t0);
  c.hard(dt < 30.0, fmt("runtime %.3f s < 30 s", dt));
}

// 9. Stored results verify; a single-node tamper is caught.
void criterion9(Checker& c) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("ymjoin_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  struct Job {
    std::string name, args;
  };
  std::vector<Job> jobs = {
      {"minimize_id4", "solve-join --eig1 id:4 --eig2 id:4 --method minimize --grid 2048"},
      {"shoot_id4", "solve-join --eig1 id:4 --eig2 id:4 --method shoot --grid 2048"},
      {"minimize_id5_id3", "solve-join --eig1 id:5 --eig2 id:3 --grid 2048"},
      {"constrained_id4_circle1", "solve-join --eig1 id:4 --eig2 circle:1 --grid 2048"},
      {"suspension_id4_k0", "solve-suspension --eig id:4 --nodal 0"},
      {"suspension_id4_k1", "solve-suspension --eig id:4 --nodal 1"},
      {"suspension_id6_k1", "solve-suspension --eig id:6 --nodal 1"},
  };
  for (const auto& j : jobs) {
    fs::path out = dir / (j.name + ".json");
    int solve = run_cli(j.args + " --out " + out.string());
    if (solve != 0) {
      c.hard(false, fmt("%s: solve exit %d", j.name.c_str(), solve));
      continue;
    }
    int v = run_cli("verify " + out.string());
    c.hard(v == 0, fmt("%s: verify exit %d", j.name.c_str(), v));
    std::ifstream in(out);
    auto doc = nlohmann::json::parse(in);
    auto& alpha = doc["profile"]["alpha"];
    const std::size_t node = alpha.size() / 3;
    alpha[node] = alpha[node].get<double>() + kTamper;
    fs::path bad = dir / (j.name + ".tampered.json");
    std::ofstream(bad) << doc.dump();
    int t = run_cli("verify " + bad.string());
    c.hard(t == 5, fmt("%s: alpha[%zu] + 1e-3 gives verify exit %d", j.name.c_str(), node, t));
  }
  fs::remove_all(dir);
}

// 10. Gradient against finite differences.
void criterion10(Checker& c) {
  std::mt19937_64 rng(10);
  const char* specs[][2] = {{"id:4", "id:4"}, {"id:2", "id:7"}, {"standard:3:2", "id:5"}, {"id:9", "id:2"},
                            {"custom:6:4.5:1.5", "custom:3:8:0.5"}};
  Grid g = join_grid(256);
  std::uniform_int_distribution<int> pick(1, g.size() - 2);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    JoinProblem p = join(specs[k % 5][0], specs[k % 5][1]);
    Profile f = random_smooth_profile(g, rng);
    std::vector<double> ga, gb;
    discrete_gradient(p, f, ga, gb);
    double gmax = 0;
    for (int i = 1; i + 1 < g.size(); ++i) gmax = std::max({gmax, std::abs(ga[i]), std::abs(gb[i])});
    double err = 0;
    for (int probe = 0; probe < 8; ++probe) {
      int i = pick(rng);
      for (int comp = 0; comp < 2; ++comp) {
        const double h = 1e-4;
        auto at = [&](double d) {
          Profile q = f;
          (comp ? q.beta : q.alpha)[i] += d;
          return evaluate_J(p, q).quadrature;
        };
        // Exact for a quartic in the probed entry.
        double fd = (8 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h);
        err = std::max(err, std::abs(fd - (comp ? gb : ga)[i]) / gmax);
      }
    }
    worst = std::max(worst, err);
  }
  c.hard(worst < kGradientRelTol, fmt("100 profiles, max relative error %.3g < %.0e", worst, kGradientRelTol));
}

const std::vector<std::pair<const char*, std::function<void(Checker&)>>> kCriteria = {
    {"exact-solution residual", criterion1},
    {"energy closed forms", criterion2},
    {"energy identity", criterion3},
    {"join minimize vs shoot", criterion4},
    {"suspension multiplicity", criterion5},
    {"suspension threshold", criterion6},
    {"damping truth table", criterion7},
    {"stability cross-check", criterion8},
    {"verification round trip", criterion9},
    {"gradient audit", criterion10},
};

bool run_criterion(int n) {
  Checker c;
  try {
    kCriteria[n - 1].second(c);
  } catch (const std::exception& e) {
    c.hard(false, std::string("exception: ") + e.what());
  }
  for (const auto& line : c.lines()) std::printf("%s\n", line.c_str());
  std::printf("criterion %d (%s): %s\n", n, kCriteria[n - 1].first, c.ok() ? "PASS" : "FAIL");
  std::fflush(stdout);
  return c.ok();
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      which.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]...\n");
      return 2;
    }
  }
  if (which.empty()) {
    for (int n = 1; n <= int(kCriteria.size()); ++n) which.push_back(n);
  }
  bool all = true;
  for (int n : which) {
    if (n < 1 || n > int(kCriteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    all = run_criterion(n) && all;
  }
  return all ? 0 : 1;
}
