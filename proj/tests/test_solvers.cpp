#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ymjoin/damping.hpp"
#include "ymjoin/ode.hpp"
#include "ymjoin/solvers.hpp"

using namespace ymjoin;

namespace {
constexpr double kPi = std::numbers::pi;

JoinProblem join(const char* a, const char* b) { return make_join(parse_eigenmap_spec(a), parse_eigenmap_spec(b)); }

SolveOptions opts(int nodes, Method m = Method::Minimize) {
  SolveOptions o;
  o.grid.nodes = nodes;
  o.method = m;
  return o;
}

double sup_diff(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}
}  // namespace

TEST(MinimizeJoin, Identity4FromPerturbedSeed) {
  auto p = join("id:4", "id:4");
  auto o = opts(2048);
  o.seed_perturbation = 0.05;
  auto r = minimize_join(p, o);
  const auto& rep = r.report;
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.classification, Classification::NonconstantJoin);
  EXPECT_LT(rep.el_residual_sup, 1e-6);
  EXPECT_TRUE(rep.boundary.pass());
  EXPECT_TRUE(check_join(p).satisfied);
  EXPECT_GT(rep.interior_min, 0.0);
  EXPECT_LT(rep.interior_max, 1.0);
  EXPECT_FALSE(rep.energy.infinite);
  // The solution is (sin, cos) up to discretization error.
  Profile lc = levi_civita_profile(r.profile.grid);
  EXPECT_LT(sup_diff(r.profile.alpha, lc.alpha), 1e-4);
  EXPECT_LT(sup_diff(r.profile.beta, lc.beta), 1e-4);
}

TEST(MinimizeJoin, ExactSeedNeedsNoRealWork) {
  auto r = minimize_join(join("id:4", "id:4"), opts(2048));
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(r.report.iterations, 1);
}

TEST(MinimizeJoin, JNeverIncreases) {
  for (auto [a, b] : {std::pair{"id:4", "id:4"}, {"id:6", "standard:3:2"}, {"id:5", "id:7"}}) {
    auto o = opts(1024);
    o.seed_perturbation = 0.2;
    o.rng_seed = 3;
    auto r = minimize_join(join(a, b), o);
    const auto& h = r.report.J_history;
    ASSERT_GE(h.size(), 2u);
    for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1] + 1e-14 * std::abs(h[i - 1])) << a << b << i;
  }
}

TEST(MinimizeJoin, Deterministic) {
  auto o = opts(512);
  o.seed_perturbation = 0.1;
  o.rng_seed = 99;
  auto p = join("id:5", "id:3");
  auto r1 = minimize_join(p, o), r2 = minimize_join(p, o);
  EXPECT_EQ(r1.profile.alpha, r2.profile.alpha);
  EXPECT_EQ(r1.profile.beta, r2.profile.beta);
  EXPECT_EQ(r1.report.J_history, r2.report.J_history);
}

TEST(MinimizeJoin, CollapseWhenDampingFails) {
  auto p = join("custom:10:10:0.5", "custom:10:60:0.5");
  EXPECT_FALSE(check_join(p).satisfied);
  auto r = minimize_join(p, opts(1024));
  EXPECT_EQ(r.report.classification, Classification::Constant01);
}

TEST(MinimizeJoin, Preconditions) {
  EXPECT_THROW(minimize_join(join("id:4", "custom:4:4:0"), opts(256)), std::invalid_argument);
  EXPECT_THROW(minimize_join(join("id:4", "circle:1"), opts(256)), std::invalid_argument);
}

TEST(MinimizeJoin, SymmetrizeKeepsJ) {
  auto o = opts(2048);
  o.seed_perturbation = 0.05;
  for (const char* e : {"id:4", "id:6", "standard:3:2"}) {
    auto r = minimize_join(join(e, e), o);
    ASSERT_TRUE(r.report.converged) << e;
    auto p = join(e, e);
    double j0 = evaluate_J(p, r.profile).value;
    double j1 = evaluate_J(p, symmetrize_profile(r.profile)).value;
    EXPECT_LT(std::abs(j1 - j0) / j0, 1e-8) << e;
  }
}

TEST(ConstrainedJoin, CircleSecondFactor) {
  for (const char* a : {"id:2", "id:3", "id:4"}) {
    auto p = join(a, "circle:1");
    EXPECT_TRUE(check_join(p).satisfied);
    auto r = minimize_join_beta0_constrained(p, opts(1024));
    EXPECT_TRUE(r.report.converged) << a;
    EXPECT_EQ(r.report.classification, Classification::NonconstantJoin) << a;
    EXPECT_EQ(r.profile.beta.front(), 1.0);
    // solve_join routes m2 = 1 here.
    auto s = solve_join(p, opts(1024));
    EXPECT_EQ(s.profile.alpha, r.profile.alpha);
  }
}

TEST(ConstrainedJoin, LargeDegreeCollapses) {
  auto p = join("id:12", "circle:2");
  EXPECT_FALSE(check_join(p).satisfied);
  auto r = minimize_join_beta0_constrained(p, opts(1024));
  EXPECT_EQ(r.report.classification, Classification::Constant01);
}

TEST(ConstrainedJoin, RejectsPositiveMu2) {
  EXPECT_THROW(minimize_join_beta0_constrained(join("id:4", "custom:1:1:1"), opts(256)), std::invalid_argument);
  EXPECT_THROW(minimize_join_beta0_constrained(join("id:4", "id:4"), opts(256)), std::invalid_argument);
}

TEST(ShootJoin, Identity4SymmetricAndMatchesMinimizer) {
  auto p = join("id:4", "id:4");
  auto s = shoot_join(p, opts(1024, Method::Shoot));
  ASSERT_TRUE(s.report.converged);
  EXPECT_TRUE(s.report.boundary.pass());
  const auto& f = s.profile;
  const int n = f.size();
  ASSERT_TRUE(f.grid.symmetric());
  double sym = 0;
  for (int i = 0; i < n; ++i) sym = std::max(sym, std::abs(f.alpha[n - 1 - i] - f.beta[i]));
  EXPECT_LT(sym, 1e-6);
  auto m = minimize_join(p, opts(1024));
  EXPECT_LT(sup_diff(f.alpha, m.profile.alpha), 1e-4);
  EXPECT_LT(sup_diff(f.beta, m.profile.beta), 1e-4);
  // Independent check of the shot profile with the finite-difference ODE residual.
  EXPECT_LT(grid_residual_sup(p, f), 1e-3);
}

TEST(ShootJoin, ZeroSeedRejected) {
  auto o = opts(512, Method::Shoot);
  o.shooting_seed = {0, 0, 0, 0};
  EXPECT_THROW(shoot_join(join("id:4", "id:4"), o), std::invalid_argument);
}

TEST(ShootJoin, OtherIdentityJoins) {
  for (auto [a, b] : {std::pair{"id:4", "id:9"}, {"id:5", "id:3"}}) {
    auto s = shoot_join(join(a, b), opts(2048, Method::Shoot));
    EXPECT_TRUE(s.report.converged) << a << b;
    EXPECT_TRUE(s.report.boundary.pass()) << a << b;
  }
}

TEST(Constants, Identity4) {
  auto c = classify_constant_solutions(join("id:4", "id:4"));
  EXPECT_NEAR(c.j01.value, 9 * kPi / 4, 1e-5);
  EXPECT_NEAR(c.j10.value, 9 * kPi / 4, 1e-5);
  EXPECT_NEAR(c.j00.value, 9 * kPi / 2, 1e-5);
  EXPECT_TRUE(*c.j00_above_j01);
  EXPECT_TRUE(*c.j00_above_j10);
  EXPECT_FALSE(c.degenerate);
}

TEST(Constants, LowDimensionInfinite) {
  auto c = classify_constant_solutions(join("id:3", "id:4"));
  EXPECT_TRUE(c.j01.infinite);
  EXPECT_FALSE(c.j00_above_j01.has_value());
}

TEST(Constants, ZeroMuDegenerate) {
  auto p = make_join(JoinCoefficients{4, 4, 4, 4, 0, 0});
  auto c = classify_constant_solutions(p);
  EXPECT_EQ(c.j00.value, 0.0);
  EXPECT_EQ(c.j01.value, 0.0);
  EXPECT_EQ(c.j10.value, 0.0);
  EXPECT_TRUE(c.degenerate);
}

TEST(Constants, ConstantClass) {
  GridSpec gs;
  gs.nodes = 256;
  Grid g(gs);
  EXPECT_EQ(constant_class(constant_profile(g, 0, 1)), Classification::Constant01);
  EXPECT_EQ(constant_class(constant_profile(g, 1, 0)), Classification::Constant10);
  EXPECT_EQ(constant_class(constant_profile(g, 0, 0)), Classification::Constant00);
  EXPECT_FALSE(constant_class(levi_civita_profile(g)).has_value());
}

TEST(Suspension, Identity4TwoBranches) {
  auto p = make_suspension(4, 4, 3);
  auto o = opts(2049);
  auto r0 = solve_suspension(p, 0, o);
  auto r1 = solve_suspension(p, 1, o);
  for (const auto* r : {&r0, &r1}) {
    EXPECT_TRUE(r->report.converged);
    EXPECT_EQ(r->report.classification, Classification::SuspensionNodal);
    EXPECT_LT(r->report.el_residual_sup, 1e-8);
    EXPECT_TRUE(r->report.boundary.values_pass);
  }
  EXPECT_EQ(r0.report.nodal_index, 0);
  EXPECT_EQ(r1.report.nodal_index, 1);
  // The monotone branch is sin t itself.
  EXPECT_NEAR(r0.report.details.at("slope").get<double>(), 1.0, 1e-8);
  double s1 = r1.report.details.at("slope").get<double>();
  EXPECT_GT(std::abs(s1 - 1.0), 1e-6);
  EXPECT_GT(sup_diff(r0.profile.alpha, r1.profile.alpha), 1e-3);
  // Odd symmetry of the returned profiles.
  const int n = r1.profile.size();
  for (int i = 0; i < n; ++i) EXPECT_NEAR(r1.profile.alpha[i], -r1.profile.alpha[n - 1 - i], 1e-12);
}

TEST(Suspension, DistinctNodalClasses) {
  auto p = make_suspension(4, 4, 3);
  auto o = opts(2049);
  std::vector<SolveResult> rs;
  for (int k = 0; k <= 2; ++k) rs.push_back(solve_suspension(p, k, o));
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      double si = rs[i].report.details.at("slope").get<double>();
      double sj = rs[j].report.details.at("slope").get<double>();
      EXPECT_GT(std::abs(si - sj), 1e-6);
      EXPECT_GT(sup_diff(rs[i].profile.alpha, rs[j].profile.alpha), 1e-3);
    }
  }
}

TEST(Suspension, IdentityFamilyFirstTwoBranches) {
  for (int m1 = 4; m1 <= 8; ++m1) {
    auto p = make_suspension(identity_eigenmap(m1));
    for (int k = 0; k <= 1; ++k) {
      auto r = solve_suspension(p, k, opts(1025));
      EXPECT_TRUE(r.report.converged) << m1 << " " << k;
    }
  }
}

TEST(Suspension, BranchNotFoundBelowThreshold) {
  EXPECT_THROW(solve_suspension(make_suspension(6, 6, 1.9), 0, opts(513)), BranchNotFound);
  EXPECT_THROW(solve_suspension(make_suspension(9, 9, 8), 1, opts(513)), BranchNotFound);
}

TEST(Suspension, ScanFindsIncreasingIndices) {
  auto b = scan_suspension_branches(make_suspension(4, 4, 3), opts(513));
  ASSERT_GE(b.size(), 3u);
  for (const auto& br : b) {
    EXPECT_GT(br.p, 0.0);
    EXPECT_NEAR(std::abs(br.slope), br.p, 1e-15);
  }
}

TEST(Options, JsonRoundTrip) {
  SolveOptions o;
  o.method = Method::Shoot;
  o.grid.nodes = 777;
  o.grid.scheme = Scheme::ChebyshevT;
  o.max_iterations = 17;
  o.residual_tolerance = 3e-7;
  o.seed = SeedProfile::Constant10;
  o.seed_perturbation = 0.25;
  o.rng_seed = 12345;
  o.shooting_box = {1e-3, 9};
  auto back = solve_options_from_json(to_json(o));
  EXPECT_EQ(to_json(back).dump(), to_json(o).dump());
  EXPECT_EQ(back.method, Method::Shoot);
  EXPECT_EQ(back.grid.nodes, 777);
  EXPECT_EQ(back.rng_seed, 12345u);
}

TEST(Names, RoundTrip) {
  for (Method m : {Method::Minimize, Method::Shoot}) EXPECT_EQ(parse_method(method_name(m)), m);
  for (SeedProfile s : {SeedProfile::LeviCivita, SeedProfile::Constant01, SeedProfile::Constant10, SeedProfile::Custom}) {
    EXPECT_EQ(parse_seed(seed_name(s)), s);
  }
  EXPECT_EQ(parse_seed("lc"), SeedProfile::LeviCivita);
  EXPECT_THROW(parse_method("newton"), std::invalid_argument);
}
