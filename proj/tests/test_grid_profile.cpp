#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ymjoin/functional.hpp"
#include "ymjoin/grid.hpp"
#include "ymjoin/profile.hpp"

using namespace ymjoin;

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;

GridSpec spec(Scheme s, int n, Domain d = Domain::Join) {
  GridSpec g;
  g.scheme = s;
  g.nodes = n;
  g.domain = d;
  return g;
}
}  // namespace

TEST(Grid, NodesInsideOpenInterval) {
  for (Scheme s : {Scheme::UniformS, Scheme::UniformT, Scheme::ChebyshevT}) {
    Grid g(spec(s, 257));
    EXPECT_EQ(g.size(), 257);
    EXPECT_GT(g.t(0), 0.0);
    EXPECT_LT(g.t(g.size() - 1), kHalfPi);
    for (int i = 1; i < g.size(); ++i) ASSERT_GT(g.t(i), g.t(i - 1));
    if (s != Scheme::UniformS) {
      EXPECT_GE(g.t(0), g.spec().epsilon * (1 - 1e-12));
      EXPECT_GE(kHalfPi - g.t(g.size() - 1), g.spec().epsilon * (1 - 1e-9));
    }
    EXPECT_TRUE(g.symmetric());
  }
}

TEST(Grid, RejectsTooFewNodes) {
  EXPECT_THROW(Grid(spec(Scheme::UniformS, 15)), std::invalid_argument);
  EXPECT_NO_THROW(Grid(spec(Scheme::UniformS, 16)));
}

TEST(Grid, LogMetricMatchesDirect) {
  Grid g(spec(Scheme::UniformS, 129));
  for (int i = 0; i < g.size(); ++i) {
    const Metric& m = g.node(i);
    EXPECT_NEAR(std::exp(m.log_cos), std::cos(m.t), 1e-15);
    EXPECT_NEAR(std::exp(m.log_sin), std::sin(m.t), 1e-15);
    // dt/ds = sin t cos t
    EXPECT_NEAR(std::exp(m.log_jac), std::sin(m.t) * std::cos(m.t), 1e-15);
  }
  EXPECT_NEAR(log_cos_of_s(800.0), -800.0, 1e-12);
  EXPECT_NEAR(log_sin_of_s(-800.0), -800.0, 1e-12);
}

TEST(Grid, NativeOfTInverts) {
  for (Scheme s : {Scheme::UniformS, Scheme::UniformT, Scheme::ChebyshevT}) {
    Grid g(spec(s, 65));
    for (int i = 1; i + 1 < g.size(); ++i) EXPECT_NEAR(g.native_of_t(g.t(i)), g.x(i), 1e-9);
  }
  Grid sus(spec(Scheme::UniformS, 65, Domain::Suspension));
  EXPECT_TRUE(sus.symmetric());
  EXPECT_LT(sus.t(0), 0.0);
  EXPECT_NEAR(sus.native_of_t(sus.t(40)), sus.x(40), 1e-9);
}

TEST(Grid, TrapezoidIntegratesConstant) {
  Grid g(spec(Scheme::UniformS, 101));
  double sum = 0;
  for (double w : g.trapezoid()) sum += w;
  EXPECT_NEAR(sum, 24.0, 1e-12);
}

TEST(Profile, JsonRoundTrip) {
  for (Scheme s : {Scheme::UniformS, Scheme::UniformT, Scheme::ChebyshevT}) {
    Grid g(spec(s, 64));
    Profile f = levi_civita_profile(g);
    f.alpha[7] = 0.123456789012345678;
    Profile h = profile_from_json(nlohmann::json::parse(to_json(f).dump()));
    ASSERT_EQ(h.size(), f.size());
    for (int i = 0; i < f.size(); ++i) {
      EXPECT_EQ(h.alpha[i], f.alpha[i]);
      EXPECT_EQ(h.beta[i], f.beta[i]);
      EXPECT_EQ(h.grid.x(i), g.x(i));
    }
    EXPECT_EQ(h.grid.spec().scheme, s);
  }
}

TEST(Profile, CsvHasSeventeenDigits) {
  Grid g(spec(Scheme::UniformS, 16));
  Profile f = levi_civita_profile(g);
  std::ostringstream os;
  write_csv(os, f);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  EXPECT_EQ(header, "t,alpha,beta");
  std::getline(is, row);
  double t, a, b;
  char c1, c2;
  std::istringstream rs(row);
  rs >> t >> c1 >> a >> c2 >> b;
  EXPECT_EQ(t, g.t(0));
  EXPECT_EQ(a, f.alpha[0]);
  EXPECT_EQ(b, f.beta[0]);
}

TEST(Profile, SuspensionLeviCivita) {
  Grid g(spec(Scheme::UniformS, 33, Domain::Suspension));
  Profile f = levi_civita_profile(g);
  EXPECT_TRUE(f.suspension());
  EXPECT_TRUE(f.beta.empty());
  for (int i = 0; i < f.size(); ++i) {
    EXPECT_NEAR(f.alpha[i], std::sin(g.t(i)), 1e-15);
    EXPECT_NEAR(f.alpha[i], -f.alpha[f.size() - 1 - i], 1e-15);
  }
  EXPECT_EQ(f.boundary_alpha[0], -1.0);
}

TEST(Truncate, PaperMap) {
  EXPECT_DOUBLE_EQ(truncate_value(1.25), 0.8);
  EXPECT_DOUBLE_EQ(truncate_value(-0.3), 0.3);
  EXPECT_DOUBLE_EQ(truncate_value(1.0), 1.0);
  EXPECT_DOUBLE_EQ(truncate_value(-4.0), 0.25);
}

TEST(Truncate, PotentialAndDifferencesDoNotIncrease) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 10000; ++k) {
    double f = u(rng), g = u(rng);
    double tf = truncate_value(f), tg = truncate_value(g);
    EXPECT_GE(tf, 0.0);
    EXPECT_LE(tf, 1.0);
    EXPECT_LE(std::pow(tf * tf - 1, 2), std::pow(f * f - 1, 2) + 1e-12);
    EXPECT_LE(std::abs(tf - tg), std::abs(f - g) + 1e-12);
  }
}

TEST(Symmetrize, FixedPointsAndFormula) {
  Grid g(spec(Scheme::UniformS, 128));
  Profile lc = levi_civita_profile(g);
  Profile s = symmetrize_profile(lc);
  for (int i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(s.alpha[i], lc.alpha[i], 1e-15);
    EXPECT_NEAR(s.beta[i], lc.beta[i], 1e-15);
  }
  Profile ss = lc;
  ss.beta = ss.alpha;  // (sin, sin)
  Profile out = symmetrize_profile(ss);
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    double expect = 0.5 * (std::sin(g.t(i)) + std::sin(kHalfPi - g.t(i)));
    EXPECT_NEAR(out.alpha[i], expect, 1e-14);
    EXPECT_NEAR(out.beta[i], expect, 1e-14);
  }
}

TEST(Symmetrize, ReflectionIdentityOnRandomProfiles) {
  Grid g(spec(Scheme::UniformT, 101));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  Profile f = levi_civita_profile(g);
  for (auto& v : f.alpha) v = u(rng);
  for (auto& v : f.beta) v = u(rng);
  Profile s = symmetrize_profile(f);
  const int n = g.size();
  for (int i = 0; i < n; ++i) EXPECT_EQ(s.alpha[n - 1 - i], s.beta[i]);
  Profile twice = symmetrize_profile(s);
  for (int i = 0; i < n; ++i) EXPECT_EQ(twice.alpha[i], s.alpha[i]);
}

TEST(Symmetrize, RejectsAsymmetricGrid) {
  std::vector<double> x;
  for (int i = 0; i < 20; ++i) x.push_back(-5 + 0.3 * i + 0.01 * i * i);
  Grid g(spec(Scheme::UniformS, 20), x);
  Profile f = levi_civita_profile(g);
  EXPECT_THROW(symmetrize_profile(f), std::invalid_argument);
}
