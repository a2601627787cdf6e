#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <random>

#include "ymjoin/functional.hpp"
#include "ymjoin/kernels.hpp"

using namespace ymjoin;

namespace {

struct Case {
  DiscreteWeights w;
  std::vector<double> a, b;
};

Case make_case(int n, bool single, unsigned seed) {
  GridSpec gs;
  gs.nodes = n;
  gs.domain = single ? Domain::Suspension : Domain::Join;
  Grid g(gs);
  Case c;
  c.w = single ? suspension_weights(6, 6, 5, g) : join_weights({5, 3, 5, 3, 4, 2}, g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  c.a.resize(n);
  for (auto& v : c.a) v = u(rng);
  if (!single) {
    c.b.resize(n);
    for (auto& v : c.b) v = u(rng);
  }
  return c;
}

double rel(double x, double y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); }

}  // namespace

class KernelSizes : public ::testing::TestWithParam<std::tuple<int, bool>> {};

TEST_P(KernelSizes, ParallelMatchesReference) {
  auto [n, single] = GetParam();
  Case c = make_case(n, single, 17 + n);
  auto ep = energy_terms(c.w, c.a, c.b);
  auto er = reference::energy_terms(c.w, c.a, c.b);
  for (int j = 0; j < 5; ++j) EXPECT_LT(rel(ep[j], er[j]), 1e-12) << j;

  std::vector<double> ga, gb, ra, rb;
  gradient(c.w, c.a, c.b, ga, gb);
  reference::gradient(c.w, c.a, c.b, ra, rb);
  ASSERT_EQ(ga.size(), ra.size());
  ASSERT_EQ(gb.size(), rb.size());
  for (int i = 0; i < n; ++i) {
    EXPECT_LE(std::abs(ga[i] - ra[i]), 1e-12 * (std::abs(ra[i]) + 1e-300) + 1e-300) << i;
    if (!single) EXPECT_LE(std::abs(gb[i] - rb[i]), 1e-12 * std::abs(rb[i]) + 1e-300) << i;
  }

  HessianBands hp, hr;
  hessian(c.w, c.a, c.b, hp);
  reference::hessian(c.w, c.a, c.b, hr);
  auto close = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i] - y[i]) > 1e-12 * std::abs(y[i])) return false;
    }
    return true;
  };
  EXPECT_TRUE(close(hp.aa, hr.aa));
  EXPECT_TRUE(close(hp.aa_off, hr.aa_off));
  EXPECT_TRUE(close(hp.bb, hr.bb));
  EXPECT_TRUE(close(hp.ab, hr.ab));
  EXPECT_TRUE(close(hp.bb_off, hr.bb_off));
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelSizes,
                         ::testing::Combine(::testing::Values(16, 255, 256, 257, 1000, 4099),
                                            ::testing::Bool()));

TEST(Kernels, IndependentOfThreadCount) {
  Case c = make_case(10007, false, 3);
  int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  auto e1 = energy_terms(c.w, c.a, c.b);
  std::vector<double> g1a, g1b;
  gradient(c.w, c.a, c.b, g1a, g1b);
  for (int threads : {2, 3, 8}) {
    omp_set_num_threads(threads);
    auto e = energy_terms(c.w, c.a, c.b);
    for (int j = 0; j < 5; ++j) EXPECT_EQ(e[j], e1[j]) << threads;
    std::vector<double> ga, gb;
    gradient(c.w, c.a, c.b, ga, gb);
    EXPECT_EQ(ga, g1a);
    EXPECT_EQ(gb, g1b);
  }
  omp_set_num_threads(saved);
}

TEST(Kernels, GradientOfQuadratic) {
  // Gradient of the energy along a direction equals the directional derivative.
  Case c = make_case(300, false, 8);
  std::vector<double> ga, gb;
  gradient(c.w, c.a, c.b, ga, gb);
  std::vector<double> da(300), db(300);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  double dir = 0;
  for (int i = 0; i < 300; ++i) {
    da[i] = u(rng);
    db[i] = u(rng);
    dir += ga[i] * da[i] + gb[i] * db[i];
  }
  auto total = [&](double h) {
    std::vector<double> a = c.a, b = c.b;
    for (int i = 0; i < 300; ++i) {
      a[i] += h * da[i];
      b[i] += h * db[i];
    }
    auto e = energy_terms(c.w, a, b);
    return e[0] + e[1] + e[2] + e[3] + e[4];
  };
  double h = 1e-5;
  EXPECT_NEAR((total(h) - total(-h)) / (2 * h), dir, 1e-6 * std::abs(dir));
}
