#include "ymjoin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "ymjoin/ode.hpp"

namespace ymjoin {

namespace {

inline double sq(double x) { return x * x; }

double native_slope_to_t(const Metric& m, double dx) { return dx * std::exp(-m.log_jac); }

}  // namespace

ProfileSample sample_profile(const Profile& f, double t) {
  const Grid& g = f.grid;
  if (!(t >= g.t_min() && t <= g.t_max())) {
    throw std::domain_error("t outside the profile's grid (endpoints are singular)");
  }
  double x = g.native_of_t(t);
  const auto nodes = g.native_values();
  int i = static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
  i = std::clamp(i, 1, g.size() - 2);
  if (i + 1 < g.size() - 1 && std::abs(nodes[i + 1] - x) < std::abs(nodes[i] - x)) ++i;
  if (i > 1 && std::abs(nodes[i - 1] - x) < std::abs(nodes[i] - x)) --i;
  const double x0 = nodes[i - 1], x1 = nodes[i], x2 = nodes[i + 1];
  // Lagrange basis and derivatives at x
  double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
  double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
  double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  double d0 = (2 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
  double d1 = (2 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
  double d2 = (2 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
  Metric m = g.metric_at(x);
  ProfileSample s;
  s.t = t;
  s.log_cos = m.log_cos;
  s.log_sin = m.log_sin;
  s.a = l0 * f.alpha[i - 1] + l1 * f.alpha[i] + l2 * f.alpha[i + 1];
  s.ap = native_slope_to_t(m, d0 * f.alpha[i - 1] + d1 * f.alpha[i] + d2 * f.alpha[i + 1]);
  if (!f.beta.empty()) {
    s.b = l0 * f.beta[i - 1] + l1 * f.beta[i] + l2 * f.beta[i + 1];
    s.bp = native_slope_to_t(m, d0 * f.beta[i - 1] + d1 * f.beta[i] + d2 * f.beta[i + 1]);
  }
  return s;
}

double CurvatureComponents::norm() const {
  double v = 0;
  for (int k = 0; k < 5; ++k) v += weight[k] * sq(amplitude[k]);
  return v;
}

CurvatureComponents curvature_components(const JoinCoefficients& c, const ProfileSample& s) {
  const double ic = std::exp(-s.log_cos), is = std::exp(-s.log_sin);
  CurvatureComponents k;
  k.amplitude = {(s.a * s.a - 1) * ic * ic, (s.b * s.b - 1) * is * is, s.ap * ic, s.bp * is,
                 s.a * s.b * ic * is};
  k.weight = {2 * c.l1 * c.u1, 2 * c.l2 * c.u2, 4 * c.l1, 4 * c.l2, 4 * c.l1 * c.l2};
  return k;
}

CurvatureComponents curvature_components(const JoinProblem& p, const Profile& f, double t) {
  if (!(t > 0 && t < std::numbers::pi / 2)) throw std::domain_error("t must be interior");
  return curvature_components(p.coeffs, sample_profile(f, t));
}

double pointwise_F_norm(const JoinCoefficients& c, const ProfileSample& s) {
  const double c2 = std::exp(2 * s.log_cos), s2 = std::exp(2 * s.log_sin);
  return 4 * c.l1 * sq(s.ap) / c2 + 4 * c.l2 * sq(s.bp) / s2 +
         2 * c.l1 * c.u1 * sq(s.a * s.a - 1) / (c2 * c2) +
         2 * c.l2 * c.u2 * sq(s.b * s.b - 1) / (s2 * s2) + 4 * c.l1 * c.l2 * sq(s.a * s.b) / (c2 * s2);
}

double pointwise_F_norm(const JoinProblem& p, const Profile& f, double t) {
  if (!(t > 0 && t < std::numbers::pi / 2)) throw std::domain_error("t must be interior");
  return pointwise_F_norm(p.coeffs, sample_profile(f, t));
}

EnergyReport ym_energy_from_F(const JoinProblem& p, const Profile& f) {
  const Grid& g = f.grid;
  const auto& c = p.coeffs;
  const int n = g.size();
  EnergyReport r;
  for (int k = 0; k + 1 < n; ++k) {
    const Metric& m = g.cell(k);
    ProfileSample s;
    s.log_cos = m.log_cos;
    s.log_sin = m.log_sin;
    s.ap = native_slope_to_t(m, (f.alpha[k + 1] - f.alpha[k]) / g.dx(k));
    s.bp = native_slope_to_t(m, (f.beta[k + 1] - f.beta[k]) / g.dx(k));
    auto comp = curvature_components(c, s);
    double w = std::exp(c.m1 * m.log_cos + c.m2 * m.log_sin + m.log_jac) * g.dx(k);
    r.terms[0] += comp.weight[2] == 0 ? 0 : comp.weight[2] * sq(comp.amplitude[2]) * w;
    r.terms[1] += comp.weight[3] == 0 ? 0 : comp.weight[3] * sq(comp.amplitude[3]) * w;
  }
  const auto& om = g.trapezoid();
  for (int i = 0; i < n; ++i) {
    const Metric& m = g.node(i);
    if (!std::isfinite(m.log_jac)) continue;  // zero volume at Chebyshev end nodes
    ProfileSample s;
    s.log_cos = m.log_cos;
    s.log_sin = m.log_sin;
    s.a = f.alpha[i];
    s.b = f.beta[i];
    auto comp = curvature_components(c, s);
    double w = std::exp(c.m1 * m.log_cos + c.m2 * m.log_sin + m.log_jac) * om[i];
    auto add = [&](int slot, int term) {
      if (comp.weight[slot] != 0) r.terms[term] += comp.weight[slot] * sq(comp.amplitude[slot]) * w;
    };
    add(4, 2);
    add(0, 3);
    add(1, 4);
  }
  for (double v : r.terms) r.quadrature += v;
  // The tail model is linear in the density, so the doubled densities give doubled tails.
  auto j = evaluate_J(p, f);
  for (int k = 0; k < 5; ++k) {
    r.tail_left[k] = 2 * j.tail_left[k];
    r.tail_right[k] = 2 * j.tail_right[k];
  }
  r.infinite = j.infinite;
  r.divergent_term = j.divergent_term;
  r.value = r.infinite ? INFINITY : r.quadrature + r.tails();
  return r;
}

EnergyReport ym_energy_from_F_suspension(double m1, double lambda1, double mu1, const Profile& f) {
  const Grid& g = f.grid;
  const int n = g.size();
  EnergyReport r;
  for (int k = 0; k + 1 < n; ++k) {
    const Metric& m = g.cell(k);
    double amp = native_slope_to_t(m, (f.alpha[k + 1] - f.alpha[k]) / g.dx(k)) * std::exp(-m.log_cos);
    r.terms[0] += 4 * lambda1 * sq(amp) * std::exp(m1 * m.log_cos + m.log_jac) * g.dx(k);
  }
  const auto& om = g.trapezoid();
  for (int i = 0; i < n; ++i) {
    const Metric& m = g.node(i);
    if (!std::isfinite(m.log_jac) || lambda1 * mu1 == 0) continue;
    double amp = (f.alpha[i] * f.alpha[i] - 1) * std::exp(-2 * m.log_cos);
    r.terms[3] += 2 * lambda1 * mu1 * sq(amp) * std::exp(m1 * m.log_cos + m.log_jac) * om[i];
  }
  for (double v : r.terms) r.quadrature += v;
  auto j = evaluate_J_suspension(m1, lambda1, mu1, f);
  for (int k = 0; k < 5; ++k) {
    r.tail_left[k] = 2 * j.tail_left[k];
    r.tail_right[k] = 2 * j.tail_right[k];
  }
  r.infinite = j.infinite;
  r.divergent_term = j.divergent_term;
  r.value = r.infinite ? INFINITY : r.quadrature + r.tails();
  return r;
}

std::array<double, 2> omega_norms(const JoinCoefficients& c, const ProfileSample& s) {
  const double co = std::exp(s.log_cos), si = std::exp(s.log_sin);
  const double c2 = co * co, s2 = si * si;
  double om2 = 2 * c.l1 * sq(s.a - si) / c2 + 2 * c.l2 * sq(s.b - co) / s2;
  double dom2 = 2 * c.l1 * c.l1 * sq(s.a) * sq(s.a - si) / (c2 * c2) +
                2 * c.l2 * c.l2 * sq(s.b) * sq(s.b - co) / (s2 * s2) +
                2 * c.l1 * sq(s.ap - co) / c2 + 2 * c.l2 * sq(s.bp + si) / s2;
  return {om2, dom2};
}

std::array<double, 2> omega_norms(const JoinProblem& p, const Profile& f, double t) {
  return omega_norms(p.coeffs, sample_profile(f, t));
}

CoercivityAudit coercivity_audit(const JoinProblem& p, const Profile& f) {
  const Grid& g = f.grid;
  const auto& c = p.coeffs;
  std::vector<double> a1, a2, b1, b2;
  grid_derivatives(g, f.alpha, a1, a2);
  grid_derivatives(g, f.beta, b1, b2);
  const auto& om = g.trapezoid();
  CoercivityAudit audit;
  for (int i = 1; i + 1 < g.size(); ++i) {
    const Metric& m = g.node(i);
    ProfileSample s{g.t(i), f.alpha[i], native_slope_to_t(m, a1[i]), f.beta[i],
                    native_slope_to_t(m, b1[i]), m.log_cos, m.log_sin};
    auto w = omega_norms(c, s);
    audit.lhs += om[i] * (w[0] * w[0] + w[1]) *
                 std::exp(c.m1 * m.log_cos + c.m2 * m.log_sin + m.log_jac);
  }
  audit.energy = evaluate_J(p, f).value;
  audit.constant = audit.lhs / (1 + audit.energy);
  return audit;
}

void write_component_trace(std::ostream& os, const JoinProblem& p, const Profile& f) {
  const Grid& g = f.grid;
  std::vector<double> a1, a2, b1, b2;
  grid_derivatives(g, f.alpha, a1, a2);
  grid_derivatives(g, f.beta, b1, b2);
  os << "t,F_uv,F_wz,F_xu,F_xw,F_uw,F2\n";
  char buf[256];
  for (int i = 1; i + 1 < g.size(); ++i) {
    const Metric& m = g.node(i);
    ProfileSample s{g.t(i), f.alpha[i], native_slope_to_t(m, a1[i]), f.beta[i],
                    native_slope_to_t(m, b1[i]), m.log_cos, m.log_sin};
    auto k = curvature_components(p.coeffs, s);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                  k.amplitude[0], k.amplitude[1], k.amplitude[2], k.amplitude[3], k.amplitude[4],
                  k.norm());
    os << buf;
  }
}

}  // namespace ymjoin
