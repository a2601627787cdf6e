#include "ymjoin/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ymjoin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_open_t(double t) {
  if (!(t > 0 && t < kPi / 2)) throw std::domain_error("t must lie in (0, pi/2)");
}

bool is_s_grid(const Grid& g) { return g.spec().scheme == Scheme::UniformS; }

// t-derivatives from native ones for the Chebyshev grid.
void to_t_derivatives(const Grid& g, int i, double d1, double d2, double& dt1, double& dt2) {
  const auto& spec = g.spec();
  if (spec.scheme == Scheme::UniformT) {
    dt1 = d1;
    dt2 = d2;
    return;
  }
  double r = (spec.domain == Domain::Join ? kPi / 4 : kPi / 2) - spec.epsilon;
  double th = g.x(i);
  double j1 = r * std::sin(th), j2 = r * std::cos(th);
  dt1 = d1 / j1;
  dt2 = (d2 - j2 * dt1) / (j1 * j1);
}

// Distance in t from the nearby end, computed from the log metric to keep
// relative accuracy where t itself has lost it.
double end_distance(const Metric& m, bool left, bool join) {
  if (left && join) return std::asin(std::min(1.0, std::exp(m.log_sin)));
  return std::asin(std::min(1.0, std::exp(m.log_cos)));
}

double nearest_integer_defect(double x, bool odd) {
  if (!std::isfinite(x)) return kNaN;
  double shifted = odd ? x - 1 : x;
  return std::abs(shifted - 2 * std::round(shifted / 2));
}

}  // namespace

double weight_plus(double s) { return 1 / (1 + std::exp(-2 * s)); }
double weight_minus(double s) { return 1 / (1 + std::exp(2 * s)); }

Residual el_residual_t(const JoinCoefficients& c, double t, double a, double ap, double app,
                       double b, double bp, double bpp) {
  require_open_t(t);
  double ct = std::cos(t), st = std::sin(t);
  double cot = ct / st, tan = st / ct;
  double c2 = ct * ct, s2 = st * st;
  double r1 = app + (c.m2 * cot - (c.m1 - 2) * tan) * ap - c.u1 / c2 * (a * a * a - a) -
              c.l2 / s2 * a * b * b;
  double r2 = bpp + ((c.m2 - 2) * cot - c.m1 * tan) * bp - c.u2 / s2 * (b * b * b - b) -
              c.l1 / c2 * a * a * b;
  return {r1, r2};
}

Residual el_residual_s(const JoinCoefficients& c, double s, double a, double ap, double app,
                       double b, double bp, double bpp) {
  double wp = weight_plus(s), wm = weight_minus(s);
  double r1 = app - ((c.m1 - 3) * wp - (c.m2 - 1) * wm) * ap - c.u1 * wp * (a * a * a - a) -
              c.l2 * wm * a * b * b;
  double r2 = bpp - ((c.m1 - 1) * wp - (c.m2 - 3) * wm) * bp - c.u2 * wm * (b * b * b - b) -
              c.l1 * wp * a * a * b;
  return {r1, r2};
}

Residual join_rhs_s(const JoinCoefficients& c, double s, const StatePoint& y) {
  auto r = el_residual_s(c, s, y.A, y.Aprime, 0.0, y.B, y.Bprime, 0.0);
  return {-r.first, -r.second};
}

double suspension_residual(double m1, double mu1, double t, double a, double ap, double app) {
  if (!(std::abs(t) < kPi / 2)) throw std::domain_error("t must lie in (-pi/2, pi/2)");
  double ct = std::cos(t);
  return app - (m1 - 2) * std::tan(t) * ap - mu1 / (ct * ct) * (a * a * a - a);
}

double suspension_residual_s(double m1, double mu1, double s, double a, double ap, double app) {
  return app - (m1 - 3) * std::tanh(s) * ap - mu1 * (a * a * a - a);
}

double to_log_coordinate(double t) {
  require_open_t(t);
  return std::log(std::tan(t));
}

double from_log_coordinate(double s) { return std::atan(std::exp(s)); }

QuadraticRoots solve_quadratic(double b, double c) {
  QuadraticRoots q;
  q.b = b;
  q.c = c;
  double disc = b * b - 4 * c;
  if (disc >= 0) {
    double sq = std::sqrt(disc);
    // stable pair: compute the larger-magnitude root first
    double r1 = b >= 0 ? (-b - sq) / 2 : (-b + sq) / 2;
    double r2 = r1 != 0 ? c / r1 : 0.0;
    q.lo = std::min(r1, r2);
    q.hi = std::max(r1, r2);
    q.re = 0.5 * (q.lo + q.hi);
  } else {
    q.real = false;
    q.re = -b / 2;
    q.im = std::sqrt(-disc) / 2;
  }
  return q;
}

IndicialData indicial_exponents(const JoinCoefficients& c, Endpoint endpoint) {
  IndicialData d;
  d.endpoint = endpoint;
  if (endpoint == Endpoint::TZero) {
    d.alpha = solve_quadratic(c.m2 - 1, -c.l2);
    d.beta = solve_quadratic(c.m2 - 3, -2 * c.u2);
    d.ruled_out = solve_quadratic(c.m2 - 3, c.u2);
  } else {
    d.alpha = solve_quadratic(c.m1 - 3, -2 * c.u1);
    d.beta = solve_quadratic(c.m1 - 1, -c.l1);
    d.ruled_out = solve_quadratic(c.m1 - 3, c.u1);
  }
  if (d.alpha.real && d.alpha.hi > 0) d.alpha_rate = d.alpha.hi;
  if (d.beta.real && d.beta.hi > 0) d.beta_rate = d.beta.hi;
  d.ruled_out_bounded = d.ruled_out.has_positive_real_part();
  if (d.alpha_rate && d.beta_rate) d.decaying_exponent = std::min(*d.alpha_rate, *d.beta_rate);
  return d;
}

void grid_derivatives(const Grid& g, const std::vector<double>& v, std::vector<double>& d1,
                      std::vector<double>& d2) {
  const int n = g.size();
  d1.assign(n, 0.0);
  d2.assign(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    double hl = g.x(i) - g.x(i - 1), hr = g.x(i + 1) - g.x(i);
    d1[i] = (hl * hl * (v[i + 1] - v[i]) + hr * hr * (v[i] - v[i - 1])) / (hl * hr * (hl + hr));
    d2[i] = 2 * (hl * (v[i + 1] - v[i]) - hr * (v[i] - v[i - 1])) / (hl * hr * (hl + hr));
  }
  auto one_sided = [&](int i0, int step) {
    double h = (g.x(i0 + step) - g.x(i0)) * step;
    double y0 = v[i0], y1 = v[i0 + step], y2 = v[i0 + 2 * step], y3 = v[i0 + 3 * step];
    d1[i0] = step * (-3 * y0 + 4 * y1 - y2) / (2 * h);
    d2[i0] = (2 * y0 - 5 * y1 + 4 * y2 - y3) / (h * h);
  };
  one_sided(0, 1);
  one_sided(n - 1, -1);
}

void grid_residual(const JoinProblem& p, const Profile& f, std::vector<double>& ra,
                   std::vector<double>& rb) {
  const Grid& g = f.grid;
  const int n = g.size();
  std::vector<double> a1, a2, b1, b2;
  grid_derivatives(g, f.alpha, a1, a2);
  grid_derivatives(g, f.beta, b1, b2);
  ra.assign(n, 0.0);
  rb.assign(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    Residual r;
    if (is_s_grid(g)) {
      r = el_residual_s(p.coeffs, g.x(i), f.alpha[i], a1[i], a2[i], f.beta[i], b1[i], b2[i]);
    } else {
      double at1, at2, bt1, bt2;
      to_t_derivatives(g, i, a1[i], a2[i], at1, at2);
      to_t_derivatives(g, i, b1[i], b2[i], bt1, bt2);
      r = el_residual_t(p.coeffs, g.t(i), f.alpha[i], at1, at2, f.beta[i], bt1, bt2);
    }
    ra[i] = r.first;
    rb[i] = r.second;
  }
}

void grid_residual_suspension(const SuspensionProblem& p, const Profile& f, std::vector<double>& r) {
  const Grid& g = f.grid;
  const int n = g.size();
  std::vector<double> a1, a2;
  grid_derivatives(g, f.alpha, a1, a2);
  r.assign(n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    if (is_s_grid(g)) {
      r[i] = suspension_residual_s(p.m1, p.u1, g.x(i), f.alpha[i], a1[i], a2[i]);
    } else {
      double at1, at2;
      to_t_derivatives(g, i, a1[i], a2[i], at1, at2);
      r[i] = suspension_residual(p.m1, p.u1, g.t(i), f.alpha[i], at1, at2);
    }
  }
}

namespace {
double sup_buffered(const std::vector<double>& r, int buffer) {
  double s = 0;
  const int n = static_cast<int>(r.size());
  for (int i = std::max(buffer, 1); i < n - std::max(buffer, 1); ++i) s = std::max(s, std::abs(r[i]));
  return s;
}
}  // namespace

double grid_residual_sup(const JoinProblem& p, const Profile& f, int buffer) {
  std::vector<double> ra, rb;
  grid_residual(p, f, ra, rb);
  return std::max(sup_buffered(ra, buffer), sup_buffered(rb, buffer));
}

double grid_residual_sup(const SuspensionProblem& p, const Profile& f, int buffer) {
  std::vector<double> r;
  grid_residual_suspension(p, f, r);
  return sup_buffered(r, buffer);
}

EndFit fit_end(const Profile& f, const std::vector<double>& v, bool left) {
  const Grid& g = f.grid;
  const int n = g.size();
  const bool join = !f.suspension();
  // Pinned ends carry a short boundary layer on S grids; fit past it.
  int first = 0, step = 1;
  if (f.pinned_ends && is_s_grid(g)) {
    first = n / 8;
    step = std::max(1, n / 64);
  } else if (f.pinned_ends) {
    first = 1;
  }
  int idx[3];
  for (int k = 0; k < 3; ++k) idx[k] = left ? first + k * step : n - 1 - first - k * step;
  double d[3], y[3];
  for (int k = 0; k < 3; ++k) {
    d[k] = end_distance(g.node(idx[k]), left, join);
    y[k] = v[idx[k]];
  }
  EndFit fit;
  const double sgn = left ? 1.0 : -1.0;  // d/dt = -d/dd on the right
  double R = (y[1] - y[0]) / (y[2] - y[1]);
  auto ratio = [&](double gam) {
    double p0 = std::exp(gam * std::log(d[0])), p1 = std::exp(gam * std::log(d[1])),
           p2 = std::exp(gam * std::log(d[2]));
    return (p1 - p0) / (p2 - p1);
  };
  double lo = 0.02, hi = 16;
  if (std::isfinite(R) && R > 0) {
    double flo = ratio(lo) - R, fhi = ratio(hi) - R;
    if (flo * fhi < 0) {
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = ratio(mid) - R;
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double gam = 0.5 * (lo + hi);
      double p0 = std::pow(d[0], gam), p1 = std::pow(d[1], gam);
      fit.exponent = gam;
      fit.coefficient = (y[1] - y[0]) / (p1 - p0);
      fit.value = y[0] - fit.coefficient * p0;
      fit.derivative = sgn * fit.coefficient * gam * std::pow(d[0], gam - 1);
      fit.ok = true;
      return fit;
    }
  }
  // no power-law fit (constant or non-monotone data): raw one-sided values
  fit.exponent = kNaN;
  fit.value = y[0];
  fit.derivative = sgn * (y[1] - y[0]) / (d[1] - d[0]);
  return fit;
}

BoundaryReport boundary_report(const JoinProblem& p, const Profile& f) {
  BoundaryReport r;
  auto a0 = fit_end(f, f.alpha, true), a1 = fit_end(f, f.alpha, false);
  auto b0 = fit_end(f, f.beta, true), b1 = fit_end(f, f.beta, false);
  auto value = [&](const char* name, const EndFit& e, double target) {
    BoundaryCheck c{name, e.value, target, kBoundaryValueTol, false, false, e.exponent};
    c.pass = std::abs(e.value - target) <= c.tolerance;
    r.values.push_back(c);
  };
  value("alpha(0)", a0, 0.0);
  value("alpha(pi/2)", a1, 1.0);
  value("beta(0)", b0, 1.0);
  value("beta(pi/2)", b1, 0.0);

  auto lo = indicial_exponents(p.coeffs, Endpoint::TZero);
  auto hi = indicial_exponents(p.coeffs, Endpoint::TPiHalf);
  auto unit = [](const std::optional<double>& rate) {
    return !rate || std::abs(*rate - 1) > 1e-12;
  };
  auto above_one = [](const std::optional<double>& rate) { return !rate || *rate <= 1; };
  auto deriv = [&](const char* name, const EndFit& e, double target, bool conditional) {
    BoundaryCheck c{name, e.derivative, target, kBoundaryDerivativeTol, false, conditional,
                    e.exponent};
    c.pass = std::abs(e.derivative - target) <= c.tolerance;
    r.derivatives.push_back(c);
  };
  deriv("alpha'(0)", a0, 1.0, unit(lo.alpha_rate));
  deriv("alpha'(pi/2)", a1, 0.0, above_one(hi.alpha_rate));
  deriv("beta'(0)", b0, 0.0, above_one(lo.beta_rate));
  deriv("beta'(pi/2)", b1, -1.0, unit(hi.beta_rate));

  r.parity = {{"alpha odd at 0", a0.exponent, nearest_integer_defect(a0.exponent, true)},
              {"beta even at 0", b0.exponent, nearest_integer_defect(b0.exponent, false)},
              {"alpha even at pi/2", a1.exponent, nearest_integer_defect(a1.exponent, false)},
              {"beta odd at pi/2", b1.exponent, nearest_integer_defect(b1.exponent, true)}};

  r.values_pass = std::all_of(r.values.begin(), r.values.end(), [](auto& c) { return c.pass; });
  r.derivatives_pass = std::all_of(r.derivatives.begin(), r.derivatives.end(),
                                   [](auto& c) { return c.conditional || c.pass; });
  return r;
}

BoundaryReport boundary_report_suspension(const Profile& f) {
  BoundaryReport r;
  auto lo = fit_end(f, f.alpha, true), hi = fit_end(f, f.alpha, false);
  const int n = f.size();
  double mid = n % 2 ? f.alpha[n / 2] : 0.5 * (f.alpha[n / 2 - 1] + f.alpha[n / 2]);
  auto value = [&](const char* name, double measured, double target, double exponent) {
    BoundaryCheck c{name, measured, target, kBoundaryValueTol, false, false, exponent};
    c.pass = std::abs(measured - target) <= c.tolerance;
    r.values.push_back(c);
  };
  value("alpha(-pi/2)", lo.value, f.boundary_alpha[0], lo.exponent);
  value("alpha(0)", mid, 0.0, kNaN);
  value("alpha(pi/2)", hi.value, f.boundary_alpha[1], hi.exponent);
  r.parity = {{"alpha even at -pi/2", lo.exponent, nearest_integer_defect(lo.exponent, false)},
              {"alpha even at pi/2", hi.exponent, nearest_integer_defect(hi.exponent, false)}};
  r.values_pass = std::all_of(r.values.begin(), r.values.end(), [](auto& c) { return c.pass; });
  r.derivatives_pass = true;
  return r;
}

namespace {
nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}
nlohmann::json to_json(const BoundaryCheck& c) {
  return {{"name", c.name},
          {"measured", finite_or_null(c.measured)},
          {"target", c.target},
          {"tolerance", c.tolerance},
          {"pass", c.pass},
          {"conditional", c.conditional},
          {"exponent", finite_or_null(c.exponent)}};
}
nlohmann::json to_json(const QuadraticRoots& q) {
  if (q.real) return {{"real", true}, {"roots", {q.lo, q.hi}}};
  return {{"real", false}, {"re", q.re}, {"im", q.im}};
}
}  // namespace

nlohmann::json to_json(const BoundaryReport& r) {
  nlohmann::json j;
  j["values"] = nlohmann::json::array();
  for (const auto& c : r.values) j["values"].push_back(to_json(c));
  j["derivatives"] = nlohmann::json::array();
  for (const auto& c : r.derivatives) j["derivatives"].push_back(to_json(c));
  j["parity"] = nlohmann::json::array();
  for (const auto& c : r.parity) {
    j["parity"].push_back(
        {{"name", c.name}, {"exponent", finite_or_null(c.exponent)}, {"defect", finite_or_null(c.defect)}});
  }
  j["values_pass"] = r.values_pass;
  j["derivatives_pass"] = r.derivatives_pass;
  return j;
}

nlohmann::json to_json(const IndicialData& d) {
  nlohmann::json j{{"endpoint", d.endpoint == Endpoint::TZero ? "t=0" : "t=pi/2"},
                   {"alpha", to_json(d.alpha)},
                   {"beta", to_json(d.beta)},
                   {"ruled_out", to_json(d.ruled_out)},
                   {"ruled_out_bounded", d.ruled_out_bounded}};
  j["alpha_rate"] = d.alpha_rate ? nlohmann::json(*d.alpha_rate) : nlohmann::json(nullptr);
  j["beta_rate"] = d.beta_rate ? nlohmann::json(*d.beta_rate) : nlohmann::json(nullptr);
  return j;
}

}  // namespace ymjoin
