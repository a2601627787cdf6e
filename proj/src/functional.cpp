#include "ymjoin/functional.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace ymjoin {

namespace {

constexpr double kPi = std::numbers::pi;

inline double wexp(double coef, double logw) { return coef == 0.0 ? 0.0 : coef * std::exp(logw); }

// Log weights of the five J terms in t: kinetic a, kinetic b, coupling,
// potential a, potential b (without the coefficient, without dt/dx).
std::array<double, 5> log_term_weights(const JoinCoefficients& c, const Metric& m) {
  return {(c.m1 - 2) * m.log_cos + c.m2 * m.log_sin, c.m1 * m.log_cos + (c.m2 - 2) * m.log_sin,
          (c.m1 - 2) * m.log_cos + (c.m2 - 2) * m.log_sin, (c.m1 - 4) * m.log_cos + c.m2 * m.log_sin,
          c.m1 * m.log_cos + (c.m2 - 4) * m.log_sin};
}

std::array<double, 5> term_coefficients(const JoinCoefficients& c) {
  return {2 * c.l1, 2 * c.l2, 2 * c.l1 * c.l2, c.l1 * c.u1, c.l2 * c.u2};
}

bool s_scheme(const Grid& g) { return g.spec().scheme == Scheme::UniformS; }

// Distance from the nearby endpoint, for power-law tails on t-based grids.
double end_distance(const Grid& g, double t, bool left) {
  const bool join = g.spec().domain == Domain::Join;
  if (left) return join ? t : t + kPi / 2;
  return kPi / 2 - t;
}

struct Sample {
  double x;     // native coordinate
  double t;
  double dens;  // per unit native x (S grids) or per unit t (t grids)
};

// Integral beyond the outermost sample `out`; the decay rate comes from the
// pair (s0, s1), which sits further in for profiles with pinned end values.
double tail_integral(const Grid& g, bool left, const Sample& out, const Sample& s0, const Sample& s1,
                     double edge_x, double edge_t, bool& infinite) {
  if (!(out.dens > 1e-300) || !(s0.dens > 0) || !(s1.dens > 0)) return 0.0;
  if (s_scheme(g)) {
    double kappa = std::log(s1.dens / s0.dens) / std::abs(s1.x - s0.x);
    if (kappa <= 1e-9) {
      infinite = true;
      return INFINITY;
    }
    double v = out.dens * std::exp(-kappa * std::abs(edge_x - out.x)) / kappa;
    if (v > kDivergenceBound) infinite = true;
    return v;
  }
  double d0 = end_distance(g, s0.t, left), d1 = end_distance(g, s1.t, left);
  double dout = end_distance(g, out.t, left), de = end_distance(g, edge_t, left);
  double p = std::log(s1.dens / s0.dens) / std::log(d1 / d0);
  if (p <= -1 + 1e-9) {
    infinite = true;
    return INFINITY;
  }
  double v = out.dens * dout / (p + 1) * std::pow(de / dout, p + 1);
  if (v > kDivergenceBound) infinite = true;
  return v;
}

}  // namespace

double EnergyReport::tails() const {
  double t = 0;
  for (int j = 0; j < 5; ++j) t += tail_left[j] + tail_right[j];
  return t;
}

DiscreteWeights join_weights(const JoinCoefficients& c, const Grid& g) {
  DiscreteWeights w;
  const int n = g.size();
  const auto coef = term_coefficients(c);
  w.ka.resize(n - 1);
  w.kb.resize(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    const Metric& m = g.cell(k);
    auto lw = log_term_weights(c, m);
    w.ka[k] = wexp(coef[0], lw[0] - m.log_jac) / g.dx(k);
    w.kb[k] = wexp(coef[1], lw[1] - m.log_jac) / g.dx(k);
  }
  w.q3.resize(n);
  w.q4.resize(n);
  w.q5.resize(n);
  const auto& om = g.trapezoid();
  for (int i = 0; i < n; ++i) {
    const Metric& m = g.node(i);
    auto lw = log_term_weights(c, m);
    w.q3[i] = om[i] * wexp(coef[2], lw[2] + m.log_jac);
    w.q4[i] = om[i] * wexp(coef[3], lw[3] + m.log_jac);
    w.q5[i] = om[i] * wexp(coef[4], lw[4] + m.log_jac);
  }
  return w;
}

DiscreteWeights suspension_weights(double m1, double lambda1, double mu1, const Grid& g) {
  DiscreteWeights w;
  const int n = g.size();
  w.ka.resize(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    const Metric& m = g.cell(k);
    w.ka[k] = wexp(2 * lambda1, (m1 - 2) * m.log_cos - m.log_jac) / g.dx(k);
  }
  w.q4.resize(n);
  const auto& om = g.trapezoid();
  for (int i = 0; i < n; ++i) {
    const Metric& m = g.node(i);
    w.q4[i] = om[i] * wexp(lambda1 * mu1, (m1 - 4) * m.log_cos + m.log_jac);
  }
  return w;
}

namespace {

// Shared evaluation for joins (five terms) and suspensions (terms 0 and 3).
EnergyReport evaluate(const DiscreteWeights& w, const Profile& f,
                      const std::array<double, 5>& coef,
                      const std::function<std::array<double, 5>(const Metric&)>& logw) {
  EnergyReport r;
  r.terms = energy_terms(w, f.alpha, f.beta);
  for (double v : r.terms) r.quadrature += v;

  const Grid& g = f.grid;
  const int n = g.size();
  const bool single = f.beta.empty();
  const bool sgrid = s_scheme(g);
  // Pinned end values distort the outermost cells; fit the rate further in.
  const int off = f.pinned_ends ? std::max(1, n / 16) : 0;
  // Adjacent cells differ by a few ulps of 1 - alpha deep in the tail, so the
  // rate is taken across a wider span.
  const int span = std::max(1, n / 128);
  for (int side = 0; side < 2; ++side) {
    const bool left = side == 0;
    const int dir = left ? 1 : -1;
    const int c0 = left ? 0 : n - 2, i0 = left ? 0 : n - 1;
    const double edge_x = g.x(i0), edge_t = g.t(i0);
    auto cell_sample = [&](int c, int term) {
      const Metric& m = g.cell(c);
      const auto& v = term == 0 ? f.alpha : f.beta;
      double q = (v[c + 1] - v[c]) / g.dx(c);
      double lw = logw(m)[term] - m.log_jac;
      double d = wexp(coef[term], lw) * q * q;
      if (!sgrid) d *= std::exp(-m.log_jac);  // per unit t
      return Sample{m.x, m.t, d};
    };
    auto node_sample = [&](int i, int term) {
      const Metric& m = g.node(i);
      double a = f.alpha[i], b = single ? 1.0 : f.beta[i];
      double amp = term == 2 ? a * a * b * b : term == 3 ? (a * a - 1) * (a * a - 1)
                                                         : (b * b - 1) * (b * b - 1);
      double lw = logw(m)[term] + (sgrid ? m.log_jac : 0.0);
      return Sample{m.x, m.t, wexp(coef[term], lw) * amp};
    };
    for (int term = 0; term < 5; ++term) {
      if (coef[term] == 0.0) continue;
      if (single && term != 0 && term != 3) continue;
      Sample out, s0, s1;
      if (term < 2) {
        out = cell_sample(c0, term);
        s0 = cell_sample(c0 + dir * off, term);
        s1 = cell_sample(c0 + dir * (off + span), term);
      } else {
        out = node_sample(i0, term);
        s0 = node_sample(i0 + dir * off, term);
        s1 = node_sample(i0 + dir * (off + span), term);
      }
      bool inf = false;
      double v = tail_integral(g, left, out, s0, s1, edge_x, edge_t, inf);
      (left ? r.tail_left : r.tail_right)[term] = inf ? INFINITY : v;
      if (inf) {
        r.infinite = true;
        if (r.divergent_term < 0) r.divergent_term = term;
      }
    }
  }
  r.value = r.infinite ? INFINITY : r.quadrature + r.tails();
  return r;
}

}  // namespace

EnergyReport evaluate_J(const JoinProblem& p, const Profile& f) {
  if (f.suspension()) throw std::invalid_argument("evaluate_J needs a join profile");
  if (!f.finite()) throw std::invalid_argument("profile has non-finite entries");
  const auto& c = p.coeffs;
  return evaluate(join_weights(c, f.grid), f, term_coefficients(c),
                  [&](const Metric& m) { return log_term_weights(c, m); });
}

EnergyReport evaluate_J_suspension(double m1, double lambda1, double mu1, const Profile& f) {
  if (!f.suspension()) throw std::invalid_argument("evaluate_J_suspension needs a suspension profile");
  if (!f.finite()) throw std::invalid_argument("profile has non-finite entries");
  std::array<double, 5> coef{2 * lambda1, 0, 0, lambda1 * mu1, 0};
  return evaluate(suspension_weights(m1, lambda1, mu1, f.grid), f, coef, [&](const Metric& m) {
    return std::array<double, 5>{(m1 - 2) * m.log_cos, 0, 0, (m1 - 4) * m.log_cos, 0};
  });
}

void discrete_gradient(const JoinProblem& p, const Profile& f, std::vector<double>& ga,
                       std::vector<double>& gb) {
  auto w = join_weights(p.coeffs, f.grid);
  gradient(w, f.alpha, f.beta, ga, gb);
  ga.front() = ga.back() = 0;
  gb.front() = gb.back() = 0;
}

std::vector<double> kinetic_node_weight(const JoinCoefficients& c, const Grid& g, int component) {
  const auto coef = term_coefficients(c);
  std::vector<double> k(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const Metric& m = g.node(i);
    k[i] = wexp(coef[component], log_term_weights(c, m)[component] - m.log_jac);
  }
  return k;
}

std::vector<double> suspension_kinetic_node_weight(double lambda1, double m1, const Grid& g) {
  std::vector<double> k(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const Metric& m = g.node(i);
    k[i] = wexp(2 * lambda1, (m1 - 2) * m.log_cos - m.log_jac);
  }
  return k;
}

void discrete_el_residual(const DiscreteWeights& w, const Grid& g, const std::vector<double>& ka,
                          const std::vector<double>& kb, const std::vector<double>& a,
                          const std::vector<double>& b, std::vector<double>& ra,
                          std::vector<double>& rb) {
  std::vector<double> ga, gb;
  gradient(w, a, b, ga, gb);
  const auto& om = g.trapezoid();
  const int n = g.size();
  ra.assign(n, 0.0);
  rb.assign(w.single() ? 0 : n, 0.0);
  for (int i = 1; i + 1 < n; ++i) {
    double da = 2 * om[i] * ka[i];
    ra[i] = da > 0 ? -ga[i] / da : -ga[i];
    if (w.single()) continue;
    double db = 2 * om[i] * kb[i];
    rb[i] = db > 0 ? -gb[i] / db : -gb[i];
  }
}

double sup_interior(const std::vector<double>& r, int buffer) {
  double s = 0;
  const int n = static_cast<int>(r.size());
  for (int i = buffer; i < n - buffer; ++i) s = std::max(s, std::abs(r[i]));
  return s;
}

double second_variation_at_0_1(const JoinProblem& p, const Grid& g, const std::vector<double>& phi,
                               const std::vector<double>& psi) {
  const auto& c = p.coeffs;
  const int n = g.size();
  if (static_cast<int>(phi.size()) != n || static_cast<int>(psi.size()) != n) {
    throw std::invalid_argument("variation arrays do not match the grid");
  }
  double q = 0;
  for (int k = 0; k + 1 < n; ++k) {
    const Metric& m = g.cell(k);
    auto lw = log_term_weights(c, m);
    double dp = (phi[k + 1] - phi[k]) / g.dx(k), ds = (psi[k + 1] - psi[k]) / g.dx(k);
    q += g.dx(k) * (wexp(4 * c.l1, lw[0] - m.log_jac) * dp * dp +
                    wexp(4 * c.l2, lw[1] - m.log_jac) * ds * ds);
  }
  const auto& om = g.trapezoid();
  for (int i = 0; i < n; ++i) {
    const Metric& m = g.node(i);
    auto lw = log_term_weights(c, m);
    double pot = wexp(4 * c.l1 * c.l2, lw[2] + m.log_jac) - wexp(4 * c.l1 * c.u1, lw[3] + m.log_jac);
    q += om[i] * (pot * phi[i] * phi[i] + wexp(8 * c.l2 * c.u2, lw[4] + m.log_jac) * psi[i] * psi[i]);
  }
  return q;
}

double h_form_value(const JoinProblem& p, const Grid& g, const std::vector<double>& phi) {
  const auto& c = p.coeffs;
  const int n = g.size();
  double h = 0;
  for (int k = 0; k + 1 < n; ++k) {
    const Metric& m = g.cell(k);
    double dp = (phi[k + 1] - phi[k]) / g.dx(k);
    h += g.dx(k) * std::exp(log_term_weights(c, m)[0] - m.log_jac) * dp * dp;
  }
  const auto& om = g.trapezoid();
  for (int i = 0; i < n; ++i) {
    const Metric& m = g.node(i);
    auto lw = log_term_weights(c, m);
    h += om[i] * (wexp(c.l2, lw[2] + m.log_jac) - wexp(c.u1, lw[3] + m.log_jac)) * phi[i] * phi[i];
  }
  return h;
}

double h_form_mass(const JoinProblem& p, const Grid& g, const std::vector<double>& phi) {
  const auto& om = g.trapezoid();
  double mass = 0;
  for (int i = 0; i < g.size(); ++i) {
    const Metric& m = g.node(i);
    mass += om[i] * std::exp(log_term_weights(p.coeffs, m)[0] + m.log_jac) * phi[i] * phi[i];
  }
  return mass;
}

double h_form_min_eig(const JoinProblem& p, const Grid& g) {
  const auto& c = p.coeffs;
  if (c.m1 < 4) throw std::invalid_argument("h_form_min_eig needs m1 >= 4");
  if (g.size() < 64) throw std::invalid_argument("grid too coarse for h_form_min_eig (< 64 nodes)");
  if (g.spec().domain != Domain::Join) throw std::invalid_argument("h_form_min_eig needs a join grid");
  const int n = g.size();
  const auto& om = g.trapezoid();
  // Symmetric scaling T = M^{-1/2} K M^{-1/2} over interior nodes, in log space.
  std::vector<double> log_mass(n), lk(n - 1);
  for (int i = 0; i < n; ++i) {
    const Metric& m = g.node(i);
    log_mass[i] = std::log(om[i]) + log_term_weights(c, m)[0] + m.log_jac;
  }
  for (int k = 0; k + 1 < n; ++k) {
    const Metric& m = g.cell(k);
    lk[k] = log_term_weights(c, m)[0] - m.log_jac - std::log(g.dx(k));
  }
  const int dim = n - 2;
  std::vector<double> d(dim), e(dim > 0 ? dim - 1 : 0);
  for (int j = 0; j < dim; ++j) {
    int i = j + 1;
    const Metric& m = g.node(i);
    d[j] = std::exp(lk[i - 1] - log_mass[i]) + std::exp(lk[i] - log_mass[i]) +
           c.l2 * std::exp(-2 * m.log_sin) - c.u1 * std::exp(-2 * m.log_cos);
    if (j + 1 < dim) e[j] = -std::exp(lk[i] - 0.5 * (log_mass[i] + log_mass[i + 1]));
  }
  auto count_below = [&](double x) {
    int cnt = 0;
    double q = 1;
    for (int j = 0; j < dim; ++j) {
      double off = j > 0 ? e[j - 1] * e[j - 1] / q : 0.0;
      q = d[j] - x - off;
      if (q == 0) q = -1e-300;
      if (q < 0) ++cnt;
    }
    return cnt;
  };
  double lo = INFINITY, hi = INFINITY;
  for (int j = 0; j < dim; ++j) {
    double r = (j > 0 ? std::abs(e[j - 1]) : 0.0) + (j + 1 < dim ? std::abs(e[j]) : 0.0);
    lo = std::min(lo, d[j] - r);
    hi = std::min(hi, d[j]);
  }
  hi += 1e-12 * std::max(1.0, std::abs(hi));
  for (int it = 0; it < 400 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double truncate_value(double v) {
  double a = std::abs(v);
  return a <= 1 ? a : 1 / a;
}

Profile truncate_profile(const Profile& f) {
  Profile out = f;
  for (double& v : out.alpha) v = truncate_value(v);
  for (double& v : out.beta) v = truncate_value(v);
  return out;
}

Profile symmetrize_profile(const Profile& f) {
  if (f.suspension()) throw std::invalid_argument("symmetrize_profile needs a join profile");
  if (!f.grid.symmetric(1e-12)) throw std::invalid_argument("symmetrize_profile needs a grid symmetric about pi/4");
  Profile out = f;
  const int n = f.size();
  for (int i = 0; i < n; ++i) {
    out.alpha[i] = 0.5 * (f.alpha[i] + f.beta[n - 1 - i]);
    out.beta[i] = 0.5 * (f.alpha[n - 1 - i] + f.beta[i]);
  }
  return out;
}

}  // namespace ymjoin
