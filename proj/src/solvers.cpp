#include "ymjoin/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ymjoin/integrator.hpp"

namespace ymjoin {

namespace {

constexpr double kPi = 3.14159265358979323846;

void pin_join_ends(Profile& f) {
  f.alpha.front() = f.boundary_alpha[0];
  f.alpha.back() = f.boundary_alpha[1];
  f.beta.front() = f.boundary_beta[0];
  f.beta.back() = f.boundary_beta[1];
  f.pinned_ends = true;
}

double interior_sup(const std::vector<double>& ra, const std::vector<double>& rb) {
  return std::max(sup_interior(ra, kEndpointBuffer), sup_interior(rb, kEndpointBuffer));
}

struct JoinDiscretization {
  const JoinCoefficients& c;
  const Grid& g;
  DiscreteWeights w;
  std::vector<double> ka, kb;

  JoinDiscretization(const JoinCoefficients& coeffs, const Grid& grid)
      : c(coeffs), g(grid), w(join_weights(coeffs, grid)),
        ka(kinetic_node_weight(coeffs, grid, 0)), kb(kinetic_node_weight(coeffs, grid, 1)) {}

  double energy(const Profile& f) const {
    auto e = energy_terms(w, f.alpha, f.beta);
    return e[0] + e[1] + e[2] + e[3] + e[4];
  }
  double residual(const Profile& f) const {
    std::vector<double> ra, rb;
    discrete_el_residual(w, g, ka, kb, f.alpha, f.beta, ra, rb);
    return interior_sup(ra, rb);
  }
};

void finish_join_report(const JoinProblem& p, const Profile& f, SolveReport& r) {
  r.energy = evaluate_J(p, f);
  r.J = r.energy.value;
  r.grid_residual_sup = grid_residual_sup(p, f, kEndpointBuffer);
  r.boundary = boundary_report(p, f);
  const int n = f.size();
  r.interior_min = INFINITY;
  r.interior_max = -INFINITY;
  for (int i = 1; i + 1 < n; ++i) {
    r.interior_min = std::min({r.interior_min, f.alpha[i], f.beta[i]});
    r.interior_max = std::max({r.interior_max, f.alpha[i], f.beta[i]});
  }
  auto cls = constant_class(f);
  r.classification = cls ? *cls : Classification::NonconstantJoin;
  if (p.symmetric() && f.grid.symmetric(1e-12)) {
    double defect = 0;
    for (int i = 0; i < n; ++i) defect = std::max(defect, std::abs(f.alpha[n - 1 - i] - f.beta[i]));
    r.details["symmetry_defect"] = defect;
  }
}

SolveResult minimize_core(const JoinProblem& p, const SolveOptions& opts) {
  GridSpec gs = opts.grid;
  gs.domain = Domain::Join;
  Grid grid(gs);
  Profile f = seed_profile(grid, opts);
  pin_join_ends(f);
  auto seed_energy = evaluate_J(p, f);
  if (seed_energy.infinite) throw std::invalid_argument("seed profile has infinite energy");

  JoinDiscretization disc(p.coeffs, grid);
  const int n = grid.size();
  const int dim = 2 * (n - 2);
  SolveResult out;
  SolveReport& r = out.report;
  double J = disc.energy(f);
  r.J_history.push_back(J);
  double res = disc.residual(f);
  int newton_steps = 0, gradient_steps = 0;
  double last_step = 0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * dim);

  auto try_direction = [&](const Eigen::VectorXd& d, const std::vector<double>& ga,
                           const std::vector<double>& gb) -> bool {
    double slope = 0;
    for (int i = 1; i + 1 < n; ++i) slope += ga[i] * d[2 * (i - 1)] + gb[i] * d[2 * (i - 1) + 1];
    if (!(slope < 0)) return false;
    double step = 1;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      Profile trial = f;
      for (int i = 1; i + 1 < n; ++i) {
        trial.alpha[i] = truncate_value(f.alpha[i] + step * d[2 * (i - 1)]);
        trial.beta[i] = truncate_value(f.beta[i] + step * d[2 * (i - 1) + 1]);
      }
      double Jt = disc.energy(trial);
      bool armijo = Jt <= J + 1e-4 * step * slope;
      // Near the optimum the decrease drops below rounding; accept steps that
      // keep J flat to rounding and reduce the residual.
      bool flat = false;
      if (!armijo && Jt <= J + 1e-14 * std::abs(J)) flat = disc.residual(trial) < res;
      if (armijo || flat) {
        f = std::move(trial);
        J = std::min(Jt, J);
        last_step = step;
        return true;
      }
    }
    return false;
  };

  int it = 0;
  for (; it < opts.max_iterations && res > opts.residual_tolerance; ++it) {
    std::vector<double> ga, gb;
    gradient(disc.w, f.alpha, f.beta, ga, gb);
    HessianBands h;
    hessian(disc.w, f.alpha, f.beta, h);
    Eigen::VectorXd rhs(dim), diag(dim);
    for (int i = 1; i + 1 < n; ++i) {
      rhs[2 * (i - 1)] = -ga[i];
      rhs[2 * (i - 1) + 1] = -gb[i];
      diag[2 * (i - 1)] = std::abs(h.aa[i]);
      diag[2 * (i - 1) + 1] = std::abs(h.bb[i]);
    }
    bool moved = false;
    for (double tau : {0.0, 1e-8, 1e-6, 1e-4, 1e-2, 1.0, 1e2}) {
      trip.clear();
      for (int i = 1; i + 1 < n; ++i) {
        int ia = 2 * (i - 1), ib = ia + 1;
        trip.emplace_back(ia, ia, h.aa[i] + tau * diag[ia]);
        trip.emplace_back(ib, ib, h.bb[i] + tau * diag[ib]);
        trip.emplace_back(ib, ia, h.ab[i]);
        if (i + 2 < n) {
          trip.emplace_back(ia + 2, ia, h.aa_off[i]);
          trip.emplace_back(ib + 2, ib, h.bb_off[i]);
        }
      }
      Eigen::SparseMatrix<double> H(dim, dim);
      H.setFromTriplets(trip.begin(), trip.end());
      ldlt.compute(H);
      if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0) continue;
      Eigen::VectorXd d = ldlt.solve(rhs);
      if (!d.allFinite()) continue;
      if (try_direction(d, ga, gb)) {
        moved = true;
        ++newton_steps;
        break;
      }
    }
    if (!moved) {
      Eigen::VectorXd d = rhs.cwiseQuotient(diag.cwiseMax(1e-300));
      if (try_direction(d, ga, gb)) {
        moved = true;
        ++gradient_steps;
      }
    }
    r.J_history.push_back(J);
    res = disc.residual(f);
    if (!moved) {
      r.message = "line search stalled";
      break;
    }
  }
  r.iterations = it;
  r.el_residual_sup = res;
  r.converged = res <= opts.residual_tolerance;
  if (!r.converged && r.message.empty()) r.message = "iteration limit reached";
  r.details = {{"method", "minimize"},
               {"newton_steps", newton_steps},
               {"gradient_steps", gradient_steps},
               {"last_step", last_step},
               {"discrete_J", J},
               {"seed", seed_name(opts.seed)}};
  finish_join_report(p, f, r);
  out.profile = std::move(f);
  return out;
}

}  // namespace

std::string method_name(Method m) { return m == Method::Minimize ? "minimize" : "shoot"; }

Method parse_method(const std::string& s) {
  if (s == "minimize") return Method::Minimize;
  if (s == "shoot") return Method::Shoot;
  throw std::invalid_argument("unknown method '" + s + "'");
}

std::string seed_name(SeedProfile s) {
  switch (s) {
    case SeedProfile::LeviCivita: return "levi-civita";
    case SeedProfile::Constant01: return "constant01";
    case SeedProfile::Constant10: return "constant10";
    case SeedProfile::Custom: return "custom";
  }
  return "?";
}

SeedProfile parse_seed(const std::string& s) {
  if (s == "levi-civita" || s == "lc") return SeedProfile::LeviCivita;
  if (s == "constant01") return SeedProfile::Constant01;
  if (s == "constant10") return SeedProfile::Constant10;
  if (s == "custom") return SeedProfile::Custom;
  throw std::invalid_argument("unknown seed profile '" + s + "'");
}

std::string classification_name(Classification c, int nodal) {
  switch (c) {
    case Classification::NonconstantJoin: return "NonconstantJoin";
    case Classification::Constant01: return "Constant01";
    case Classification::Constant10: return "Constant10";
    case Classification::Constant00: return "Constant00";
    case Classification::SuspensionNodal: return "SuspensionNodal(" + std::to_string(nodal) + ")";
  }
  return "?";
}

Profile seed_profile(const Grid& g, const SolveOptions& opts) {
  Profile f;
  switch (opts.seed) {
    case SeedProfile::LeviCivita: f = levi_civita_profile(g); break;
    case SeedProfile::Constant01: f = constant_profile(g, 0, 1); break;
    case SeedProfile::Constant10: f = constant_profile(g, 1, 0); break;
    case SeedProfile::Custom:
      if (!opts.custom_seed) throw std::invalid_argument("custom seed requested without a profile");
      if (opts.custom_seed->size() != g.size()) throw std::invalid_argument("custom seed does not match the grid");
      f = *opts.custom_seed;
      f.grid = g;
      break;
  }
  if (opts.seed_perturbation != 0 && !f.suspension()) {
    std::mt19937_64 rng(opts.rng_seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double ra[3], rb[3];
    for (int k = 0; k < 3; ++k) {
      ra[k] = u(rng);
      rb[k] = u(rng);
    }
    const int n = g.size();
    // Modes in t vanish at both ends at the same rate as the profile itself,
    // so the seed keeps a finite energy.
    for (int i = 0; i < n; ++i) {
      const double t = g.t(i);
      for (int k = 0; k < 3; ++k) {
        double mode = std::sin(2 * (k + 1) * t);
        f.alpha[i] += opts.seed_perturbation * ra[k] * mode;
        f.beta[i] += opts.seed_perturbation * rb[k] * mode;
      }
    }
    f = truncate_profile(f);
  }
  return f;
}

std::optional<Classification> constant_class(const Profile& f, double tol) {
  if (f.suspension()) return std::nullopt;
  const int n = f.size();
  const int buffer = std::max(kEndpointBuffer, n / 10);
  const std::pair<double, double> targets[3] = {{0, 1}, {1, 0}, {0, 0}};
  const Classification cls[3] = {Classification::Constant01, Classification::Constant10,
                                 Classification::Constant00};
  for (int k = 0; k < 3; ++k) {
    double dev = 0;
    for (int i = buffer; i < n - buffer; ++i) {
      dev = std::max({dev, std::abs(f.alpha[i] - targets[k].first), std::abs(f.beta[i] - targets[k].second)});
    }
    if (dev < tol) return cls[k];
  }
  return std::nullopt;
}

SolveResult minimize_join(const JoinProblem& p, const SolveOptions& opts) {
  const auto& c = p.coeffs;
  if (c.m1 < 2 || c.m2 < 2) throw std::invalid_argument("minimize_join needs m1, m2 >= 2");
  if (!(c.u1 > 0) || !(c.u2 > 0)) throw std::invalid_argument("minimize_join needs mu1, mu2 > 0");
  return minimize_core(p, opts);
}

SolveResult minimize_join_beta0_constrained(const JoinProblem& p, const SolveOptions& opts) {
  const auto& c = p.coeffs;
  if (c.m2 != 1) throw std::invalid_argument("constrained minimization needs m2 = 1");
  if (c.u2 != 0) throw std::invalid_argument("constrained minimization needs mu2 = 0");
  if (c.m1 < 2) throw std::invalid_argument("constrained minimization needs m1 >= 2");
  if (!(c.u1 > 0)) throw std::invalid_argument("constrained minimization needs mu1 > 0");
  double k = std::sqrt(c.l2);
  if (!(c.l2 > 0) || std::abs(k - std::round(k)) > 1e-12) {
    throw std::invalid_argument("constrained minimization needs lambda2 = k^2 for an integer k != 0");
  }
  // beta(0) = 1 is one of the pinned end values.
  auto out = minimize_core(p, opts);
  out.report.details["constraint"] = "beta(0)=1";
  return out;
}

namespace {

struct ShootSetup {
  JoinCoefficients c;
  double gA, gb, kA, kB;  // admissible rates
  double S;
  StepControl ctl;
};

using S4 = StateN<4>;

// Left half-line in (A, A', b = 1 - B, b').
void rhs_left(const JoinCoefficients& c, const S4& y, S4& dy, double s) {
  const double wp = weight_plus(s), wm = weight_minus(s);
  const double A = y[0], b = y[2], B = 1 - b;
  dy[0] = y[1];
  dy[1] = ((c.m1 - 3) * wp - (c.m2 - 1) * wm) * y[1] + c.u1 * wp * A * (A * A - 1) + c.l2 * wm * A * B * B;
  dy[2] = y[3];
  dy[3] = ((c.m1 - 1) * wp - (c.m2 - 3) * wm) * y[3] - c.u2 * wm * B * b * (b - 2) - c.l1 * wp * A * A * B;
}

// Right half-line in (a = 1 - A, a', B, B').
void rhs_right(const JoinCoefficients& c, const S4& y, S4& dy, double s) {
  const double wp = weight_plus(s), wm = weight_minus(s);
  const double a = y[0], A = 1 - a, B = y[2];
  dy[0] = y[1];
  dy[1] = ((c.m1 - 3) * wp - (c.m2 - 1) * wm) * y[1] - c.u1 * wp * A * a * (a - 2) - c.l2 * wm * A * B * B;
  dy[2] = y[3];
  dy[3] = ((c.m1 - 1) * wp - (c.m2 - 3) * wm) * y[3] + c.u2 * wm * B * (B * B - 1) + c.l1 * wp * A * A * B;
}

S4 left_start(const ShootSetup& st, const std::array<double, 4>& P, double s) {
  double A = P[0] * std::exp(st.gA * s), b = P[1] * std::exp(st.gb * s);
  return {A, st.gA * A, b, st.gb * b};
}

S4 right_start(const ShootSetup& st, const std::array<double, 4>& P, double s) {
  double a = P[2] * std::exp(-st.kA * s), B = P[3] * std::exp(-st.kB * s);
  return {a, -st.kA * a, B, -st.kB * B};
}

struct HalfLines {
  S4 left, right;
  bool ok = true;
  std::string error;
};

HalfLines integrate_halves(const ShootSetup& st, const std::array<double, 4>& P,
                           const std::vector<double>* left_samples = nullptr,
                           std::vector<S4>* left_out = nullptr,
                           const std::vector<double>* right_samples = nullptr,
                           std::vector<S4>* right_out = nullptr) {
  HalfLines h;
  h.left = left_start(st, P, -st.S);
  RhsN<4> fl = [&](const S4& y, S4& dy, double s) { rhs_left(st.c, y, dy, s); };
  auto a = integrate_adaptive<4>(fl, h.left, -st.S, 0.0, st.ctl, {}, left_samples, left_out);
  h.right = right_start(st, P, st.S);
  RhsN<4> fr = [&](const S4& y, S4& dy, double s) { rhs_right(st.c, y, dy, s); };
  auto b = integrate_adaptive<4>(fr, h.right, st.S, 0.0, st.ctl, {}, right_samples, right_out);
  h.ok = a.ok && b.ok;
  h.error = !a.ok ? a.error : b.error;
  return h;
}

Eigen::Vector4d mismatch(const HalfLines& h) {
  return {h.left[0] - (1 - h.right[0]), h.left[1] + h.right[1], (1 - h.left[2]) - h.right[2],
          -h.left[3] - h.right[3]};
}

}  // namespace

SolveResult shoot_join(const JoinProblem& p, const SolveOptions& opts) {
  const auto& c = p.coeffs;
  auto lo = indicial_exponents(c, Endpoint::TZero);
  auto hi = indicial_exponents(c, Endpoint::TPiHalf);
  if (!lo.alpha_rate || !lo.beta_rate || !hi.alpha_rate || !hi.beta_rate) {
    throw std::invalid_argument("indicial roots are complex or give no admissible rate; shooting is not set up");
  }
  std::array<double, 4> P = opts.shooting_seed;
  if (std::all_of(P.begin(), P.end(), [](double v) { return v == 0; })) {
    throw std::invalid_argument("degenerate shooting seed (all amplitudes zero): this is the constant branch");
  }
  ShootSetup st{c, *lo.alpha_rate, *lo.beta_rate, *hi.alpha_rate, *hi.beta_rate,
                opts.initial_half_length, {}};
  st.ctl.abs_tol = 1e-30;
  st.ctl.rel_tol = 1e-13;
  st.ctl.max_step = 0.25;

  SolveResult out;
  SolveReport& r = out.report;
  int total_newton = 0;
  double defect = INFINITY;
  bool decay_met = false;
  std::string error;
  for (int round = 0; round < 8; ++round) {
    for (int it = 0; it < opts.max_iterations; ++it) {
      auto h = integrate_halves(st, P);
      if (!h.ok) {
        error = h.error;
        break;
      }
      Eigen::Vector4d F = mismatch(h);
      defect = F.lpNorm<Eigen::Infinity>();
      if (defect < opts.shooting_tolerance) break;
      Eigen::Matrix4d Jm;
      for (int j = 0; j < 4; ++j) {
        auto Q = P;
        double step = 1e-7 * std::max(std::abs(P[j]), 1e-3);
        Q[j] += step;
        auto hq = integrate_halves(st, Q);
        Jm.col(j) = (mismatch(hq) - F) / step;
      }
      Eigen::FullPivLU<Eigen::Matrix4d> lu(Jm);
      if (lu.rank() < 4) {
        error = "singular shooting Jacobian";
        break;
      }
      Eigen::Vector4d d = -lu.solve(F);
      double lambda = 1;
      bool improved = false;
      for (int k = 0; k < 30; ++k, lambda *= 0.5) {
        std::array<double, 4> Q;
        for (int j = 0; j < 4; ++j) Q[j] = P[j] + lambda * d[j];
        auto hq = integrate_halves(st, Q);
        if (!hq.ok) continue;
        double dq = mismatch(hq).lpNorm<Eigen::Infinity>();
        if (dq < defect) {
          P = Q;
          improved = true;
          break;
        }
      }
      ++total_newton;
      if (!improved) {
        error = "Newton iteration diverged";
        break;
      }
    }
    if (!error.empty() || !(defect < opts.shooting_tolerance)) break;
    // far-end size of the admissible modes
    double need = st.S;
    const double rates[4] = {st.gA, st.gb, st.kA, st.kB};
    double worst = 0;
    for (int j = 0; j < 4; ++j) {
      double mag = std::abs(P[j]) * std::exp(-rates[j] * st.S);
      worst = std::max(worst, mag);
      if (mag >= 1e-14) need = std::max(need, std::log(std::abs(P[j]) / 1e-14) / rates[j] + 0.5);
    }
    if (worst < 1e-14) {
      decay_met = true;
      break;
    }
    if (st.S >= opts.max_half_length) break;
    st.S = std::min(need, opts.max_half_length);
  }

  GridSpec gs = opts.grid;
  gs.domain = Domain::Join;
  gs.scheme = Scheme::UniformS;
  Grid grid(gs);
  Profile f;
  f.grid = grid;
  const int n = grid.size();
  f.alpha.assign(n, 0.0);
  f.beta.assign(n, 0.0);
  if (error.empty()) {
    std::vector<double> left_pts, right_pts;
    std::vector<int> left_idx, right_idx;
    for (int i = 0; i < n; ++i) {
      double s = grid.x(i);
      if (s <= 0 && s >= -st.S) {
        left_pts.push_back(s);
        left_idx.push_back(i);
      } else if (s > 0 && s <= st.S) {
        right_pts.push_back(s);
        right_idx.push_back(i);
      }
    }
    std::reverse(right_pts.begin(), right_pts.end());
    std::reverse(right_idx.begin(), right_idx.end());
    std::vector<S4> ls, rs;
    auto h = integrate_halves(st, P, &left_pts, &ls, &right_pts, &rs);
    for (std::size_t k = 0; k < ls.size(); ++k) {
      f.alpha[left_idx[k]] = ls[k][0];
      f.beta[left_idx[k]] = 1 - ls[k][2];
    }
    for (std::size_t k = 0; k < rs.size(); ++k) {
      f.alpha[right_idx[k]] = 1 - rs[k][0];
      f.beta[right_idx[k]] = rs[k][2];
    }
    for (int i = 0; i < n; ++i) {
      double s = grid.x(i);
      if (s < -st.S) {
        auto y = left_start(st, P, s);
        f.alpha[i] = y[0];
        f.beta[i] = 1 - y[2];
      } else if (s > st.S) {
        auto y = right_start(st, P, s);
        f.alpha[i] = 1 - y[0];
        f.beta[i] = y[2];
      }
    }
    (void)h;
  }
  r.converged = error.empty() && defect < opts.shooting_tolerance;
  r.iterations = total_newton;
  r.el_residual_sup = defect;
  r.message = error.empty() ? (r.converged ? "" : "Newton did not reach the matching tolerance") : error;
  r.details = {{"method", "shoot"},
               {"amplitudes", P},
               {"rates", {st.gA, st.gb, st.kA, st.kB}},
               {"half_length", st.S},
               {"decay_criterion_met", decay_met},
               {"matching_defect", std::isfinite(defect) ? nlohmann::json(defect) : nlohmann::json(nullptr)}};
  if (r.converged) {
    finish_join_report(p, f, r);
  }
  out.profile = std::move(f);
  return out;
}

SolveResult solve_join(const JoinProblem& p, const SolveOptions& opts) {
  if (p.coeffs.m2 == 0 || p.coeffs.m1 == 0) {
    throw std::invalid_argument("m = 0 is a suspension; use solve-suspension");
  }
  if (p.coeffs.m2 == 1) return minimize_join_beta0_constrained(p, opts);
  if (opts.method == Method::Shoot) return shoot_join(p, opts);
  return minimize_join(p, opts);
}

ConstantSolutions classify_constant_solutions(const JoinProblem& p, const GridSpec& spec) {
  GridSpec gs = spec;
  gs.domain = Domain::Join;
  Grid g(gs);
  ConstantSolutions cs;
  cs.j00 = evaluate_J(p, constant_profile(g, 0, 0));
  cs.j01 = evaluate_J(p, constant_profile(g, 0, 1));
  cs.j10 = evaluate_J(p, constant_profile(g, 1, 0));
  if (!cs.j00.infinite && !cs.j01.infinite) cs.j00_above_j01 = cs.j00.value > cs.j01.value;
  if (!cs.j00.infinite && !cs.j10.infinite) cs.j00_above_j10 = cs.j00.value > cs.j10.value;
  cs.degenerate = !cs.j00.infinite && !cs.j01.infinite && !cs.j10.infinite && cs.j00.value == 0 &&
                  cs.j01.value == 0 && cs.j10.value == 0;
  return cs;
}

namespace {
nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}
nlohmann::json to_json(const EnergyReport& e) {
  return {{"value", finite_or_null(e.value)},    {"quadrature", e.quadrature},
          {"terms", e.terms},                    {"tail_left", e.tail_left},
          {"tail_right", e.tail_right},          {"infinite", e.infinite},
          {"divergent_term", e.divergent_term}};
}
}  // namespace

nlohmann::json to_json(const SolveReport& r) {
  nlohmann::json j;
  j["converged"] = r.converged;
  j["J"] = finite_or_null(r.J);
  j["energy"] = to_json(r.energy);
  j["el_residual_sup"] = finite_or_null(r.el_residual_sup);
  j["grid_residual_sup"] = finite_or_null(r.grid_residual_sup);
  j["boundary"] = to_json(r.boundary);
  j["iterations"] = r.iterations;
  j["classification"] = classification_name(r.classification, r.nodal_index);
  if (r.nodal_index >= 0) j["nodal_index"] = r.nodal_index;
  j["interior_min"] = finite_or_null(r.interior_min);
  j["interior_max"] = finite_or_null(r.interior_max);
  j["J_history"] = r.J_history;
  j["details"] = r.details;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

nlohmann::json to_json(const SolveOptions& o) {
  return {{"method", method_name(o.method)},
          {"grid", to_json(o.grid)},
          {"max_iterations", o.max_iterations},
          {"gradient_tolerance", o.gradient_tolerance},
          {"residual_tolerance", o.residual_tolerance},
          {"shooting_box", o.shooting_box},
          {"seed_profile", seed_name(o.seed)},
          {"seed_perturbation", o.seed_perturbation},
          {"rng_seed", o.rng_seed},
          {"shooting_seed", o.shooting_seed},
          {"shooting_tolerance", o.shooting_tolerance}};
}

SolveOptions solve_options_from_json(const nlohmann::json& j) {
  SolveOptions o;
  if (j.contains("method")) o.method = parse_method(j.at("method").get<std::string>());
  if (j.contains("grid")) o.grid = grid_spec_from_json(j.at("grid"));
  o.max_iterations = j.value("max_iterations", o.max_iterations);
  o.gradient_tolerance = j.value("gradient_tolerance", o.gradient_tolerance);
  o.residual_tolerance = j.value("residual_tolerance", o.residual_tolerance);
  if (j.contains("shooting_box")) o.shooting_box = j.at("shooting_box").get<std::array<double, 2>>();
  if (j.contains("seed_profile")) o.seed = parse_seed(j.at("seed_profile").get<std::string>());
  o.seed_perturbation = j.value("seed_perturbation", o.seed_perturbation);
  o.rng_seed = j.value("rng_seed", o.rng_seed);
  if (j.contains("shooting_seed")) o.shooting_seed = j.at("shooting_seed").get<std::array<double, 4>>();
  o.shooting_tolerance = j.value("shooting_tolerance", o.shooting_tolerance);
  return o;
}

}  // namespace ymjoin
