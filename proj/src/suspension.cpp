#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ymjoin/integrator.hpp"
#include "ymjoin/solvers.hpp"

namespace ymjoin {

namespace {

using S2 = StateN<2>;

constexpr double kEscapeMargin = 1e-3;
constexpr double kScanLength = 60.0;
constexpr int kScanPoints = 400;
constexpr double kPolishTarget = 1e-12;
constexpr double kPolishAccept = 1e-9;

struct Trajectory {
  int outcome = 0;  // escape sign, 0 if the orbit stayed bounded
  int zeros = 0;
  double last_zero = 0;
  double s_escape = 0;
  // closest approach to the escape sign after the last zero
  double s_close = 0;
  S2 y_close{0, 0};
};

StepControl scan_control() {
  StepControl c;
  c.abs_tol = 1e-14;
  c.rel_tol = 1e-12;
  c.max_step = 0.1;
  return c;
}

RhsN<2> forward_rhs(const SuspensionProblem& p) {
  const double k = p.m1 - 3, mu = p.u1;
  return [k, mu](const S2& y, S2& dy, double s) {
    dy[0] = y[1];
    dy[1] = k * std::tanh(s) * y[1] + mu * y[0] * (y[0] * y[0] - 1);
  };
}

Trajectory trace(const SuspensionProblem& p, double slope, bool track_approach) {
  Trajectory tr;
  S2 y{0.0, slope};
  double prev = 0;
  std::vector<std::pair<double, S2>> path;
  ObserverN<2> obs = [&](double s, const S2& z) {
    if (prev != 0 && z[0] != 0 && (prev > 0) != (z[0] > 0)) {
      ++tr.zeros;
      tr.last_zero = s;
      path.clear();
    }
    if (z[0] != 0) prev = z[0];
    if (track_approach) path.emplace_back(s, z);
    if (std::abs(z[0]) > 1 + kEscapeMargin && z[0] * z[1] > 0) {
      tr.outcome = z[0] > 0 ? 1 : -1;
      tr.s_escape = s;
      return false;
    }
    return true;
  };
  auto st = integrate_adaptive<2>(forward_rhs(p), y, 0.0, kScanLength, scan_control(), obs);
  if (!st.ok) tr.outcome = 0;
  if (track_approach && tr.outcome != 0) {
    double best = INFINITY;
    for (auto& [s, z] : path) {
      double d = std::abs(1 - tr.outcome * z[0]);
      if (d < best) {
        best = d;
        tr.s_close = s;
        tr.y_close = z;
      }
    }
  }
  return tr;
}

double decaying_rate(const SuspensionProblem& p) {
  double k = p.m1 - 3;
  return (k - std::sqrt(k * k + 8 * p.u1)) / 2;
}

struct Polished {
  bool ok = false;
  double p = 0, c = 0;
  double s_m = 0, s_b = 0;
  double defect = INFINITY;
  int iterations = 0;
  std::string error;
};

// Deviation a = 1 - L*A integrated backward from s_b with a = c, a' = r*c.
RhsN<2> deviation_rhs(const SuspensionProblem& p) {
  const double k = p.m1 - 3, mu = p.u1;
  return [k, mu](const S2& y, S2& dy, double s) {
    const double a = y[0];
    dy[0] = y[1];
    dy[1] = k * std::tanh(s) * y[1] - mu * (1 - a) * a * (a - 2);
  };
}

StepControl polish_control() {
  StepControl c;
  c.abs_tol = 1e-24;
  c.rel_tol = 1e-13;
  c.max_step = 0.1;
  return c;
}

Eigen::Vector2d polish_mismatch(const SuspensionProblem& p, int L, double r, double s_m, double s_b,
                                double slope, double c, bool& ok) {
  S2 f{0.0, slope};
  auto a = integrate_adaptive<2>(forward_rhs(p), f, 0.0, s_m, polish_control());
  S2 b{c, r * c};
  auto q = integrate_adaptive<2>(deviation_rhs(p), b, s_b, s_m, polish_control());
  ok = a.ok && q.ok;
  return {f[0] - L * (1 - b[0]), f[1] + L * b[1]};
}

Polished polish(const SuspensionProblem& p, double slope, int L, const Trajectory& tr) {
  Polished out;
  const double r = decaying_rate(p);
  out.s_b = tr.s_close;
  out.s_m = 0.5 * (tr.last_zero + tr.s_close);
  out.p = slope;
  out.c = 1 - L * tr.y_close[0];
  bool ok = true;
  for (int it = 0; it < 50; ++it) {
    out.iterations = it;
    Eigen::Vector2d F = polish_mismatch(p, L, r, out.s_m, out.s_b, out.p, out.c, ok);
    if (!ok) {
      out.error = "integration failed during polishing";
      return out;
    }
    out.defect = F.lpNorm<Eigen::Infinity>();
    if (out.defect < kPolishTarget) {
      out.ok = true;
      return out;
    }
    Eigen::Matrix2d J;
    double hp = 1e-7 * out.p, hc = 1e-7 * std::max(std::abs(out.c), 1e-12);
    J.col(0) = (polish_mismatch(p, L, r, out.s_m, out.s_b, out.p + hp, out.c, ok) - F) / hp;
    J.col(1) = (polish_mismatch(p, L, r, out.s_m, out.s_b, out.p, out.c + hc, ok) - F) / hc;
    Eigen::Vector2d d = -J.fullPivLu().solve(F);
    if (!d.allFinite()) break;
    double step = 1;
    bool improved = false;
    for (int k = 0; k < 30; ++k, step *= 0.5) {
      double np = out.p + step * d[0], nc = out.c + step * d[1];
      if (!(np > 0)) continue;
      auto Fn = polish_mismatch(p, L, r, out.s_m, out.s_b, np, nc, ok);
      if (ok && Fn.lpNorm<Eigen::Infinity>() < out.defect) {
        out.p = np;
        out.c = nc;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  // Stalling at the integrator's accuracy floor still counts.
  out.ok = out.defect < kPolishAccept;
  if (!out.ok) out.error = "polishing Newton stalled at defect " + std::to_string(out.defect);
  return out;
}

}  // namespace

std::vector<SuspensionBranch> scan_suspension_branches(const SuspensionProblem& p, const SolveOptions& opts) {
  if (!(p.u1 > 0)) throw std::invalid_argument("suspension shooting needs mu1 > 0");
  const double lo = opts.shooting_box[0], hi = opts.shooting_box[1];
  if (!(lo > 0) || !(hi > lo)) throw std::invalid_argument("shooting box must satisfy 0 < lo < hi");
  std::vector<double> ps(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) ps[i] = lo * std::pow(hi / lo, double(i) / (kScanPoints - 1));
  std::vector<Trajectory> tr(kScanPoints);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < kScanPoints; ++i) tr[i] = trace(p, ps[i], false);

  std::vector<std::pair<double, double>> brackets;
  for (int i = 0; i + 1 < kScanPoints; ++i) {
    if (tr[i].outcome != tr[i + 1].outcome && (tr[i].outcome != 0 || tr[i + 1].outcome != 0)) {
      brackets.emplace_back(ps[i], ps[i + 1]);
    }
  }
  std::vector<SuspensionBranch> out(brackets.size());
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < int(brackets.size()); ++b) {
    double a = brackets[b].first, c = brackets[b].second;
    Trajectory ta = trace(p, a, false), tc = trace(p, c, false);
    for (int k = 0; k < 200 && c - a > 4e-16 * c; ++k) {
      double m = 0.5 * (a + c);
      Trajectory tm = trace(p, m, false);
      if (tm.outcome == ta.outcome) {
        a = m;
        ta = tm;
      } else {
        c = m;
        tc = tm;
      }
    }
    const Trajectory* esc = &ta;
    double pe = a;
    if (ta.outcome == 0 || (tc.outcome != 0 && tc.zeros < ta.zeros)) {
      esc = &tc;
      pe = c;
    }
    SuspensionBranch br;
    br.nodal_index = esc->zeros;
    br.p = pe;
    br.end_sign = esc->outcome;
    br.slope = br.end_sign * pe;
    out[b] = br;
  }
  std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.p < y.p; });
  return out;
}

SolveResult solve_suspension(const SuspensionProblem& p, int nodal_index, const SolveOptions& opts) {
  if (nodal_index < 0) throw std::invalid_argument("nodal index must be nonnegative");
  auto branches = scan_suspension_branches(p, opts);
  const SuspensionBranch* pick = nullptr;
  for (auto& b : branches) {
    if (b.nodal_index == nodal_index) {
      pick = &b;
      break;
    }
  }
  if (!pick) {
    throw BranchNotFound("no suspension branch with nodal index " + std::to_string(nodal_index) +
                         " in the shooting box [" + std::to_string(opts.shooting_box[0]) + ", " +
                         std::to_string(opts.shooting_box[1]) + "]");
  }
  const int L = pick->end_sign;
  Trajectory tr = trace(p, pick->p, true);
  Polished pol = polish(p, pick->p, L, tr);
  const double r = decaying_rate(p);

  GridSpec gs = opts.grid;
  gs.domain = Domain::Suspension;
  Grid grid(gs);
  const int n = grid.size();
  Profile f;
  f.grid = grid;
  f.alpha.assign(n, 0.0);
  f.boundary_alpha = {-1.0, 1.0};
  f.boundary_beta = {0.0, 0.0};
  f.pinned_ends = false;

  // Half-line values A(s) for s >= 0, multiplied by L so that alpha -> +1.
  std::vector<double> fw_pts, bw_pts;
  std::vector<int> fw_idx, bw_idx;
  for (int i = 0; i < n; ++i) {
    double s = std::abs(grid.x(i));
    if (s <= pol.s_m) {
      fw_pts.push_back(s);
      fw_idx.push_back(i);
    } else if (s <= pol.s_b) {
      bw_pts.push_back(s);
      bw_idx.push_back(i);
    } else {
      double sign = grid.x(i) < 0 ? -1.0 : 1.0;
      f.alpha[i] = sign * (1 - pol.c * std::exp(r * (s - pol.s_b)));
    }
  }
  auto by_position = [](std::vector<double>& pts, std::vector<int>& idx, bool ascending) {
    std::vector<std::size_t> order(pts.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return ascending ? pts[x] < pts[y] : pts[x] > pts[y];
    });
    std::vector<double> p2;
    std::vector<int> i2;
    for (auto k : order) {
      p2.push_back(pts[k]);
      i2.push_back(idx[k]);
    }
    pts = p2;
    idx = i2;
  };
  by_position(fw_pts, fw_idx, true);
  by_position(bw_pts, bw_idx, false);
  std::vector<S2> fw_vals, bw_vals;
  S2 y{0.0, pol.p};
  integrate_adaptive<2>(forward_rhs(p), y, 0.0, pol.s_m, polish_control(), {}, &fw_pts, &fw_vals);
  S2 z{pol.c, r * pol.c};
  integrate_adaptive<2>(deviation_rhs(p), z, pol.s_b, pol.s_m, polish_control(), {}, &bw_pts, &bw_vals);
  for (std::size_t k = 0; k < fw_vals.size(); ++k) {
    int i = fw_idx[k];
    double sign = grid.x(i) < 0 ? -1.0 : 1.0;
    f.alpha[i] = sign * L * fw_vals[k][0];
  }
  for (std::size_t k = 0; k < bw_vals.size(); ++k) {
    int i = bw_idx[k];
    double sign = grid.x(i) < 0 ? -1.0 : 1.0;
    f.alpha[i] = sign * (1 - bw_vals[k][0]);
  }

  SolveResult out;
  SolveReport& rep = out.report;
  rep.converged = pol.ok;
  rep.iterations = pol.iterations;
  rep.el_residual_sup = pol.defect;
  rep.message = pol.ok ? "" : pol.error;
  rep.classification = Classification::SuspensionNodal;
  rep.nodal_index = nodal_index;
  rep.energy = evaluate_J_suspension(p.m1, p.l1, p.u1, f);
  rep.J = rep.energy.value;
  rep.grid_residual_sup = grid_residual_sup(p, f, kEndpointBuffer);
  rep.boundary = boundary_report_suspension(f);
  rep.interior_min = *std::min_element(f.alpha.begin() + 1, f.alpha.end() - 1);
  rep.interior_max = *std::max_element(f.alpha.begin() + 1, f.alpha.end() - 1);
  nlohmann::json all = nlohmann::json::array();
  for (auto& b : branches) all.push_back({{"nodal_index", b.nodal_index}, {"p", b.p}, {"end_sign", b.end_sign}});
  rep.details = {{"method", "shoot"},
                 {"p", pol.p},
                 {"bisected_p", pick->p},
                 {"end_sign", L},
                 {"slope", L * pol.p},
                 {"tail_amplitude", pol.c},
                 {"decay_rate", r},
                 {"matching_point", pol.s_m},
                 {"approach_point", pol.s_b},
                 {"matching_defect", pol.defect},
                 {"branches", all}};
  out.profile = std::move(f);
  return out;
}

}  // namespace ymjoin
