#include "ymjoin/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "ymjoin/functional.hpp"
#include "ymjoin/geometry.hpp"
#include "ymjoin/ode.hpp"

namespace ymjoin {

namespace {

constexpr double kDefaultResidualTol = 1e-3;
constexpr double kJRelTol = 1e-9;
constexpr double kIdentityTol = 1e-10;
constexpr int kVerifyBuffer = 1;

nlohmann::json verification_block(double residual, bool boundary_pass) {
  double tol = kDefaultResidualTol;
  if (std::isfinite(residual)) tol = std::max(tol, 10 * residual);
  return {{"residual_tolerance", tol},
          {"residual_buffer", kVerifyBuffer},
          {"J_rel_tol", kJRelTol},
          {"identity_tol", kIdentityTol},
          {"check_boundary", boundary_pass}};
}

nlohmann::json envelope(nlohmann::json problem, nlohmann::json options, const Profile& f) {
  return {{"version", kResultVersion},
          {"problem", std::move(problem)},
          {"options", std::move(options)},
          {"profile", to_json(f)}};
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

void check_version(const nlohmann::json& r) {
  if (!r.is_object() || !r.contains("version") || !r.at("version").is_string()) {
    throw SchemaError("result has no version field");
  }
  std::string v = r.at("version").get<std::string>();
  std::string major = v.substr(0, v.find('.'));
  if (major != "1") throw SchemaError("unsupported result version " + v);
  for (const char* key : {"problem", "profile"}) {
    if (!r.contains(key)) throw SchemaError(std::string("result lacks '") + key + "'");
  }
}

}  // namespace

nlohmann::json make_result(const JoinProblem& p, const SolveOptions& o, const SolveResult& r) {
  auto j = envelope(to_json(p), to_json(o), r.profile);
  j["report"] = to_json(r.report);
  double res = grid_residual_sup(p, r.profile, kVerifyBuffer);
  j["verification"] = verification_block(res, r.report.boundary.pass());
  return j;
}

nlohmann::json make_result(const SuspensionProblem& p, const SolveOptions& o, const SolveResult& r) {
  auto j = envelope(to_json(p), to_json(o), r.profile);
  j["report"] = to_json(r.report);
  double res = grid_residual_sup(p, r.profile, kVerifyBuffer);
  j["verification"] = verification_block(res, r.report.boundary.pass());
  return j;
}

nlohmann::json make_result(const JoinProblem& p, const Profile& f) {
  auto j = envelope(to_json(p), nlohmann::json::object(), f);
  double res = grid_residual_sup(p, f, kVerifyBuffer);
  j["verification"] = verification_block(res, boundary_report(p, f).pass());
  return j;
}

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

std::string VerifyReport::first_failure() const {
  for (auto& c : checks) {
    if (!c.pass) return c.name;
  }
  return "";
}

VerifyReport verify_result(const nlohmann::json& r) {
  check_version(r);
  VerifyReport out;
  const auto& pj = r.at("problem");
  const bool suspension = pj.value("kind", std::string("join")) == "suspension";
  Profile f;
  try {
    f = profile_from_json(r.at("profile"));
  } catch (const std::exception& e) {
    throw SchemaError(std::string("profile: ") + e.what());
  }
  if (f.suspension() != suspension) throw SchemaError("profile domain does not match the problem kind");
  nlohmann::json ver = r.value("verification", nlohmann::json::object());
  const double res_tol = ver.value("residual_tolerance", kDefaultResidualTol);
  const int buffer = ver.value("residual_buffer", kVerifyBuffer);
  const double j_tol = ver.value("J_rel_tol", kJRelTol);
  const double id_tol = ver.value("identity_tol", kIdentityTol);
  const bool want_boundary = ver.value("check_boundary", true);

  double res, J, F;
  bool boundary_ok;
  std::string boundary_note;
  if (suspension) {
    auto p = suspension_problem_from_json(pj);
    res = grid_residual_sup(p, f, buffer);
    J = evaluate_J_suspension(p.m1, p.l1, p.u1, f).value;
    F = ym_energy_from_F_suspension(p.m1, p.l1, p.u1, f).value;
    auto b = boundary_report_suspension(f);
    boundary_ok = b.values_pass;
    boundary_note = to_json(b).dump();
  } else {
    auto p = join_problem_from_json(pj);
    res = grid_residual_sup(p, f, buffer);
    J = evaluate_J(p, f).value;
    F = ym_energy_from_F(p, f).value;
    auto b = boundary_report(p, f);
    boundary_ok = b.pass();
    boundary_note = to_json(b).dump();
  }
  out.checks.push_back({"residual", std::isfinite(res) && res <= res_tol, res, res_tol, ""});
  if (r.contains("report") && r.at("report").contains("J") && r.at("report").at("J").is_number()) {
    double stored = r.at("report").at("J").get<double>();
    double d = rel_diff(J, stored);
    out.checks.push_back({"energy", d <= j_tol, d, j_tol, "stored J " + std::to_string(stored)});
  }
  if (want_boundary) out.checks.push_back({"boundary", boundary_ok, 0, 0, boundary_note});
  if (std::isfinite(J)) {
    double d = rel_diff(F, 2 * J);
    out.checks.push_back({"energy_identity", d <= id_tol, d, id_tol, ""});
  }
  return out;
}

nlohmann::json to_json(const VerifyReport& v) {
  nlohmann::json checks = nlohmann::json::array();
  for (auto& c : v.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance}});
  }
  return {{"pass", v.pass()}, {"checks", checks}};
}

namespace {

struct Canvas {
  double w = 720, h = 420, left = 60, right = 20, top = 30, bottom = 40;
  double x0, x1, y0, y1;
  double px(double x) const { return left + (x - x0) / (x1 - x0) * (w - left - right); }
  double py(double y) const { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string polyline(const Canvas& c, const std::vector<double>& x, const std::vector<double>& y,
                     const std::string& color, bool dashed) {
  std::string s = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"";
  if (dashed) s += " stroke-dasharray=\"6,4\"";
  s += " points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(y[i])) continue;
    double yy = std::clamp(y[i], c.y0, c.y1);
    s += fmt(c.px(x[i])) + "," + fmt(c.py(yy)) + " ";
  }
  s += "\"/>\n";
  return s;
}

}  // namespace

std::string render_svg(const nlohmann::json& r) {
  check_version(r);
  const auto& pj = r.at("problem");
  const bool suspension = pj.value("kind", std::string("join")) == "suspension";
  Profile f = profile_from_json(r.at("profile"));
  const Grid& g = f.grid;
  const int n = g.size();
  const int stride = std::max(1, n / 400);

  std::vector<int> idx;
  for (int i = 0; i < n; i += stride) idx.push_back(i);
  if (idx.back() != n - 1) idx.push_back(n - 1);

  std::vector<double> t, a, b, ref_a, ref_b, fn;
  std::vector<double> d1, d2;
  grid_derivatives(g, f.alpha, d1, d2);
  JoinProblem jp;
  SuspensionProblem sp;
  if (suspension) sp = suspension_problem_from_json(pj);
  else jp = join_problem_from_json(pj);
  for (int i : idx) {
    double ti = g.t(i);
    t.push_back(ti);
    a.push_back(f.alpha[i]);
    ref_a.push_back(std::sin(ti));
    if (!suspension) {
      b.push_back(f.beta[i]);
      ref_b.push_back(std::cos(ti));
    }
    double v = NAN;
    if (i > 0 && i + 1 < n) {
      if (suspension) {
        const Metric& m = g.node(i);
        double ap = d1[i] * std::exp(-m.log_jac) * std::exp(-m.log_cos);
        double q = (f.alpha[i] * f.alpha[i] - 1) * std::exp(-2 * m.log_cos);
        v = 4 * sp.l1 * ap * ap + 2 * sp.l1 * sp.u1 * q * q;
      } else {
        v = pointwise_F_norm(jp, f, ti);
      }
    }
    fn.push_back(v);
  }
  double fmax = 0;
  for (double v : fn) {
    if (std::isfinite(v)) fmax = std::max(fmax, v);
  }
  // |F|^2 is drawn rescaled to the profile axis.
  std::vector<double> fs(fn.size());
  for (std::size_t k = 0; k < fn.size(); ++k) fs[k] = fmax > 0 ? fn[k] / fmax : fn[k];

  Canvas c;
  c.x0 = suspension ? -std::numbers::pi / 2 : 0.0;
  c.x1 = std::numbers::pi / 2;
  c.y0 = suspension ? -1.1 : -0.05;
  c.y1 = 1.1;

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(c.w) + "\" height=\"" + fmt(c.h) +
       "\" viewBox=\"0 0 " + fmt(c.w) + " " + fmt(c.h) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<g stroke=\"#999\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + fmt(c.px(c.x0)) + "\" y1=\"" + fmt(c.py(0)) + "\" x2=\"" + fmt(c.px(c.x1)) + "\" y2=\"" +
       fmt(c.py(0)) + "\"/>\n";
  s += "<line x1=\"" + fmt(c.px(c.x0)) + "\" y1=\"" + fmt(c.py(c.y0)) + "\" x2=\"" + fmt(c.px(c.x0)) +
       "\" y2=\"" + fmt(c.py(c.y1)) + "\"/>\n";
  s += "</g>\n";
  s += "<g font-family=\"monospace\" font-size=\"12\">\n";
  s += "<text x=\"" + fmt(c.px(c.x0)) + "\" y=\"" + fmt(c.h - 12) + "\">" + fmt(c.x0) + "</text>\n";
  s += "<text x=\"" + fmt(c.px(c.x1) - 30) + "\" y=\"" + fmt(c.h - 12) + "\">" + fmt(c.x1) + "</text>\n";
  s += "<text x=\"" + fmt(c.px(0.5 * (c.x0 + c.x1))) + "\" y=\"" + fmt(c.h - 12) + "\">t</text>\n";
  s += "<text x=\"8\" y=\"" + fmt(c.py(1)) + "\">1</text>\n";
  std::string legend = suspension ? "alpha (solid), sin t (dashed), |F|^2/" + fmt(fmax) + " (grey)"
                                  : "alpha, beta (solid), sin t, cos t (dashed), |F|^2/" + fmt(fmax) + " (grey)";
  s += "<text x=\"" + fmt(c.left) + "\" y=\"18\">" + legend + "</text>\n";
  s += "</g>\n";
  s += polyline(c, t, ref_a, "#1f77b4", true);
  if (!suspension) s += polyline(c, t, ref_b, "#d62728", true);
  s += polyline(c, t, a, "#1f77b4", false);
  if (!suspension) s += polyline(c, t, b, "#d62728", false);
  s += polyline(c, t, fs, "#7f7f7f", false);
  s += "</svg>\n";
  return s;
}

}  // namespace ymjoin
