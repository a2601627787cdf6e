#include "ymjoin/profile.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ymjoin {

bool Profile::finite() const {
  for (double v : alpha) {
    if (!std::isfinite(v)) return false;
  }
  for (double v : beta) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Profile levi_civita_profile(const Grid& g) {
  Profile f;
  f.grid = g;
  const int n = g.size();
  f.alpha.resize(n);
  if (f.suspension()) {
    f.boundary_alpha = {-1.0, 1.0};
    for (int i = 0; i < n; ++i) f.alpha[i] = std::sin(g.t(i));
    return f;
  }
  f.beta.resize(n);
  for (int i = 0; i < n; ++i) {
    // exp(log sin) keeps full relative accuracy deep in the tails
    f.alpha[i] = std::exp(g.node(i).log_sin);
    f.beta[i] = std::exp(g.node(i).log_cos);
  }
  return f;
}

Profile constant_profile(const Grid& g, double a, double b) {
  Profile f;
  f.grid = g;
  f.alpha.assign(g.size(), a);
  if (f.suspension()) {
    f.boundary_alpha = {-1.0, 1.0};
  } else {
    f.beta.assign(g.size(), b);
  }
  return f;
}

Profile from_function(const Grid& g, double (*alpha)(double), double (*beta)(double)) {
  Profile f;
  f.grid = g;
  for (int i = 0; i < g.size(); ++i) {
    f.alpha.push_back(alpha(g.t(i)));
    if (beta) f.beta.push_back(beta(g.t(i)));
  }
  if (f.suspension()) f.boundary_alpha = {-1.0, 1.0};
  return f;
}

nlohmann::json to_json(const Profile& f) {
  nlohmann::json j;
  j["scheme"] = scheme_name(f.grid.spec().scheme);
  j["grid"] = to_json(f.grid.spec());
  j["nodes"] = f.grid.t_values();
  j["native"] = f.grid.native_values();
  j["alpha"] = f.alpha;
  if (!f.suspension()) j["beta"] = f.beta;
  j["boundary"] = {{"alpha", f.boundary_alpha}, {"pinned_ends", f.pinned_ends}};
  if (!f.suspension()) j["boundary"]["beta"] = f.boundary_beta;
  return j;
}

Profile profile_from_json(const nlohmann::json& j) {
  GridSpec spec = j.contains("grid") ? grid_spec_from_json(j.at("grid")) : GridSpec{};
  if (!j.contains("grid")) spec.scheme = parse_scheme(j.at("scheme").get<std::string>());
  Profile f;
  if (j.contains("native")) {
    f.grid = Grid(spec, j.at("native").get<std::vector<double>>());
  } else {
    // only t nodes stored: rebuild native coordinates from them
    auto t = j.at("nodes").get<std::vector<double>>();
    spec.nodes = static_cast<int>(t.size());
    Grid probe(spec);
    std::vector<double> native;
    for (double ti : t) native.push_back(probe.native_of_t(ti));
    f.grid = Grid(spec, native);
  }
  f.alpha = j.at("alpha").get<std::vector<double>>();
  if (j.contains("beta")) f.beta = j.at("beta").get<std::vector<double>>();
  if (f.alpha.size() != static_cast<std::size_t>(f.grid.size()) ||
      (!f.suspension() && f.beta.size() != f.alpha.size())) {
    throw std::invalid_argument("profile arrays do not match the grid");
  }
  if (f.suspension()) f.boundary_alpha = {-1.0, 1.0};
  if (j.contains("boundary")) {
    const auto& b = j.at("boundary");
    if (b.contains("alpha")) f.boundary_alpha = b.at("alpha").get<std::array<double, 2>>();
    if (b.contains("beta")) f.boundary_beta = b.at("beta").get<std::array<double, 2>>();
    f.pinned_ends = b.value("pinned_ends", false);
  }
  return f;
}

void write_csv(std::ostream& os, const Profile& f) {
  os << (f.suspension() ? "t,alpha\n" : "t,alpha,beta\n");
  char buf[128];
  for (int i = 0; i < f.size(); ++i) {
    if (f.suspension()) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.grid.t(i), f.alpha[i]);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.grid.t(i), f.alpha[i], f.beta[i]);
    }
    os << buf;
  }
}

}  // namespace ymjoin
