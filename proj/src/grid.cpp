#include "ymjoin/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ymjoin {

namespace {

constexpr double kPi = std::numbers::pi;

double log_cosh(double s) {
  double a = std::abs(s);
  return a + std::log1p(std::exp(-2 * a)) - std::numbers::ln2;
}

// Chebyshev-type clustering: t = c - r cos(theta), theta in [0, pi].
double cheb_center(Domain d) { return d == Domain::Join ? kPi / 4 : 0.0; }

}  // namespace

double log_cos_of_s(double s) {
  // -1/2 log(1 + e^{2s}) without overflow
  return s > 0 ? -s - 0.5 * std::log1p(std::exp(-2 * s)) : -0.5 * std::log1p(std::exp(2 * s));
}

double log_sin_of_s(double s) { return s + log_cos_of_s(s); }

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::UniformT: return "uniform_t";
    case Scheme::UniformS: return "uniform_s";
    case Scheme::ChebyshevT: return "chebyshev_t";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "uniform_t") return Scheme::UniformT;
  if (name == "uniform_s") return Scheme::UniformS;
  if (name == "chebyshev_t") return Scheme::ChebyshevT;
  throw std::invalid_argument("unknown grid scheme '" + name + "'");
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  if (spec.nodes < 16) throw std::invalid_argument("grid needs at least 16 nodes");
  const int n = spec.nodes;
  const bool join = spec.domain == Domain::Join;
  std::vector<double> native(n);
  double lo = 0, hi = 0;
  switch (spec.scheme) {
    case Scheme::UniformS:
      if (!(spec.half_length > 0)) throw std::invalid_argument("grid half length must be positive");
      lo = -spec.half_length;
      hi = spec.half_length;
      break;
    case Scheme::UniformT: {
      double half = join ? kPi / 4 : kPi / 2;
      if (!(spec.epsilon > 0) || spec.epsilon >= half) {
        throw std::invalid_argument("grid epsilon out of range");
      }
      lo = cheb_center(spec.domain) - half + spec.epsilon;
      hi = cheb_center(spec.domain) + half - spec.epsilon;
      break;
    }
    case Scheme::ChebyshevT:
      if (!(spec.epsilon > 0)) throw std::invalid_argument("grid epsilon out of range");
      lo = 0;
      hi = kPi;
      break;
  }
  for (int i = 0; i < n; ++i) {
    native[i] = lo + (hi - lo) * i / (n - 1);
  }
  native[n - 1] = hi;
  build(std::move(native));
}

Grid::Grid(const GridSpec& spec, std::vector<double> native) : spec_(spec) {
  if (native.size() < 16) throw std::invalid_argument("grid needs at least 16 nodes");
  for (std::size_t i = 1; i < native.size(); ++i) {
    if (!(native[i] > native[i - 1])) {
      throw std::invalid_argument("grid nodes must be strictly increasing");
    }
  }
  spec_.nodes = static_cast<int>(native.size());
  if (spec_.scheme == Scheme::UniformS) spec_.half_length = std::max(-native.front(), native.back());
  build(std::move(native));
}

Metric Grid::metric_at(double x) const {
  Metric m;
  m.x = x;
  const bool join = spec_.domain == Domain::Join;
  switch (spec_.scheme) {
    case Scheme::UniformS:
      if (join) {
        m.t = std::atan(std::exp(x));
        m.log_cos = log_cos_of_s(x);
        m.log_sin = x + m.log_cos;
        m.log_jac = m.log_cos + m.log_sin;
      } else {
        m.t = std::asin(std::tanh(x));
        m.log_cos = -log_cosh(x);
        m.log_sin = std::log(std::abs(std::tanh(x)));
        m.log_jac = m.log_cos;
      }
      break;
    case Scheme::UniformT:
      m.t = x;
      m.log_cos = std::log(std::cos(x));
      m.log_sin = std::log(std::abs(std::sin(x)));
      m.log_jac = 0;
      break;
    case Scheme::ChebyshevT: {
      double r = (join ? kPi / 4 : kPi / 2) - spec_.epsilon;
      m.t = cheb_center(spec_.domain) - r * std::cos(x);
      m.log_cos = std::log(std::cos(m.t));
      m.log_sin = std::log(std::abs(std::sin(m.t)));
      m.log_jac = std::log(r * std::sin(x));
      break;
    }
  }
  return m;
}

double Grid::native_of_t(double t) const {
  const bool join = spec_.domain == Domain::Join;
  switch (spec_.scheme) {
    case Scheme::UniformS: return join ? std::log(std::tan(t)) : std::atanh(std::sin(t));
    case Scheme::UniformT: return t;
    case Scheme::ChebyshevT: {
      double r = (join ? kPi / 4 : kPi / 2) - spec_.epsilon;
      return std::acos((cheb_center(spec_.domain) - t) / r);
    }
  }
  return t;
}

void Grid::build(std::vector<double> native) {
  const int n = static_cast<int>(native.size());
  node_.resize(n);
  cell_.resize(n - 1);
  omega_.assign(n, 0.0);
  for (int i = 0; i < n; ++i) node_[i] = metric_at(native[i]);
  for (int c = 0; c < n - 1; ++c) {
    cell_[c] = metric_at(0.5 * (native[c] + native[c + 1]));
    double h = native[c + 1] - native[c];
    omega_[c] += 0.5 * h;
    omega_[c + 1] += 0.5 * h;
  }
  // At the Chebyshev end nodes dt/dtheta vanishes exactly.
  if (spec_.scheme == Scheme::ChebyshevT) {
    node_.front().log_jac = -INFINITY;
    node_.back().log_jac = -INFINITY;
  }
}

std::vector<double> Grid::t_values() const {
  std::vector<double> out(node_.size());
  for (std::size_t i = 0; i < node_.size(); ++i) out[i] = node_[i].t;
  return out;
}

std::vector<double> Grid::native_values() const {
  std::vector<double> out(node_.size());
  for (std::size_t i = 0; i < node_.size(); ++i) out[i] = node_[i].x;
  return out;
}

bool Grid::symmetric(double tol) const {
  const double mid = cheb_center(spec_.domain) * 2;
  const int n = size();
  for (int i = 0; i < n; ++i) {
    if (std::abs(node_[i].t + node_[n - 1 - i].t - mid) > tol) return false;
  }
  return true;
}

double Grid::t_min() const { return node_.front().t; }
double Grid::t_max() const { return node_.back().t; }

nlohmann::json to_json(const GridSpec& g) {
  return {{"scheme", scheme_name(g.scheme)},
          {"nodes", g.nodes},
          {"half_length", g.half_length},
          {"epsilon", g.epsilon},
          {"domain", g.domain == Domain::Join ? "join" : "suspension"}};
}

GridSpec grid_spec_from_json(const nlohmann::json& j) {
  GridSpec g;
  g.scheme = parse_scheme(j.at("scheme").get<std::string>());
  g.nodes = j.value("nodes", g.nodes);
  g.half_length = j.value("half_length", g.half_length);
  g.epsilon = j.value("epsilon", g.epsilon);
  g.domain = j.value("domain", std::string("join")) == "suspension" ? Domain::Suspension : Domain::Join;
  return g;
}

}  // namespace ymjoin
