#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ymjoin {

enum class Scheme { UniformT, UniformS, ChebyshevT };
enum class Domain { Join, Suspension };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct GridSpec {
  Scheme scheme = Scheme::UniformS;
  int nodes = 2048;
  double half_length = 12.0;  // S for UniformS
  double epsilon = 1e-4;      // endpoint offset for the t-based schemes
  Domain domain = Domain::Join;
};

/// Log-space metric of the warped product at one point.
/// Join: log_cos = log cos t, log_sin = log sin t.
/// Suspension: log_cos = log cos t and log_sin is unused (sin t may be negative).
/// log_jac = log dt/dx for the native coordinate x.
struct Metric {
  double x = 0;
  double t = 0;
  double log_cos = 0;
  double log_sin = 0;
  double log_jac = 0;
};

class Grid {
 public:
  Grid() = default;
  explicit Grid(const GridSpec& spec);
  /// Rebuilds a grid from stored native coordinates (results files).
  Grid(const GridSpec& spec, std::vector<double> native);

  const GridSpec& spec() const { return spec_; }
  int size() const { return static_cast<int>(node_.size()); }
  int cells() const { return size() - 1; }

  const Metric& node(int i) const { return node_[i]; }
  const Metric& cell(int c) const { return cell_[c]; }
  double dx(int c) const { return node_[c + 1].x - node_[c].x; }
  double t(int i) const { return node_[i].t; }
  double x(int i) const { return node_[i].x; }
  std::vector<double> t_values() const;
  std::vector<double> native_values() const;

  /// Composite trapezoid weights in the native coordinate.
  const std::vector<double>& trapezoid() const { return omega_; }

  /// Metric at an arbitrary native coordinate.
  Metric metric_at(double x) const;
  double native_of_t(double t) const;

  /// Nodes mirror about the midpoint (pi/4 for joins, 0 for suspensions).
  bool symmetric(double tol = 1e-12) const;

  double t_min() const;
  double t_max() const;

 private:
  void build(std::vector<double> native);

  GridSpec spec_;
  std::vector<Metric> node_;
  std::vector<Metric> cell_;
  std::vector<double> omega_;
};

/// Join log coordinate.
double log_cos_of_s(double s);
double log_sin_of_s(double s);

nlohmann::json to_json(const GridSpec& g);
GridSpec grid_spec_from_json(const nlohmann::json& j);

}  // namespace ymjoin
