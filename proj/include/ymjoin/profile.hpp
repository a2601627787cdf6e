#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ymjoin/grid.hpp"

namespace ymjoin {

/// Discretized (alpha, beta) on a grid. Suspension profiles carry only alpha.
struct Profile {
  Grid grid;
  std::vector<double> alpha;
  std::vector<double> beta;
  // intended limits at (left end, right end) in t
  std::array<double, 2> boundary_alpha{0.0, 1.0};
  std::array<double, 2> boundary_beta{1.0, 0.0};
  // end nodes hold the boundary values rather than samples of a solution
  bool pinned_ends = false;

  int size() const { return grid.size(); }
  bool suspension() const { return grid.spec().domain == Domain::Suspension; }
  bool finite() const;
};

/// (sin t, cos t), or sin t on [-pi/2, pi/2] for a suspension grid.
Profile levi_civita_profile(const Grid& g);
Profile constant_profile(const Grid& g, double a, double b);
Profile from_function(const Grid& g, double (*alpha)(double), double (*beta)(double));

nlohmann::json to_json(const Profile& f);
Profile profile_from_json(const nlohmann::json& j);
void write_csv(std::ostream& os, const Profile& f);

}  // namespace ymjoin
