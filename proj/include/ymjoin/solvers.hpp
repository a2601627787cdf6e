#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ymjoin/functional.hpp"
#include "ymjoin/ode.hpp"
#include "ymjoin/problem.hpp"
#include "ymjoin/profile.hpp"

namespace ymjoin {

enum class Method { Minimize, Shoot };
enum class SeedProfile { LeviCivita, Constant01, Constant10, Custom };
enum class Classification { NonconstantJoin, Constant01, Constant10, Constant00, SuspensionNodal };

std::string method_name(Method m);
Method parse_method(const std::string& s);
std::string seed_name(SeedProfile s);
SeedProfile parse_seed(const std::string& s);
std::string classification_name(Classification c, int nodal = -1);

inline constexpr int kEndpointBuffer = 5;

struct SolveOptions {
  Method method = Method::Minimize;
  GridSpec grid;
  int max_iterations = 200;
  double gradient_tolerance = 1e-14;  // relative drop of |J| per step treated as stagnation
  double residual_tolerance = 1e-6;
  std::array<double, 2> shooting_box{1e-9, 50.0};
  SeedProfile seed = SeedProfile::LeviCivita;
  std::optional<Profile> custom_seed;
  double seed_perturbation = 0.0;
  std::uint64_t rng_seed = 1;
  // join shooting: amplitudes (a-, b-, a+, b+) of the admissible modes
  std::array<double, 4> shooting_seed{1.0, 0.5, 0.5, 1.0};
  double shooting_tolerance = 1e-10;
  double initial_half_length = 12.0;
  double max_half_length = 40.0;
};

struct SolveReport {
  bool converged = false;
  double J = 0;
  EnergyReport energy;
  double el_residual_sup = 0;    // method-native residual (discrete EL system or matching defect)
  double grid_residual_sup = 0;  // finite-difference ODE residual of the returned profile
  BoundaryReport boundary;
  int iterations = 0;
  Classification classification = Classification::NonconstantJoin;
  int nodal_index = -1;
  double interior_min = 0, interior_max = 0;
  std::vector<double> J_history;
  nlohmann::json details = nlohmann::json::object();
  std::string message;
};

struct SolveResult {
  Profile profile;
  SolveReport report;
};

/// Thrown by solvers when the requested branch or solution is absent.
struct BranchNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SolveResult minimize_join(const JoinProblem& p, const SolveOptions& opts);
SolveResult minimize_join_beta0_constrained(const JoinProblem& p, const SolveOptions& opts);
SolveResult shoot_join(const JoinProblem& p, const SolveOptions& opts);
/// Dispatch on opts.method; problems with m2 = 1 go to the constrained minimizer.
SolveResult solve_join(const JoinProblem& p, const SolveOptions& opts);

struct ConstantSolutions {
  EnergyReport j00, j01, j10;
  std::optional<bool> j00_above_j01, j00_above_j10;
  bool degenerate = false;
};
ConstantSolutions classify_constant_solutions(const JoinProblem& p, const GridSpec& grid = {});

/// Which constant (if any) a join profile sits on, judged on interior nodes.
std::optional<Classification> constant_class(const Profile& f, double tol = 1e-3);

Profile seed_profile(const Grid& g, const SolveOptions& opts);

// Suspensions ---------------------------------------------------------------

struct SuspensionBranch {
  int nodal_index = 0;
  double p = 0;        // shooting slope A'(0) > 0 before reflection
  int end_sign = 1;    // limit of the unreflected trajectory at +infinity
  double slope = 0;    // alpha'(0) of the returned profile, = end_sign * p
};

/// All sign flips of the escape direction within the shooting box, bisected.
std::vector<SuspensionBranch> scan_suspension_branches(const SuspensionProblem& p,
                                                       const SolveOptions& opts);
SolveResult solve_suspension(const SuspensionProblem& p, int nodal_index, const SolveOptions& opts);

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const SolveOptions& o);
SolveOptions solve_options_from_json(const nlohmann::json& j);

}  // namespace ymjoin
