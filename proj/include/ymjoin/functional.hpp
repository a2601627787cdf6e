#pragma once

#include <array>
#include <vector>

#include "ymjoin/kernels.hpp"
#include "ymjoin/problem.hpp"
#include "ymjoin/profile.hpp"

namespace ymjoin {

inline constexpr double kDivergenceBound = 1e12;

struct EnergyReport {
  double value = 0;       // quadrature + tails; +inf when infinite
  double quadrature = 0;  // the discretized functional that solvers minimize
  EnergyTerms terms{};    // quadrature per term
  std::array<double, 5> tail_left{};
  std::array<double, 5> tail_right{};
  bool infinite = false;
  int divergent_term = -1;

  double tails() const;
};

DiscreteWeights join_weights(const JoinCoefficients& c, const Grid& g);
DiscreteWeights suspension_weights(double m1, double lambda1, double mu1, const Grid& g);

EnergyReport evaluate_J(const JoinProblem& p, const Profile& f);
EnergyReport evaluate_J_suspension(double m1, double lambda1, double mu1, const Profile& f);

/// Gradient of the discretized J over interior nodes; end entries are zero.
void discrete_gradient(const JoinProblem& p, const Profile& f, std::vector<double>& ga,
                       std::vector<double>& gb);

/// Node kinetic weight in the native coordinate (no 1/dx, no trapezoid factor),
/// used to normalize gradients into Euler-Lagrange residuals.
std::vector<double> kinetic_node_weight(const JoinCoefficients& c, const Grid& g, int component);
std::vector<double> suspension_kinetic_node_weight(double lambda1, double m1, const Grid& g);

/// Discrete Euler-Lagrange residual -g_i / (2 omega_i K(x_i)) on interior nodes;
/// for uniform native grids it approximates the ODE residual in that coordinate.
void discrete_el_residual(const DiscreteWeights& w, const Grid& g, const std::vector<double>& ka,
                          const std::vector<double>& kb, const std::vector<double>& a,
                          const std::vector<double>& b, std::vector<double>& ra,
                          std::vector<double>& rb);
double sup_interior(const std::vector<double>& r, int buffer);

double second_variation_at_0_1(const JoinProblem& p, const Grid& g, const std::vector<double>& phi,
                               const std::vector<double>& psi);
/// Discretized H(phi) consistent with second_variation_at_0_1.
double h_form_value(const JoinProblem& p, const Grid& g, const std::vector<double>& phi);
double h_form_mass(const JoinProblem& p, const Grid& g, const std::vector<double>& phi);
double h_form_min_eig(const JoinProblem& p, const Grid& g);

double truncate_value(double v);
Profile truncate_profile(const Profile& f);
Profile symmetrize_profile(const Profile& f);

}  // namespace ymjoin
