#pragma once

#include <array>
#include <vector>

namespace ymjoin {

/// Discrete weights of the staggered scheme. Cell weights already include the
/// 1/dx of the difference quotient, node weights the trapezoid factor.
/// Empty beta-side vectors mean a single-component (suspension) functional.
struct DiscreteWeights {
  std::vector<double> ka, kb;          // per cell
  std::vector<double> q3, q4, q5;      // per node: a^2 b^2, (a^2-1)^2, (b^2-1)^2

  int nodes() const { return static_cast<int>(q4.size()); }
  bool single() const { return kb.empty(); }
};

/// Terms in the order [kinetic a, kinetic b, coupling, potential a, potential b].
using EnergyTerms = std::array<double, 5>;

/// Tridiagonal blocks of the Hessian over all nodes.
struct HessianBands {
  std::vector<double> aa, bb, ab;      // diagonal entries and the a_i-b_i coupling
  std::vector<double> aa_off, bb_off;  // (i, i+1)
};

inline constexpr int kReductionBlock = 256;

/// OpenMP kernels. Reductions are blocked with a fixed block size and combined
/// serially, so the result does not depend on the thread count.
EnergyTerms energy_terms(const DiscreteWeights& w, const std::vector<double>& a,
                         const std::vector<double>& b);
void gradient(const DiscreteWeights& w, const std::vector<double>& a, const std::vector<double>& b,
              std::vector<double>& ga, std::vector<double>& gb);
void hessian(const DiscreteWeights& w, const std::vector<double>& a, const std::vector<double>& b,
             HessianBands& h);

/// Plain serial loops, kept as the test oracle for the kernels above.
namespace reference {
EnergyTerms energy_terms(const DiscreteWeights& w, const std::vector<double>& a,
                         const std::vector<double>& b);
void gradient(const DiscreteWeights& w, const std::vector<double>& a, const std::vector<double>& b,
              std::vector<double>& ga, std::vector<double>& gb);
void hessian(const DiscreteWeights& w, const std::vector<double>& a, const std::vector<double>& b,
             HessianBands& h);
}  // namespace reference

}  // namespace ymjoin
