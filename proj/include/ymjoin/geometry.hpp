#pragma once

#include <array>
#include <iosfwd>

#include "ymjoin/functional.hpp"
#include "ymjoin/problem.hpp"
#include "ymjoin/profile.hpp"

namespace ymjoin {

/// Values and t-derivatives of a profile at an interior t (3-point Lagrange
/// interpolation in the native coordinate around the nearest node).
struct ProfileSample {
  double t = 0;
  double a = 0, ap = 0, b = 0, bp = 0;
  double log_cos = 0, log_sin = 0;
};
ProfileSample sample_profile(const Profile& f, double t);

/// Signed amplitudes in the order F_uv, F_wz, F_xu, F_xw, F_uw and the weights
/// that turn their squares into |F|^2.
struct CurvatureComponents {
  std::array<double, 5> amplitude{};
  std::array<double, 5> weight{};
  double norm() const;
};

CurvatureComponents curvature_components(const JoinCoefficients& c, const ProfileSample& s);
CurvatureComponents curvature_components(const JoinProblem& p, const Profile& f, double t);
double pointwise_F_norm(const JoinProblem& p, const Profile& f, double t);
double pointwise_F_norm(const JoinCoefficients& c, const ProfileSample& s);

/// Integral of |F|^2 against cos^m1 sin^m2 dt, sampled at the same staggered
/// locations as evaluate_J.
EnergyReport ym_energy_from_F(const JoinProblem& p, const Profile& f);
EnergyReport ym_energy_from_F_suspension(double m1, double lambda1, double mu1, const Profile& f);

/// (|omega|^2, |nabla omega|^2) for D = nabla + omega relative to Levi-Civita.
std::array<double, 2> omega_norms(const JoinCoefficients& c, const ProfileSample& s);
std::array<double, 2> omega_norms(const JoinProblem& p, const Profile& f, double t);

struct CoercivityAudit {
  double lhs = 0;       // integral of |omega|^4 + |nabla omega|^2
  double energy = 0;    // J
  double constant = 0;  // lhs / (1 + J)
};
CoercivityAudit coercivity_audit(const JoinProblem& p, const Profile& f);

/// CSV rows t, five amplitudes, |F|^2 at interior nodes.
void write_component_trace(std::ostream& os, const JoinProblem& p, const Profile& f);

}  // namespace ymjoin
