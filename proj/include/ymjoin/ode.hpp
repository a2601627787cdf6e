#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ymjoin/problem.hpp"
#include "ymjoin/profile.hpp"

namespace ymjoin {

enum class Coordinate { T, S };

struct StatePoint {
  Coordinate coordinate = Coordinate::S;
  double x = 0;
  double A = 0, Aprime = 0, B = 0, Bprime = 0;
};

using Residual = std::pair<double, double>;

Residual el_residual_t(const JoinCoefficients& c, double t, double a, double ap, double app,
                       double b, double bp, double bpp);
Residual el_residual_s(const JoinCoefficients& c, double s, double a, double ap, double app,
                       double b, double bp, double bpp);
/// Right-hand side (A'', B'') of the transformed system, for integrators.
Residual join_rhs_s(const JoinCoefficients& c, double s, const StatePoint& y);

double suspension_residual(double m1, double mu1, double t, double a, double ap, double app);
/// Same equation in s = atanh(sin t): A'' - (m1-3) tanh(s) A' - mu1 (A^3 - A).
double suspension_residual_s(double m1, double mu1, double s, double a, double ap, double app);

double to_log_coordinate(double t);
double from_log_coordinate(double s);

/// e^s/(e^s+e^-s) and e^-s/(e^s+e^-s), i.e. sin^2 t and cos^2 t.
double weight_plus(double s);
double weight_minus(double s);

enum class Endpoint { TZero, TPiHalf };

/// Roots of x^2 + b x + c = 0.
struct QuadraticRoots {
  double b = 0, c = 0;
  bool real = true;
  double lo = 0, hi = 0;  // real roots, lo <= hi
  double re = 0, im = 0;  // complex pair re +- i im
  bool has_positive_real_part() const { return real ? hi > 0 : re > 0; }
  double residual(double x) const { return x * x + b * x + c; }
};

QuadraticRoots solve_quadratic(double b, double c);

/// Linearizations at one end of the interval, written in terms of rates that
/// are positive for admissible behavior: near t=0 the quantity behaves like
/// e^{rate s} ~ t^rate, near t=pi/2 like e^{-rate s} ~ (pi/2-t)^rate.
struct IndicialData {
  Endpoint endpoint = Endpoint::TZero;
  QuadraticRoots alpha;      // A near 0 (t=0) or 1-A (t=pi/2)
  QuadraticRoots beta;       // 1-B (t=0) or B (t=pi/2)
  QuadraticRoots ruled_out;  // B -> 0 at t=0, A -> 0 at t=pi/2
  std::optional<double> alpha_rate;
  std::optional<double> beta_rate;
  bool ruled_out_bounded = false;
  std::optional<double> decaying_exponent;  // slowest admissible rate
};

IndicialData indicial_exponents(const JoinCoefficients& c, Endpoint endpoint);

/// Second-order grid derivatives in the native coordinate.
void grid_derivatives(const Grid& g, const std::vector<double>& v, std::vector<double>& d1,
                      std::vector<double>& d2);

/// Pointwise ODE residual of a profile from grid derivatives, in the native
/// coordinate for UniformS and in t otherwise; zero on the outermost nodes.
void grid_residual(const JoinProblem& p, const Profile& f, std::vector<double>& ra,
                   std::vector<double>& rb);
void grid_residual_suspension(const SuspensionProblem& p, const Profile& f, std::vector<double>& r);
double grid_residual_sup(const JoinProblem& p, const Profile& f, int buffer = 5);
double grid_residual_sup(const SuspensionProblem& p, const Profile& f, int buffer = 5);

struct BoundaryCheck {
  std::string name;
  double measured = 0;
  double target = 0;
  double tolerance = 0;
  bool pass = false;
  bool conditional = false;
  double exponent = 0;  // fitted exponent at that end (NaN if no fit)
};

struct ParityCheck {
  std::string name;
  double exponent = 0;
  double defect = 0;
};

struct BoundaryReport {
  std::vector<BoundaryCheck> values;
  std::vector<BoundaryCheck> derivatives;
  std::vector<ParityCheck> parity;
  bool values_pass = false;
  bool derivatives_pass = false;  // unconditional checks only
  bool pass() const { return values_pass && derivatives_pass; }
};

inline constexpr double kBoundaryValueTol = 1e-6;
inline constexpr double kBoundaryDerivativeTol = 1e-3;

/// Fit of v0 + c d^gamma on three nodes near an end, d = distance in t.
struct EndFit {
  double value = 0;
  double coefficient = 0;
  double exponent = 0;
  double derivative = 0;  // d/dt at the end, sign included
  bool ok = false;
};
EndFit fit_end(const Profile& f, const std::vector<double>& v, bool left);

BoundaryReport boundary_report(const JoinProblem& p, const Profile& f);
BoundaryReport boundary_report_suspension(const Profile& f);

nlohmann::json to_json(const BoundaryReport& r);
nlohmann::json to_json(const IndicialData& d);

}  // namespace ymjoin
