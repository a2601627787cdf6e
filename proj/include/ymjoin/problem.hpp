#pragma once

#include <json.hpp>

#include "ymjoin/eigenmaps.hpp"

namespace ymjoin {

struct JoinCoefficients {
  double m1 = 2, m2 = 2;
  double l1 = 2, l2 = 2;
  double u1 = 1, u2 = 1;

  /// Mirror (m1, l1, u1) <-> (m2, l2, u2).
  JoinCoefficients swapped() const { return {m2, m1, l2, l1, u2, u1}; }
};

struct JoinProblem {
  Eigenmap eig1;
  Eigenmap eig2;
  JoinCoefficients coeffs;

  bool symmetric() const {
    return coeffs.m1 == coeffs.m2 && coeffs.l1 == coeffs.l2 && coeffs.u1 == coeffs.u2;
  }
};

JoinProblem make_join(const Eigenmap& e1, const Eigenmap& e2);
/// Problem with raw coefficients; eigenmaps are filled with custom placeholders.
JoinProblem make_join(const JoinCoefficients& c);

struct SuspensionProblem {
  Eigenmap eig;
  double m1 = 4, l1 = 4, u1 = 3;
};

SuspensionProblem make_suspension(const Eigenmap& e);
SuspensionProblem make_suspension(int m1, double lambda1, double mu1);

nlohmann::json to_json(const JoinProblem& p);
nlohmann::json to_json(const SuspensionProblem& p);
JoinProblem join_problem_from_json(const nlohmann::json& j);
SuspensionProblem suspension_problem_from_json(const nlohmann::json& j);

}  // namespace ymjoin
