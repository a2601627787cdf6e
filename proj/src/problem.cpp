#include "ymjoin/problem.hpp"

namespace ymjoin {

JoinProblem make_join(const Eigenmap& e1, const Eigenmap& e2) {
  JoinProblem p{e1, e2, {}};
  p.coeffs = {double(e1.m), double(e2.m), e1.lambda_value(), e2.lambda_value(), e1.mu_value(),
              e2.mu_value()};
  return p;
}

JoinProblem make_join(const JoinCoefficients& c) {
  auto placeholder = [](double m, double l, double u) {
    Eigenmap e;
    e.family = Family::Custom;
    e.m = int(m);
    e.n = int(m);
    e.lambda = Rational(l);
    e.mu = Rational(u);
    return e;
  };
  return {placeholder(c.m1, c.l1, c.u1), placeholder(c.m2, c.l2, c.u2), c};
}

SuspensionProblem make_suspension(const Eigenmap& e) {
  return {e, double(e.m), e.lambda_value(), e.mu_value()};
}

SuspensionProblem make_suspension(int m1, double lambda1, double mu1) {
  Eigenmap e;
  e.family = Family::Custom;
  e.m = m1;
  e.n = m1;
  e.lambda = Rational(lambda1);
  e.mu = Rational(mu1);
  return {e, double(m1), lambda1, mu1};
}

nlohmann::json to_json(const JoinProblem& p) {
  const auto& c = p.coeffs;
  return {{"kind", "join"},
          {"eig1", to_json(p.eig1)},
          {"eig2", to_json(p.eig2)},
          {"coefficients",
           {{"m1", c.m1}, {"m2", c.m2}, {"lambda1", c.l1}, {"lambda2", c.l2}, {"mu1", c.u1},
            {"mu2", c.u2}}}};
}

nlohmann::json to_json(const SuspensionProblem& p) {
  return {{"kind", "suspension"},
          {"eig", to_json(p.eig)},
          {"coefficients", {{"m1", p.m1}, {"lambda1", p.l1}, {"mu1", p.u1}}}};
}

JoinProblem join_problem_from_json(const nlohmann::json& j) {
  JoinProblem p;
  p.eig1 = eigenmap_from_json(j.at("eig1"));
  p.eig2 = eigenmap_from_json(j.at("eig2"));
  const auto& c = j.at("coefficients");
  p.coeffs = {c.at("m1").get<double>(),      c.at("m2").get<double>(),
              c.at("lambda1").get<double>(), c.at("lambda2").get<double>(),
              c.at("mu1").get<double>(),     c.at("mu2").get<double>()};
  return p;
}

SuspensionProblem suspension_problem_from_json(const nlohmann::json& j) {
  SuspensionProblem p;
  p.eig = eigenmap_from_json(j.at("eig"));
  const auto& c = j.at("coefficients");
  p.m1 = c.at("m1").get<double>();
  p.l1 = c.at("lambda1").get<double>();
  p.u1 = c.at("mu1").get<double>();
  return p;
}

}  // namespace ymjoin
