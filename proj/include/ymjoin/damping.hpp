#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ymjoin/eigenmaps.hpp"
#include "ymjoin/problem.hpp"

namespace ymjoin {

enum class ConditionSet { D1, D2, Main2, Suspension };
enum class ClauseState { True, False, NotApplicable };

std::string condition_name(ConditionSet c);
std::string clause_state_name(ClauseState s);

struct Clause {
  std::string label;
  std::string expression;
  ClauseState state = ClauseState::False;
  std::vector<std::pair<std::string, double>> quantities;
  double margin = 0;  // NaN for categorical clauses and skipped ones
  bool holds() const { return state == ClauseState::True; }
};

struct DampingReport {
  ConditionSet set = ConditionSet::D1;
  std::vector<Clause> clauses;
  bool satisfied = false;
  double margin = 0;   // +inf when a categorical clause decides
  bool exact = true;   // rational arithmetic; false means the 1e-12 band was used
  // suspension only
  std::optional<bool> existence_minimizer;
  std::optional<bool> countably_many;
};

inline constexpr double kComparisonBand = 1e-12;

/// Exact evaluation from the problem's eigenmaps (rational eigenvalues).
DampingReport check_D1(const JoinProblem& p);
DampingReport check_D2(const JoinProblem& p);
DampingReport check_main2(int m1, const Rational& mu1, int k);
DampingReport check_suspension(int m1, const Rational& mu1);

/// Floating-point overloads with the comparison band.
DampingReport check_D1(const JoinCoefficients& c);
DampingReport check_D2(const JoinCoefficients& c);
DampingReport check_main2(int m1, double mu1, int k);
DampingReport check_suspension(int m1, double mu1);

/// Overall verdict for a join: main2 when one side is a circle, D1 and D2 otherwise.
struct JoinVerdict {
  std::vector<DampingReport> reports;
  bool satisfied = false;
};
JoinVerdict check_join(const JoinProblem& p);

struct FactorRange {
  Family family = Family::Identity;
  int m_lo = 2, m_hi = 2;
  int ell = 1;  // degree for standard immersions and circle powers
};

struct SweepRow {
  Eigenmap eig1, eig2;
  JoinVerdict verdict;
};

/// Rows in canonical order (m1 outer, m2 inner); rows that cannot be built
/// (e.g. overflowing standard immersions) are skipped.
std::vector<SweepRow> sweep(const FactorRange& first, const FactorRange& second);

/// Columns: family1,m1,ell1,family2,m2,ell2,lambda1,mu1,lambda2,mu2,
/// D1,D1_margin,D2,D2_margin,main2,main2_margin,satisfied
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
nlohmann::json to_json(const DampingReport& r);
nlohmann::json to_json(const std::vector<SweepRow>& rows);

}  // namespace ymjoin
