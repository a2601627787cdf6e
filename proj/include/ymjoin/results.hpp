#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ymjoin/problem.hpp"
#include "ymjoin/profile.hpp"
#include "ymjoin/solvers.hpp"

namespace ymjoin {

inline constexpr const char* kResultVersion = "1.0";

/// Malformed result file or unsupported schema version.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json make_result(const JoinProblem& p, const SolveOptions& o, const SolveResult& r);
nlohmann::json make_result(const SuspensionProblem& p, const SolveOptions& o, const SolveResult& r);
/// Result file without a solve report (e.g. a hand-written profile).
nlohmann::json make_result(const JoinProblem& p, const Profile& f);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double value = 0;
  double tolerance = 0;
  std::string note;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool pass() const;
  /// Name of the first failing check, empty when everything passes.
  std::string first_failure() const;
};

/// Recomputes residual, J, boundary behaviour and the energy identity.
VerifyReport verify_result(const nlohmann::json& result);
nlohmann::json to_json(const VerifyReport& v);

/// Standalone SVG of the stored profile; identical input gives identical bytes.
std::string render_svg(const nlohmann::json& result);

}  // namespace ymjoin
