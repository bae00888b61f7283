#pragma once

#include <nlohmann/json.hpp>

#include "mvmdp/frontier.hpp"
#include "mvmdp/model.hpp"
#include "mvmdp/simulate.hpp"
#include "mvmdp/solve.hpp"

namespace mvmdp {

/// Version of the run-report JSON layout.
inline constexpr int kReportSchema = 1;

nlohmann::json values_json(const Eigen::VectorXd& values);
nlohmann::json policy_json(const DeterministicPolicy& policy);

nlohmann::json validation_json(const ValidationReport& report);
nlohmann::json feasible_json(const FeasibleSets& sets);
nlohmann::json solve_json(const SolveResult& result, bool include_trace);
nlohmann::json brute_force_json(const BruteForceResult& result);
nlohmann::json frontier_json(const FrontierReport& report);
nlohmann::json simulation_json(const SimulationEstimate& estimate);
nlohmann::json reward_check_json(const TransformedRewardCheck& check);
nlohmann::json dominance_json(const DominanceReport& report);

/// Envelope every command emits: schema version, echoed command line,
/// resolved parameters, result payload, and wall time.
nlohmann::json run_report(const std::string& command, nlohmann::json parameters,
                          nlohmann::json result, double timing_ms);

} // namespace mvmdp
