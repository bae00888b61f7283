#include "mvmdp/report.hpp"

namespace mvmdp {

using nlohmann::json;

json values_json(const Eigen::VectorXd& values) {
    return std::vector<double>(values.data(), values.data() + values.size());
}

json policy_json(const DeterministicPolicy& policy) {
    return policy.actions;
}

json validation_json(const ValidationReport& report) {
    return json{{"valid", report.ok()},
                {"violations", report.violations},
                {"warnings", report.warnings}};
}

json feasible_json(const FeasibleSets& sets) {
    json out;
    out["target"] = values_json(sets.target.values);
    out["tolerance"] = sets.tolerance;
    out["sets"] = sets.per_state;
    out["policy_count"] = sets.policy_count();
    out["nonempty"] = sets.all_nonempty();
    if (auto empty = sets.first_empty_state()) {
        out["first_empty_state"] = *empty + 1;
    }
    return out;
}

json solve_json(const SolveResult& result, bool include_trace) {
    json out;
    out["optimal_policy"] = policy_json(result.optimal_policy);
    out["optimal_variance"] = values_json(result.optimal_variance.values);
    out["target"] = values_json(result.target.values);
    out["iterations"] = result.iterations;
    if (include_trace) {
        json trace = json::array();
        for (const IterationRecord& record : result.trace) {
            trace.push_back(json{{"policy", policy_json(record.policy)},
                                 {"values", values_json(record.values)},
                                 {"scores", record.scores}});
        }
        out["trace"] = std::move(trace);
    }
    return out;
}

json brute_force_json(const BruteForceResult& result) {
    json out;
    out["has_dominator"] = result.has_dominator;
    out["evaluated"] = result.evaluated;
    if (result.best) {
        out.update(solve_json(*result.best, false));
        json co = json::array();
        for (const DeterministicPolicy& policy : result.co_optimal) {
            co.push_back(policy_json(policy));
        }
        out["co_optimal"] = std::move(co);
    } else {
        json pareto = json::array();
        for (const auto& [policy, sigma2] : result.pareto) {
            pareto.push_back(json{{"policy", policy_json(policy)},
                                  {"variance", values_json(sigma2.values)}});
        }
        out["pareto"] = std::move(pareto);
    }
    return out;
}

json frontier_json(const FrontierReport& report) {
    json out;
    json entries = json::array();
    for (const FrontierEntry& entry : report.entries) {
        entries.push_back(json{{"policy", policy_json(entry.policy)},
                               {"mean", values_json(entry.mean.values)},
                               {"variance", values_json(entry.variance.values)}});
    }
    out["entries"] = std::move(entries);
    json classes = json::array();
    for (const auto& group : report.mean_classes) {
        json members = json::array();
        for (int index : group) {
            members.push_back(policy_json(report.entries[index].policy));
        }
        classes.push_back(json{{"mean", values_json(report.entries[group.front()].mean.values)},
                               {"policies", std::move(members)}});
    }
    out["mean_classes"] = std::move(classes);
    json efficient = json::array();
    for (int index : report.efficient_set) {
        efficient.push_back(policy_json(report.entries[index].policy));
    }
    out["efficient_set"] = std::move(efficient);
    return out;
}

json simulation_json(const SimulationEstimate& estimate) {
    return json{{"start_state", estimate.start_state + 1},
                {"mean_estimate", estimate.mean_estimate},
                {"variance_estimate", estimate.variance_estimate},
                {"std_error_mean", estimate.std_error_mean},
                {"std_error_variance", estimate.std_error_variance},
                {"num_paths", estimate.num_paths},
                {"horizon", estimate.horizon},
                {"truncation_bound", estimate.truncation_bound},
                {"seed", estimate.seed},
                {"rng", estimate.rng_id}};
}

json reward_check_json(const TransformedRewardCheck& check) {
    return json{{"analytic", values_json(check.analytic)},
                {"estimated", values_json(check.estimated)},
                {"std_error", values_json(check.std_error)},
                {"z_score", values_json(check.z_score)},
                {"num_samples", check.num_samples},
                {"seed", check.seed},
                {"rng", check.rng_id}};
}

json dominance_json(const DominanceReport& report) {
    json violations = json::array();
    for (const DominanceViolation& v : report.violations) {
        violations.push_back(json{{"sample", v.sample},
                                  {"mean_deviation", v.mean_deviation},
                                  {"variance_shortfall", v.variance_shortfall}});
    }
    return json{{"num_samples", report.num_samples},
                {"seed", report.seed},
                {"violations", std::move(violations)},
                {"max_mean_deviation", report.max_mean_deviation},
                {"min_variance_margin", report.min_variance_margin}};
}

json run_report(const std::string& command, json parameters, json result, double timing_ms) {
    json report;
    report["schema"] = kReportSchema;
    report["command"] = command;
    report["parameters"] = std::move(parameters);
    report["result"] = std::move(result);
    report["timing_ms"] = timing_ms;
    return report;
}

} // namespace mvmdp
