// Command-line front end: model validation, closed-form evaluation, feasible
// action sets, the three constrained-variance solvers, frontier analysis,
// Monte Carlo cross-checks, and randomized-policy dominance sampling.
//
// Exit codes: 0 success, 1 infeasibility (no feasible action at some state,
// or brute force found no entrywise dominator), 2 input error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvmdp/constrain.hpp"
#include "mvmdp/evaluate.hpp"
#include "mvmdp/frontier.hpp"
#include "mvmdp/model_io.hpp"
#include "mvmdp/report.hpp"
#include "mvmdp/rng.hpp"
#include "mvmdp/simulate.hpp"
#include "mvmdp/solve.hpp"

namespace {

using nlohmann::json;
using namespace mvmdp;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;

long long env_cap() {
    if (const char* env = std::getenv("MVMDP_CAP")) {
        char* end = nullptr;
        const long long value = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return value;
        std::cerr << "warning: ignoring invalid MVMDP_CAP value \"" << env << "\"\n";
    }
    return 1'000'000;
}

std::string join_argv(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) out += ' ';
        out += argv[i];
    }
    return out;
}

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void print_vector(std::ostream& out, const Eigen::VectorXd& values) {
    out << "(";
    for (int i = 0; i < values.size(); ++i) {
        if (i > 0) out << ", ";
        out << values[i];
    }
    out << ")";
}

void print_policy(std::ostream& out, const DeterministicPolicy& policy) {
    out << policy.to_string();
}

void warn_if_reducible(const MdpModel& model, const DeterministicPolicy& policy) {
    if (!is_irreducible(induced_chain(model, policy).transition)) {
        std::cerr << "warning: policy " << policy.to_string()
                  << " induces a reducible chain; ergodicity assumptions fail, closed forms stay "
                     "valid\n";
    }
}

/// Shared state for the subcommands.
struct Options {
    std::string model_path;
    std::string output = "table";
    std::vector<double> lambda;
    std::vector<int> lambda_from_policy;
    std::vector<int> policy;
    std::vector<int> initial;
    std::string method = "pi";
    double tolerance = kFeasibilityResidualTolerance;
    double tie_tol = kTieTolerance;
    double epsilon = 1e-10;
    double class_tol = kMeanClassTolerance;
    std::uint64_t seed = 12345;
    long paths = 10000;
    int horizon = 0;  // 0: derive from the truncation target
    int start = 1;
    int samples = 200;
    long long cap = env_cap();
};

MdpModel load_or_exit(const Options& opt) {
    ParsedModel parsed = load_model(opt.model_path);
    for (const std::string& warning : parsed.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    return std::move(parsed.model);
}

DeterministicPolicy to_policy(const std::vector<int>& labels) {
    DeterministicPolicy policy;
    policy.actions = labels;
    return policy;
}

/// Target mean from --lambda, or derived exactly from --lambda-from-policy.
ValueVector resolve_target(const MdpModel& model, const Options& opt) {
    if (!opt.lambda.empty() && !opt.lambda_from_policy.empty()) {
        throw ContractError("--lambda and --lambda-from-policy are mutually exclusive");
    }
    if (!opt.lambda.empty()) {
        if (static_cast<int>(opt.lambda.size()) != model.num_states()) {
            throw ContractError("--lambda needs " + std::to_string(model.num_states()) +
                                " comma-separated values");
        }
        Eigen::VectorXd values(model.num_states());
        for (int i = 0; i < model.num_states(); ++i) values[i] = opt.lambda[i];
        return {Role::Target, std::move(values)};
    }
    if (!opt.lambda_from_policy.empty()) {
        ValueVector j = mean_performance(model, to_policy(opt.lambda_from_policy));
        return {Role::Target, std::move(j.values)};
    }
    throw ContractError("one of --lambda or --lambda-from-policy is required");
}

int emit(const Options& opt, const json& report,
         const std::function<void(std::ostream&)>& table, int exit_code) {
    if (opt.output == "json") {
        std::cout << report.dump(2) << "\n";
    } else {
        table(std::cout);
    }
    return exit_code;
}

json base_parameters(const Options& opt) {
    return json{{"model", opt.model_path}, {"output", opt.output}};
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& opt, const std::string& command) {
    Clock clock;
    std::ifstream in(opt.model_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open model file: " << opt.model_path << "\n";
        return kExitInputError;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    UncheckedModel unchecked = parse_model_unchecked(buffer.str());
    const ValidationReport& validation = unchecked.validation;

    json report = run_report(command, base_parameters(opt), validation_json(validation), clock.ms());
    const int code = validation.ok() ? kExitOk : kExitInputError;
    return emit(opt, report, [&](std::ostream& out) {
        out << (validation.ok() ? "model is valid" : "model is INVALID") << "\n";
        for (const auto& v : validation.violations) out << "  violation: " << v << "\n";
        for (const auto& w : validation.warnings) out << "  warning: " << w << "\n";
    }, code);
}

int cmd_evaluate(const Options& opt, const std::string& command) {
    Clock clock;
    MdpModel model = load_or_exit(opt);
    DeterministicPolicy policy = to_policy(opt.policy);
    warn_if_reducible(model, policy);

    ValueVector mean = mean_performance(model, policy);
    ValueVector sigma2 = variance(model, policy);
    ValueVector cross = variance_via_second_moment(model, policy);

    json parameters = base_parameters(opt);
    parameters["policy"] = policy_json(policy);
    json result{{"policy", policy_json(policy)},
                {"mean", values_json(mean.values)},
                {"variance", values_json(sigma2.values)},
                {"variance_via_second_moment", values_json(cross.values)}};
    json report = run_report(command, std::move(parameters), std::move(result), clock.ms());
    return emit(opt, report, [&](std::ostream& out) {
        out << "policy   ";
        print_policy(out, policy);
        out << "\nmean     ";
        print_vector(out, mean.values);
        out << "\nvariance ";
        print_vector(out, sigma2.values);
        out << "\n";
    }, kExitOk);
}

int cmd_feasible(const Options& opt, const std::string& command) {
    Clock clock;
    MdpModel model = load_or_exit(opt);
    ValueVector target = resolve_target(model, opt);
    FeasibleSets sets = feasible_sets(model, target, opt.tolerance);

    json parameters = base_parameters(opt);
    parameters["target"] = values_json(target.values);
    parameters["tolerance"] = opt.tolerance;
    json report = run_report(command, std::move(parameters), feasible_json(sets), clock.ms());

    int code = kExitOk;
    if (auto empty = sets.first_empty_state()) {
        std::cerr << "error: no feasible action at state " << *empty + 1
                  << " for the requested target mean\n";
        code = kExitInfeasible;
    }
    return emit(opt, report, [&](std::ostream& out) {
        out << "target ";
        print_vector(out, target.values);
        out << "  (tolerance " << sets.tolerance << ")\n";
        for (std::size_t i = 0; i < sets.per_state.size(); ++i) {
            out << "state " << i + 1 << ": {";
            for (std::size_t k = 0; k < sets.per_state[i].size(); ++k) {
                if (k > 0) out << ", ";
                out << sets.per_state[i][k];
            }
            out << "}\n";
        }
        out << "feasible policies: " << sets.policy_count() << "\n";
    }, code);
}

void print_solve_table(std::ostream& out, const SolveResult& result, const std::string& method) {
    out << "method            " << method << "\n";
    out << "optimal policy    ";
    print_policy(out, result.optimal_policy);
    out << "\noptimal variance  ";
    print_vector(out, result.optimal_variance.values);
    out << "\ntarget mean       ";
    print_vector(out, result.target.values);
    out << "\niterations        " << result.iterations << "\n";
    if (method == "pi") {
        for (std::size_t k = 0; k < result.trace.size(); ++k) {
            const IterationRecord& record = result.trace[k];
            out << "  sweep " << k + 1 << ": policy ";
            print_policy(out, record.policy);
            out << ", second moment ";
            print_vector(out, record.values);
            out << "\n";
            for (std::size_t i = 0; i < record.scores.size(); ++i) {
                out << "    state " << i + 1 << " scores:";
                for (double s : record.scores[i]) out << " " << s;
                out << "\n";
            }
        }
    }
}

int cmd_solve(const Options& opt, const std::string& command) {
    Clock clock;
    MdpModel model = load_or_exit(opt);
    ValueVector target = resolve_target(model, opt);
    FeasibleSets sets = feasible_sets(model, target, opt.tolerance);

    json parameters = base_parameters(opt);
    parameters["method"] = opt.method;
    parameters["target"] = values_json(target.values);
    parameters["tolerance"] = opt.tolerance;
    parameters["cap"] = opt.cap;
    if (!opt.initial.empty()) parameters["initial"] = opt.initial;
    if (opt.method == "pi") parameters["tie_tol"] = opt.tie_tol;
    if (opt.method == "vi") parameters["epsilon"] = opt.epsilon;

    try {
        if (opt.method == "brute") {
            BruteForceResult result = brute_force(model, sets, opt.cap);
            json report =
                run_report(command, std::move(parameters), brute_force_json(result), clock.ms());
            if (!result.has_dominator) {
                std::cerr << "error: no policy dominates every other entrywise; reporting the "
                             "Pareto set\n";
                return emit(opt, report, [&](std::ostream& out) {
                    out << "no entrywise dominator among " << result.evaluated << " policies\n";
                    for (const auto& [policy, sigma2] : result.pareto) {
                        out << "  pareto ";
                        print_policy(out, policy);
                        out << " variance ";
                        print_vector(out, sigma2.values);
                        out << "\n";
                    }
                }, kExitInfeasible);
            }
            warn_if_reducible(model, result.best->optimal_policy);
            return emit(opt, report, [&](std::ostream& out) {
                print_solve_table(out, *result.best, "brute");
                if (result.co_optimal.size() > 1) {
                    out << "co-optimal policies:";
                    for (const auto& policy : result.co_optimal) out << " " << policy.to_string();
                    out << "\n";
                }
            }, kExitOk);
        }

        SolveResult result;
        if (opt.method == "pi") {
            std::optional<DeterministicPolicy> initial;
            if (!opt.initial.empty()) initial = to_policy(opt.initial);
            result = policy_iteration(model, sets, initial, opt.tie_tol);
        } else if (opt.method == "vi") {
            if (!opt.initial.empty()) {
                throw ContractError("--initial applies to --method pi only");
            }
            result = value_iteration(model, sets, opt.epsilon);
        } else {
            throw ContractError("unknown method \"" + opt.method + "\"");
        }
        warn_if_reducible(model, result.optimal_policy);
        json payload = solve_json(result, true);
        payload["method"] = opt.method;
        json report = run_report(command, std::move(parameters), std::move(payload), clock.ms());
        return emit(opt, report, [&](std::ostream& out) {
            print_solve_table(out, result, opt.method);
        }, kExitOk);
    } catch (const EmptyFeasibleSetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        json error{{"error", {{"type", "empty-feasible-set"},
                              {"first_empty_state", e.state},
                              {"message", e.what()}}}};
        json report = run_report(command, std::move(parameters), std::move(error), clock.ms());
        return emit(opt, report, [&](std::ostream& out) { out << e.what() << "\n"; },
                    kExitInfeasible);
    }
}

int cmd_frontier(const Options& opt, const std::string& command) {
    Clock clock;
    MdpModel model = load_or_exit(opt);
    FrontierReport frontier = efficient_frontier(enumerate_all(model, opt.cap), opt.class_tol);

    json parameters = base_parameters(opt);
    parameters["cap"] = opt.cap;
    parameters["class_tolerance"] = opt.class_tol;
    json report = run_report(command, std::move(parameters), frontier_json(frontier), clock.ms());
    return emit(opt, report, [&](std::ostream& out) {
        out << std::left << std::setw(12) << "policy" << std::setw(28) << "mean" << "variance\n";
        for (const FrontierEntry& entry : frontier.entries) {
            std::ostringstream mean, var;
            print_vector(mean, entry.mean.values);
            print_vector(var, entry.variance.values);
            out << std::left << std::setw(12) << entry.policy.to_string() << std::setw(28)
                << mean.str() << var.str() << "\n";
        }
        out << "mean classes:\n";
        for (const auto& group : frontier.mean_classes) {
            out << " ";
            print_vector(out, frontier.entries[group.front()].mean.values);
            out << " <-";
            for (int index : group) out << " " << frontier.entries[index].policy.to_string();
            out << "\n";
        }
        out << "efficient set:";
        for (int index : frontier.efficient_set) {
            out << " " << frontier.entries[index].policy.to_string();
        }
        out << "\n";
    }, kExitOk);
}

int cmd_simulate(const Options& opt, const std::string& command) {
    Clock clock;
    MdpModel model = load_or_exit(opt);
    DeterministicPolicy policy = to_policy(opt.policy);
    warn_if_reducible(model, policy);
    const int horizon = opt.horizon > 0 ? opt.horizon : default_horizon(model, policy);

    SimulationEstimate estimate =
        simulate_policy(model, policy, opt.start - 1, opt.paths, horizon, opt.seed);
    ValueVector mean = mean_performance(model, policy);
    ValueVector sigma2 = variance(model, policy);

    json parameters = base_parameters(opt);
    parameters["policy"] = policy_json(policy);
    parameters["start"] = opt.start;
    parameters["paths"] = opt.paths;
    parameters["horizon"] = horizon;
    parameters["seed"] = opt.seed;
    json payload = simulation_json(estimate);
    payload["policy"] = policy_json(policy);
    payload["analytic_mean"] = mean.values[opt.start - 1];
    payload["analytic_variance"] = sigma2.values[opt.start - 1];
    json report = run_report(command, std::move(parameters), std::move(payload), clock.ms());
    return emit(opt, report, [&](std::ostream& out) {
        out << "policy " << policy.to_string() << ", start state " << opt.start << ", "
            << estimate.num_paths << " paths, horizon " << estimate.horizon << ", seed "
            << estimate.seed << " (" << estimate.rng_id << ")\n";
        out << "mean     " << estimate.mean_estimate << " +/- " << estimate.std_error_mean
            << "  (analytic " << mean.values[opt.start - 1] << ")\n";
        out << "variance " << estimate.variance_estimate << " +/- " << estimate.std_error_variance
            << "  (analytic " << sigma2.values[opt.start - 1] << ")\n";
        out << "truncation bound " << estimate.truncation_bound << "\n";
    }, kExitOk);
}

int cmd_check_randomized(const Options& opt, const std::string& command) {
    Clock clock;
    MdpModel model = load_or_exit(opt);
    ValueVector target = resolve_target(model, opt);
    FeasibleSets sets = feasible_sets(model, target, opt.tolerance);

    json parameters = base_parameters(opt);
    parameters["target"] = values_json(target.values);
    parameters["tolerance"] = opt.tolerance;
    parameters["samples"] = opt.samples;
    parameters["seed"] = opt.seed;

    try {
        SolveResult result = policy_iteration(model, sets);
        DominanceReport dominance =
            check_randomized_dominance(model, sets, result, opt.samples, opt.seed);
        json payload = dominance_json(dominance);
        payload["optimal_policy"] = policy_json(result.optimal_policy);
        payload["optimal_variance"] = values_json(result.optimal_variance.values);
        json report = run_report(command, std::move(parameters), std::move(payload), clock.ms());
        return emit(opt, report, [&](std::ostream& out) {
            out << "optimal policy ";
            print_policy(out, result.optimal_policy);
            out << " variance ";
            print_vector(out, result.optimal_variance.values);
            out << "\n" << dominance.num_samples << " randomized policies sampled (seed "
                << dominance.seed << ", " << kRngId << ")\n";
            out << "max |mean - target|    " << dominance.max_mean_deviation << "\n";
            out << "min variance margin    " << dominance.min_variance_margin << "\n";
            out << "violations             " << dominance.violations.size() << "\n";
        }, kExitOk);
    } catch (const EmptyFeasibleSetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        json error{{"error", {{"type", "empty-feasible-set"},
                              {"first_empty_state", e.state},
                              {"message", e.what()}}}};
        json report = run_report(command, std::move(parameters), std::move(error), clock.ms());
        return emit(opt, report, [&](std::ostream& out) { out << e.what() << "\n"; },
                    kExitInfeasible);
    }
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    const std::string command = join_argv(argc, argv);

    CLI::App app{"mean-variance solver for finite discounted MDPs"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", opt.model_path, "model JSON file")->required();
        sub->add_option("--output", opt.output, "report format")
            ->check(CLI::IsMember({"json", "table"}));
    };
    auto add_target = [&](CLI::App* sub) {
        sub->add_option("--lambda", opt.lambda, "target mean, comma separated")->delimiter(',');
        sub->add_option("--lambda-from-policy", opt.lambda_from_policy,
                        "derive the target mean exactly from this policy")
            ->delimiter(',');
        sub->add_option("--tolerance", opt.tolerance, "feasibility residual tolerance");
    };

    CLI::App* validate = app.add_subcommand("validate", "check model invariants");
    add_common(validate);

    CLI::App* evaluate = app.add_subcommand("evaluate", "closed-form mean and variance of a policy");
    add_common(evaluate);
    evaluate->add_option("--policy", opt.policy, "action labels, comma separated")
        ->delimiter(',')
        ->required();

    CLI::App* feasible = app.add_subcommand("feasible", "per-state feasible action sets");
    add_common(feasible);
    add_target(feasible);

    CLI::App* solve = app.add_subcommand("solve", "variance-minimal policy for the target mean");
    add_common(solve);
    add_target(solve);
    solve->add_option("--method", opt.method, "pi, vi, or brute")
        ->check(CLI::IsMember({"pi", "vi", "brute"}));
    solve->add_option("--tie-tol", opt.tie_tol, "score tie tolerance (pi)");
    solve->add_option("--epsilon", opt.epsilon, "stopping accuracy (vi)");
    solve->add_option("--initial", opt.initial, "initial policy (pi)")->delimiter(',');
    solve->add_option("--cap", opt.cap, "enumeration cap (brute)");

    CLI::App* frontier = app.add_subcommand("frontier", "all policies, mean classes, efficient set");
    add_common(frontier);
    frontier->add_option("--cap", opt.cap, "enumeration cap");
    frontier->add_option("--class-tol", opt.class_tol, "mean class tolerance");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate for a policy");
    add_common(simulate);
    simulate->add_option("--policy", opt.policy, "action labels, comma separated")
        ->delimiter(',')
        ->required();
    simulate->add_option("--start", opt.start, "start state (1-based)");
    simulate->add_option("--paths", opt.paths, "number of sample paths");
    simulate->add_option("--horizon", opt.horizon, "truncation horizon (default: auto)");
    simulate->add_option("--seed", opt.seed, "random seed");

    CLI::App* check = app.add_subcommand("check-randomized",
                                         "sample randomized policies over the feasible sets");
    add_common(check);
    add_target(check);
    check->add_option("--samples", opt.samples, "number of randomized policies");
    check->add_option("--seed", opt.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(opt, command);
        if (app.got_subcommand(evaluate)) return cmd_evaluate(opt, command);
        if (app.got_subcommand(feasible)) return cmd_feasible(opt, command);
        if (app.got_subcommand(solve)) return cmd_solve(opt, command);
        if (app.got_subcommand(frontier)) return cmd_frontier(opt, command);
        if (app.got_subcommand(simulate)) return cmd_simulate(opt, command);
        if (app.got_subcommand(check)) return cmd_check_randomized(opt, command);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const std::string& violation : e.violations) {
            std::cerr << "  violation: " << violation << "\n";
        }
        return kExitInputError;
    } catch (const EnumerationTooLargeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
