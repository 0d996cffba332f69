// strata: balancing-score stratification and causal effect estimation on
// discrete observational data. Subcommands: score, estimate, simulate, verify.
//
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 positivity
// violation, 4 degenerate weight, 5 infeasible plant.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "strata/csv.hpp"
#include "strata/dgp.hpp"
#include "strata/estimate.hpp"
#include "strata/oracle.hpp"
#include "strata/serialize.hpp"

namespace {

using namespace strata;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitPositivity = 3;
constexpr int kExitDegenerateWeight = 4;
constexpr int kExitInfeasiblePlant = 5;

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what(), 0);
    }
}

Distribution load_distribution(const std::string& csv_path) {
    return to_distribution(ContingencyTable::from_records(read_csv_file(csv_path)));
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

struct ModeFlags {
    std::string epsilon;

    EqualityMode resolve() const {
        if (epsilon.empty()) return EqualityMode::exact();
        try {
            return EqualityMode::epsilon(Rational::parse(epsilon));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), 0);
        }
    }
};

// ---------------------------------------------------------------- score ----

int cmd_score(const std::string& input, const ModeFlags& flags, const std::string& score,
              const std::string& arm) {
    const Distribution dist = load_distribution(input);
    const EqualityMode mode = flags.resolve();

    ScorePartition partition;
    if (score == "propensity") {
        partition = group_by_propensity(propensity(dist), mode);
    } else {
        const auto scores = outcome_scores(dist);
        const Arm which = arm == "treated" ? Arm::treated_only
                        : arm == "control" ? Arm::control_only
                                           : Arm::both;
        partition = group_by_outcome(scores, mode, which);
    }
    print(partition_json(partition, dist.x_space(), mode));
    return kExitOk;
}

// ------------------------------------------------------------- estimate ----

int cmd_estimate(const std::string& input, const std::string& route,
                 const std::string& plan_path) {
    const Distribution base = load_distribution(input);

    std::optional<MergePlan> plan;
    std::optional<DualPlan> dual;
    if (!plan_path.empty()) {
        const Json j = read_json_file(plan_path);
        if (json_is_dual_plan(j))
            dual = dual_plan_from_json(j);
        else
            plan = plan_from_json(j);
    }

    if (route == "dual") {
        if (plan) throw ParseError("route 'dual' needs a dual plan (treated/control)", 0);
        const DualPlan d = dual ? *dual
                                : dual_plan(outcome_scores(base), EqualityMode::exact(),
                                            base.x_space());
        print(estimate_json(ate_dual_stratified(base, d)));
        return kExitOk;
    }
    if (dual) throw ParseError("route '" + route + "' cannot use a dual plan", 0);

    const Distribution dist = plan ? apply_plan(base, *plan) : base;
    EffectEstimate est;
    if (route == "stratified")
        est = ate_stratified(dist);
    else if (route == "do")
        est = ate_do(dist);
    else
        est = ate_ipw(dist, propensity(dist));
    est.plan_used = plan;

    Json out = estimate_json(est);
    if (plan) {
        // No bound is claimed for approximate merges; report the delta.
        const Rational unmerged = ate_stratified(base).ate;
        out["unmerged_ate"] = rational_json(unmerged);
        out["merge_delta"] = rational_json(est.ate - unmerged);
    }
    print(out);
    return kExitOk;
}

// ------------------------------------------------------------- simulate ----

Json audit_planted_ties(const GeneratorSpec& spec, const Distribution& dist) {
    Json audit = Json::array();
    for (const PlantedTie& tie : spec.planted()) {
        Json entry{{"kind", planted_tie_kind_name(tie.kind)}, {"i", tie.i}, {"j", tie.j}};
        bool holds = true;
        switch (tie.kind) {
            case PlantedTie::Kind::propensity:
                holds = dist.z_given_x(tie.i) == dist.z_given_x(tie.j);
                entry["value"] = rational_json(dist.z_given_x(tie.i));
                break;
            case PlantedTie::Kind::outcome1:
                holds = dist.y_given_xz(tie.i, 1) == dist.y_given_xz(tie.j, 1);
                entry["value"] = rational_json(dist.y_given_xz(tie.i, 1));
                break;
            case PlantedTie::Kind::outcome0:
                holds = dist.y_given_xz(tie.i, 0) == dist.y_given_xz(tie.j, 0);
                entry["value"] = rational_json(dist.y_given_xz(tie.i, 0));
                break;
            case PlantedTie::Kind::cascade: {
                const int t = GeneratorSpec::cascade_target(tie);
                entry["target"] = t;
                holds = dist.z_given_x(tie.i) == dist.z_given_x(tie.j);
                for (int z = 0; z < 2 && holds; ++z) {
                    // Pooled outcome rate of {i, j} must equal the target's.
                    const Rational pooled_y1 = dist.joint(tie.i, z, 1) + dist.joint(tie.j, z, 1);
                    const Rational pooled_z = dist.margin_xz(tie.i, z) + dist.margin_xz(tie.j, z);
                    holds = pooled_y1 / pooled_z == dist.y_given_xz(t, z);
                }
                break;
            }
        }
        entry["holds"] = holds;
        audit.push_back(entry);
    }
    return audit;
}

int cmd_simulate(const std::string& spec_path, std::int64_t n,
                 const std::optional<std::uint64_t>& seed_flag, const std::string& out_path) {
    if (n < 1) throw InvalidValue("--n must be at least 1");
    const GeneratorSpec spec = generator_spec_from_json(read_json_file(spec_path));

    std::uint64_t seed = spec.seed();
    if (const char* env = std::getenv("STRATA_SEED"); env && *env)
        seed = std::strtoull(env, nullptr, 10);
    if (seed_flag) seed = *seed_flag;

    const Distribution dist = realize(spec);
    const auto records = sample(dist, n, seed);
    write_csv_file(out_path, records);

    print(Json{{"spec", generator_spec_json(spec)},
               {"n", n},
               {"seed", seed},
               {"out", out_path},
               {"exact_ate", rational_json(ate_stratified(dist).ate)},
               {"planted_audit", audit_planted_ties(spec, dist)}});
    return kExitOk;
}

// --------------------------------------------------------------- verify ----

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_verify(const std::string& input, const std::string& plan_path) {
    std::optional<GeneratorSpec> spec;
    std::optional<Distribution> dist_holder;
    if (ends_with(input, ".json")) {
        spec = generator_spec_from_json(read_json_file(input));
        dist_holder = realize(*spec);
    } else {
        dist_holder = load_distribution(input);
    }
    const Distribution& dist = *dist_holder;
    const EqualityMode exact = EqualityMode::exact();

    Json checks = Json::array();
    bool all_pass = true;
    auto add_check = [&](const char* name, bool pass, const Json& detail) {
        Json entry{{"name", name}, {"pass", pass}};
        for (const auto& [k, v] : detail.items()) entry[k] = v;
        checks.push_back(entry);
        all_pass = all_pass && pass;
    };

    // Same estimand along all three routes, exactly.
    const EffectEstimate strat = ate_stratified(dist);
    const EffectEstimate via_do = ate_do(dist);
    const EffectEstimate via_ipw = ate_ipw(dist, propensity(dist));
    add_check("route-equivalence",
              strat.ate == via_do.ate && strat.ate == via_ipw.ate,
              Json{{"ate", rational_json(strat.ate)},
                   {"do_ate", rational_json(via_do.ate)},
                   {"ipw_ate", rational_json(via_ipw.ate)}});

    // Pooling equal-score strata must not move the estimate.
    const auto scores = outcome_scores(dist);
    const MergePlan prop_plan =
        plan_from_partition(group_by_propensity(propensity(dist), exact), dist.x_space());
    const MergePlan outcome_plan =
        plan_from_partition(group_by_outcome(scores, exact, Arm::both), dist.x_space());
    const DualPlan dual = dual_plan(scores, exact, dist.x_space());
    const Rational prop_merged_ate = ate_stratified(apply_plan(dist, prop_plan)).ate;
    const Rational outcome_merged_ate = ate_stratified(apply_plan(dist, outcome_plan)).ate;
    const Rational dual_ate = ate_dual_stratified(dist, dual).ate;
    add_check("merge-invariance",
              prop_merged_ate == strat.ate && outcome_merged_ate == strat.ate &&
                  dual_ate == strat.ate,
              Json{{"ate", rational_json(strat.ate)},
                   {"propensity_merged", rational_json(prop_merged_ate)},
                   {"outcome_merged", rational_json(outcome_merged_ate)},
                   {"dual", rational_json(dual_ate)}});

    // Exact-propensity pooling balances treatment against strata.
    const auto balance = check_balance(dist, prop_plan);
    const auto indep = oracle::factorization_check(dist, oracle::Variable::x,
                                                   oracle::Variable::z, oracle::Variable::bx,
                                                   &prop_plan);
    add_check("balance-factorization", balance.clean() && indep.holds(),
              Json{{"plan_targets", prop_plan.target.labels()},
                   {"balance_violations", balance_violations_json(balance, dist, prop_plan)},
                   {"independence_violations", independence_violations_json(indep)}});

    if (!plan_path.empty()) {
        const Json j = read_json_file(plan_path);
        const MergePlan user_plan = plan_from_json(j);
        const auto user_balance = check_balance(dist, user_plan);
        add_check("user-plan-balance", user_balance.clean(),
                  Json{{"plan_targets", user_plan.target.labels()},
                       {"violations", balance_violations_json(user_balance, dist, user_plan)}});
    }

    if (dist.cardinality() <= 8) {
        const CascadeResult cas = cascade(dist, default_cascade_policy(), exact);
        const auto min = oracle::exhaustive_min_cardinality(dist);
        add_check("exhaustive-minimality",
                  cas.final_dist.cardinality() == min.min_blocks,
                  Json{{"cascade_blocks", cas.final_dist.cardinality()},
                       {"minimum_blocks", min.min_blocks}});
    } else {
        add_check("exhaustive-minimality", true, Json{{"skipped", "more than 8 strata"}});
    }

    if (spec && !spec->planted().empty()) {
        const Json audit = audit_planted_ties(*spec, dist);
        bool holds = true;
        for (const Json& entry : audit) holds = holds && entry.at("holds").get<bool>();
        add_check("planted-ties", holds, Json{{"audit", audit}});
    }

    print(Json{{"input", input}, {"strata", dist.x_space().labels()}, {"checks", checks},
               {"pass", all_pass}});
    return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"balancing-score stratification for discrete observational data"};
    app.require_subcommand(1);

    std::string input, score = "propensity", arm = "both", route = "stratified";
    std::string plan_path, out_path, spec_path;
    ModeFlags mode_flags;
    std::string mode = "exact";
    std::int64_t n = 0;
    std::optional<std::uint64_t> seed_flag;

    CLI::App* score_cmd = app.add_subcommand("score", "group strata by a balancing score");
    score_cmd->add_option("input", input, "CSV file with header x,z,y")->required();
    score_cmd->add_option("--mode", mode, "equality mode")->check(CLI::IsMember({"exact"}));
    score_cmd->add_option("--epsilon", mode_flags.epsilon,
                          "approximate equality tolerance (decimal or num/den)");
    score_cmd->add_option("--score", score, "which score to group on")
        ->check(CLI::IsMember({"propensity", "outcome"}));
    score_cmd->add_option("--arm", arm, "outcome score component(s) to match")
        ->check(CLI::IsMember({"both", "treated", "control"}));

    CLI::App* est_cmd = app.add_subcommand("estimate", "estimate the average treatment effect");
    est_cmd->add_option("input", input, "CSV file with header x,z,y")->required();
    est_cmd->add_option("--route", route, "estimator route")
        ->check(CLI::IsMember({"stratified", "do", "ipw", "dual"}));
    est_cmd->add_option("--plan", plan_path, "merge plan JSON to apply first");

    CLI::App* sim_cmd = app.add_subcommand("simulate", "sample records from a generator spec");
    sim_cmd->add_option("spec", spec_path, "generator spec JSON")->required();
    sim_cmd->add_option("--n", n, "number of records")->required();
    sim_cmd->add_option("--seed", seed_flag, "sampling seed (overrides spec and STRATA_SEED)");
    sim_cmd->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* verify_cmd = app.add_subcommand("verify", "run the identity checks");
    verify_cmd->add_option("input", input, "CSV dataset or generator spec JSON")->required();
    verify_cmd->add_option("--plan", plan_path, "also balance-check this plan");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (score_cmd->parsed()) return cmd_score(input, mode_flags, score, arm);
        if (est_cmd->parsed()) return cmd_estimate(input, route, plan_path);
        if (sim_cmd->parsed()) return cmd_simulate(spec_path, n, seed_flag, out_path);
        return cmd_verify(input, plan_path);
    } catch (const PositivityViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPositivity;
    } catch (const DegenerateWeight& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerateWeight;
    } catch (const InfeasiblePlant& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasiblePlant;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
