#include "strata/stratify.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace strata {

std::vector<std::vector<int>> MergePlan::blocks() const {
    std::vector<std::vector<int>> out(target.cardinality());
    for (int i = 0; i < static_cast<int>(assignment.size()); ++i)
        out[assignment[i]].push_back(i);
    return out;
}

MergePlan identity_plan(const CategoricalSpace& space) {
    MergePlan plan{space, space, std::vector<int>(space.cardinality()),
                   std::vector<ScoreKind>(space.cardinality(), ScoreKind::user)};
    std::iota(plan.assignment.begin(), plan.assignment.end(), 0);
    return plan;
}

MergePlan plan_from_partition(const ScorePartition& partition, const CategoricalSpace& source) {
    const int n = source.cardinality();
    if (partition.stratum_count != n)
        throw InvalidPartition("partition over " + std::to_string(partition.stratum_count) +
                               " strata applied to a space of " + std::to_string(n));
    std::vector<int> seen(n, 0);
    for (const auto& block : partition.blocks)
        for (int m : block) {
            if (m < 0 || m >= n) throw InvalidPartition("partition member out of range");
            if (seen[m]++) throw InvalidPartition("partition repeats stratum " + source.label(m));
        }
    if (std::accumulate(seen.begin(), seen.end(), 0) != n)
        throw InvalidPartition("partition does not cover the stratum space");

    // Merged labels join the sorted member labels with "+".
    std::vector<std::string> block_label(partition.blocks.size());
    for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
        std::vector<std::string> members;
        for (int m : partition.blocks[b]) members.push_back(source.label(m));
        std::sort(members.begin(), members.end());
        std::string joined = members.front();
        for (std::size_t k = 1; k < members.size(); ++k) joined += "+" + members[k];
        block_label[b] = std::move(joined);
    }

    std::vector<std::string> target_labels = block_label;
    std::sort(target_labels.begin(), target_labels.end());
    if (std::adjacent_find(target_labels.begin(), target_labels.end()) != target_labels.end())
        throw InvalidPartition("merged labels collide");

    MergePlan plan;
    plan.source = source;
    plan.target = CategoricalSpace(target_labels);
    plan.assignment.assign(n, -1);
    plan.provenance.assign(target_labels.size(), partition.kind);
    for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
        const int t = plan.target.index_of(block_label[b]);
        for (int m : partition.blocks[b]) plan.assignment[m] = t;
    }
    return plan;
}

MergePlan compose(const MergePlan& first, const MergePlan& second) {
    if (!(second.source == first.target))
        throw InvalidPlan("compose: second plan's source does not match first plan's target");
    MergePlan out;
    out.source = first.source;
    out.target = second.target;
    out.assignment.resize(first.assignment.size());
    for (std::size_t i = 0; i < first.assignment.size(); ++i)
        out.assignment[i] = second.assignment[first.assignment[i]];

    // A final block pooled by the later plan carries the later reason; a
    // block that just flowed through keeps its earlier one.
    out.provenance.resize(second.target.cardinality());
    std::vector<std::vector<int>> inflow(second.target.cardinality());
    for (int f = 0; f < first.target.cardinality(); ++f)
        inflow[second.assignment[f]].push_back(f);
    for (int t = 0; t < second.target.cardinality(); ++t) {
        if (inflow[t].empty()) throw InvalidPlan("compose: second plan is not onto");
        out.provenance[t] =
            inflow[t].size() >= 2 ? second.provenance[t] : first.provenance[inflow[t].front()];
    }
    return out;
}

namespace {

void require_plan_matches(const MergePlan& plan, const CategoricalSpace& space,
                          const char* what) {
    if (!(plan.source == space))
        throw InvalidPlan(std::string(what) + ": plan source does not match the data's strata");
    if (static_cast<int>(plan.assignment.size()) != space.cardinality())
        throw InvalidPlan(std::string(what) + ": assignment size mismatch");
    std::vector<bool> hit(plan.target.cardinality(), false);
    for (int t : plan.assignment) {
        if (t < 0 || t >= plan.target.cardinality())
            throw InvalidPlan(std::string(what) + ": assignment target out of range");
        hit[t] = true;
    }
    if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }))
        throw InvalidPlan(std::string(what) + ": assignment is not onto the target space");
}

}  // namespace

ContingencyTable apply_plan(const ContingencyTable& table, const MergePlan& plan) {
    require_plan_matches(plan, table.x_space(), "apply_plan");
    std::vector<std::array<std::int64_t, 4>> cells(plan.target.cardinality(), {0, 0, 0, 0});
    for (int x = 0; x < table.cardinality(); ++x)
        for (int c = 0; c < 4; ++c) cells[plan.assignment[x]][c] += table.count(x, c / 2, c % 2);
    return ContingencyTable(plan.target, std::move(cells));
}

Distribution apply_plan(const Distribution& dist, const MergePlan& plan) {
    require_plan_matches(plan, dist.x_space(), "apply_plan");
    std::vector<std::array<Rational, 4>> cells(plan.target.cardinality());
    for (int x = 0; x < dist.cardinality(); ++x)
        for (int c = 0; c < 4; ++c) cells[plan.assignment[x]][c] += dist.joint(x, c / 2, c % 2);
    return Distribution(plan.target, std::move(cells));
}

BalanceReport check_balance(const Distribution& dist, const MergePlan& plan) {
    require_plan_matches(plan, dist.x_space(), "check_balance");
    const auto blocks = plan.blocks();
    BalanceReport report;
    for (int t = 0; t < plan.target.cardinality(); ++t) {
        Rational p_block;
        std::array<Rational, 2> pz_block;
        for (int m : blocks[t]) {
            p_block += dist.marginal_x(m);
            for (int z = 0; z < 2; ++z) pz_block[z] += dist.margin_xz(m, z);
        }
        if (p_block.is_zero()) throw PositivityViolation(plan.target.label(t), -1);
        for (int m : blocks[t]) {
            for (int z = 0; z < 2; ++z) {
                const Rational lhs = dist.margin_xz(m, z) / p_block;
                const Rational rhs = (dist.marginal_x(m) / p_block) * (pz_block[z] / p_block);
                if (lhs != rhs) report.violations.push_back({m, z, t, lhs, rhs});
            }
        }
    }
    return report;
}

DualPlan dual_plan(std::span<const OutcomeScorePair> scores, const EqualityMode& mode,
                   const CategoricalSpace& source) {
    return DualPlan{
        plan_from_partition(group_by_outcome(scores, mode, Arm::treated_only), source),
        plan_from_partition(group_by_outcome(scores, mode, Arm::control_only), source),
    };
}

CascadeResult cascade(const Distribution& dist, const std::vector<CascadeStepKind>& policy,
                      const EqualityMode& mode) {
    Distribution current = dist;
    MergePlan composed = identity_plan(dist.x_space());
    std::vector<CascadeStep> steps;

    const int initial = dist.cardinality();
    bool merged = true;
    while (merged) {
        merged = false;
        for (const CascadeStepKind kind : policy) {
            ScorePartition part =
                kind == CascadeStepKind::propensity
                    ? group_by_propensity(propensity(current), mode)
                    : group_by_outcome(outcome_scores(current), mode, Arm::both);
            if (part.is_identity()) continue;
            MergePlan plan = plan_from_partition(part, current.x_space());
            current = apply_plan(current, plan);
            composed = compose(composed, plan);
            steps.push_back({kind, std::move(plan)});
            merged = true;
        }
        if (static_cast<int>(steps.size()) >= initial)
            throw Error("cascade: merge count reached stratum count without converging");
    }

    return CascadeResult{std::move(composed), std::move(steps), std::move(current)};
}

}  // namespace strata
