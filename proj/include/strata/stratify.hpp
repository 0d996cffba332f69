#pragma once

#include <span>
#include <vector>

#include "strata/scores.hpp"
#include "strata/table.hpp"

namespace strata {

/// Many-to-one, onto relabeling of strata. `assignment[i]` is the target
/// index for source stratum i; `provenance[t]` records which score equality
/// justified pooling target block t.
struct MergePlan {
    CategoricalSpace source;
    CategoricalSpace target;
    std::vector<int> assignment;
    std::vector<ScoreKind> provenance;

    bool is_identity() const { return source == target; }
    /// Target index -> sorted source member indices.
    std::vector<std::vector<int>> blocks() const;
};

MergePlan identity_plan(const CategoricalSpace& space);

/// One target label per block, named by joining the sorted member labels
/// with "+"; the target space is sorted lexicographically.
MergePlan plan_from_partition(const ScorePartition& partition, const CategoricalSpace& source);

/// `second` applied after `first`; requires second.source == first.target.
MergePlan compose(const MergePlan& first, const MergePlan& second);

/// Pool counts of merged strata cellwise. Total is preserved.
ContingencyTable apply_plan(const ContingencyTable& table, const MergePlan& plan);

/// Pool probabilities of merged strata cellwise.
Distribution apply_plan(const Distribution& dist, const MergePlan& plan);

/// One failed instance of p(X=x, Z=z | b(X)=B) == p(X=x | B) * p(Z=z | B).
struct BalanceViolation {
    int source_index;
    int z;
    int target_index;
    Rational lhs;  // p(x, z | B)
    Rational rhs;  // p(x | B) * p(z | B)
};

struct BalanceReport {
    std::vector<BalanceViolation> violations;
    bool clean() const { return violations.empty(); }
};

/// Exact factorization check of X ⊥ Z | b(X) for the given plan, evaluated
/// at every member stratum and treatment arm. Violations are report
/// content, not errors.
BalanceReport check_balance(const Distribution& dist, const MergePlan& plan);

/// Separate relabelings for the treated and control arms. Deliberately not
/// collapsed into a single variable: the two target spaces need not agree.
struct DualPlan {
    MergePlan treated;
    MergePlan control;
};

DualPlan dual_plan(std::span<const OutcomeScorePair> scores, const EqualityMode& mode,
                   const CategoricalSpace& source);

enum class CascadeStepKind { propensity, outcome_both };

/// A step of the sequential merge that actually pooled something. The plan
/// is expressed over that step's source space.
struct CascadeStep {
    CascadeStepKind kind;
    MergePlan plan;
};

struct CascadeResult {
    MergePlan composed;  // original space -> final space
    std::vector<CascadeStep> steps;
    Distribution final_dist;

    int merge_count() const { return static_cast<int>(steps.size()); }
};

/// Applies the policy's grouping steps in order, re-deriving conditionals on
/// the merged distribution after every merge (pooled conditionals are the
/// p(x)-weighted mixtures of their members'), until a full pass produces no
/// merge. Each merge strictly reduces cardinality, so this terminates in
/// fewer than `cardinality` merges.
CascadeResult cascade(const Distribution& dist, const std::vector<CascadeStepKind>& policy,
                      const EqualityMode& mode);

inline std::vector<CascadeStepKind> default_cascade_policy() {
    return {CascadeStepKind::propensity, CascadeStepKind::outcome_both};
}

}  // namespace strata
