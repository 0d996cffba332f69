#pragma once

#include <optional>
#include <span>
#include <vector>

#include "strata/stratify.hpp"
#include "strata/table.hpp"

namespace strata {

enum class Route { stratified, do_calculus, ipw, dual_stratified };

const char* route_name(Route route);

/// Per-stratum effect and its population weight. For every route the
/// decomposition satisfies ate == sum(effect * weight) exactly.
struct StratumTerm {
    Rational effect;
    Rational weight;
};

/// One arm of a dual stratification: p(Y=1 | block, z) and p(block) over
/// that arm's merged space.
struct ArmTable {
    CategoricalSpace space;
    std::vector<Rational> outcome_rate;
    std::vector<Rational> weight;
};

struct EffectEstimate {
    Rational ate;
    Route route = Route::stratified;
    CategoricalSpace space;                // index space of per_stratum
    std::vector<StratumTerm> per_stratum;  // empty for the dual route
    std::optional<ArmTable> treated_arm;   // dual route only
    std::optional<ArmTable> control_arm;   // dual route only
    std::optional<MergePlan> plan_used;
    std::optional<DualPlan> dual_used;
};

/// tau(x) = p(Y=1 | x, Z=1) - p(Y=1 | x, Z=0).
Rational stratum_effect(const Distribution& dist, int x);

/// Weighted stratum effects: ate = sum_x tau(x) p(x).
EffectEstimate ate_stratified(const Distribution& dist);

/// Joint and marginal outcome distribution after forcing Z=z; the
/// treatment-uptake factor cancels, leaving p(y, x) = p(x) p(y | z, x).
struct InterventionDistribution {
    int z_set = 0;
    std::array<Rational, 2> p_y;                // indexed by y
    std::vector<std::array<Rational, 2>> p_yx;  // [x][y]
};

InterventionDistribution intervene(const Distribution& dist, int z);

/// ate from the two forced-treatment outcome distributions; equals
/// ate_stratified exactly on any positive distribution.
EffectEstimate ate_do(const Distribution& dist);

/// Inverse-probability weighting with caller-supplied per-stratum scores
/// used as denominators. Scores must lie strictly inside (0,1); equals
/// ate_stratified exactly when they are the true propensities.
EffectEstimate ate_ipw(const Distribution& dist, std::span<const Rational> scores);

/// Outcome distribution under hypothetical assignment Z=i; identical to
/// intervene(dist, i).p_y.
std::array<Rational, 2> potential_outcome_dist(const Distribution& dist, int i);

/// Treated-arm term over the treated plan's merged strata minus control-arm
/// term over the control plan's.
EffectEstimate ate_dual_stratified(const Distribution& dist, const DualPlan& dual);

}  // namespace strata
