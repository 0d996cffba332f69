#pragma once

#include <nlohmann/json.hpp>

#include "strata/dgp.hpp"
#include "strata/estimate.hpp"
#include "strata/oracle.hpp"
#include "strata/scores.hpp"
#include "strata/stratify.hpp"

namespace strata {

/// All emitted JSON uses insertion-ordered keys so identical inputs yield
/// byte-identical output. Rationals render as {"rational": "num/den",
/// "decimal": "<17 significant digits>"}; the rational string is the
/// contract, the decimal is advisory.
using Json = nlohmann::ordered_json;

Json rational_json(const Rational& r);

/// Accepts "num/den" / decimal / integer strings, or integral JSON numbers.
/// Non-integral JSON numbers are rejected (quote them to keep exactness).
Rational rational_from_json(const Json& j);

Json mode_json(const EqualityMode& mode);

Json partition_json(const ScorePartition& partition, const CategoricalSpace& space,
                    const EqualityMode& mode);

Json plan_json(const MergePlan& plan);
MergePlan plan_from_json(const Json& j);

Json dual_plan_json(const DualPlan& dual);
DualPlan dual_plan_from_json(const Json& j);
bool json_is_dual_plan(const Json& j);

Json estimate_json(const EffectEstimate& estimate);

GeneratorSpec generator_spec_from_json(const Json& j);
Json generator_spec_json(const GeneratorSpec& spec);

Json balance_violations_json(const BalanceReport& report, const Distribution& dist,
                             const MergePlan& plan);
Json independence_violations_json(const oracle::IndependenceReport& report);

}  // namespace strata
