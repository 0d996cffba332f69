#pragma once

#include <span>
#include <vector>

#include "strata/table.hpp"

namespace strata {

/// Which score equality a partition or merge is built on.
enum class ScoreKind { propensity, outcome_both, outcome_treated, outcome_control, user };

const char* score_kind_name(ScoreKind kind);

enum class Arm { both, treated_only, control_only };

/// Per-stratum pair (p(Y=1|Z=0,x), p(Y=1|Z=1,x)). Equal pairs license
/// pooling the strata; per-component equality licenses arm-specific pooling.
struct OutcomeScorePair {
    Rational p0;
    Rational p1;

    friend bool operator==(const OutcomeScorePair&, const OutcomeScorePair&) = default;
};

/// Equality used when grouping score values: exact rational equality, or
/// single-linkage chaining with gap <= epsilon (ties at exactly epsilon are
/// included). Epsilon is an exact rational so the rule is decidable.
class EqualityMode {
public:
    static EqualityMode exact() { return EqualityMode(true, Rational(0)); }
    static EqualityMode epsilon(const Rational& eps);

    bool is_exact() const { return exact_; }
    const Rational& eps() const { return eps_; }

private:
    EqualityMode(bool exact, Rational eps) : exact_(exact), eps_(std::move(eps)) {}
    bool exact_;
    Rational eps_;
};

/// Partition of stratum indices induced by a score. Blocks hold sorted
/// member indices and are ordered by smallest member; each block's witness
/// is the score value(s) of its smallest member (1 entry for scalar scores,
/// 2 for outcome pairs as [p0, p1]).
struct ScorePartition {
    ScoreKind kind = ScoreKind::user;
    int stratum_count = 0;
    std::vector<std::vector<int>> blocks;
    std::vector<std::vector<Rational>> witnesses;

    int block_count() const { return static_cast<int>(blocks.size()); }
    bool is_identity() const { return block_count() == stratum_count; }
};

/// True when every block of `fine` is contained in some block of `coarse`.
bool refines(const ScorePartition& fine, const ScorePartition& coarse);

/// L(x) = p(Z=1 | X=x) for every stratum. Throws PositivityViolation on any
/// zero-mass stratum.
std::vector<Rational> propensity(const Distribution& dist);

/// (p0, p1) per stratum. Throws PositivityViolation(stratum, z) when an arm
/// is empty.
std::vector<OutcomeScorePair> outcome_scores(const Distribution& dist);

/// Generic grouping of per-stratum scalar scores (the entry point for
/// user-supplied or misspecified scores).
ScorePartition group_values(std::span<const Rational> values, const EqualityMode& mode,
                            ScoreKind kind = ScoreKind::user);

ScorePartition group_by_propensity(std::span<const Rational> propensities,
                                   const EqualityMode& mode);

/// Arm both: pairs equal (componentwise Chebyshev distance under epsilon).
/// treated_only / control_only group on a single component.
ScorePartition group_by_outcome(std::span<const OutcomeScorePair> scores,
                                const EqualityMode& mode, Arm arm);

}  // namespace strata
