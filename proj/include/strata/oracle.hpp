#pragma once

#include <string>
#include <vector>

#include "strata/stratify.hpp"
#include "strata/table.hpp"

namespace strata {
// Brute-force verifiers for tests and `strata verify`. Everything in here
// recomputes from raw counts / joint cells on purpose — no reuse of the
// estimation code paths it is checking.
namespace oracle {

/// Average effect by direct summation over raw counts:
/// sum_x [n(x,1,1)/n(x,1,.) - n(x,0,1)/n(x,0,.)] * n(x,.,.)/N.
Rational brute_ate(const ContingencyTable& table);

struct MinCardinalityResult {
    int min_blocks = 0;
    std::vector<std::vector<int>> witness;  // blocks of one minimal partition
};

/// Minimum block count over every partition of the strata whose blocks can
/// each be assembled by a sequence of pairwise pools, where each pool is
/// justified at pool time by equal treatment rates or by equal outcome
/// rates in both arms. Exhaustive over all set partitions; capped at 8
/// strata (Bell(8) = 4140).
MinCardinalityResult exhaustive_min_cardinality(const Distribution& dist);

enum class Variable { x, z, y, bx };

const char* variable_name(Variable v);

/// One configuration where p(a,b|c) != p(a|c) p(b|c).
struct IndependenceViolation {
    std::string a_value;
    std::string b_value;
    std::string c_value;
    Rational lhs;  // p(a, b | c)
    Rational rhs;  // p(a | c) p(b | c)
};

struct IndependenceReport {
    std::vector<IndependenceViolation> violations;
    bool holds() const { return violations.empty(); }
};

/// Exact factorization check of "a independent of b given c" over the
/// variables {X, Z, Y, b(X)}; a plan is required whenever bx appears.
/// Checks every configuration with a positive conditioning margin.
IndependenceReport factorization_check(const Distribution& dist, Variable a, Variable b,
                                       Variable c, const MergePlan* plan = nullptr);

}  // namespace oracle
}  // namespace strata
