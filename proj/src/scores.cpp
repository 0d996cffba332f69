#include "strata/scores.hpp"

#include <algorithm>
#include <numeric>

namespace strata {

const char* score_kind_name(ScoreKind kind) {
    switch (kind) {
        case ScoreKind::propensity: return "propensity";
        case ScoreKind::outcome_both: return "outcome-both";
        case ScoreKind::outcome_treated: return "outcome-treated";
        case ScoreKind::outcome_control: return "outcome-control";
        case ScoreKind::user: return "user";
    }
    return "?";
}

EqualityMode EqualityMode::epsilon(const Rational& eps) {
    if (eps.sign() < 0) throw InvalidValue("epsilon must be non-negative");
    return EqualityMode(false, eps);
}

bool refines(const ScorePartition& fine, const ScorePartition& coarse) {
    if (fine.stratum_count != coarse.stratum_count) return false;
    std::vector<int> coarse_of(coarse.stratum_count, -1);
    for (int b = 0; b < coarse.block_count(); ++b)
        for (int m : coarse.blocks[b]) coarse_of[m] = b;
    for (const auto& block : fine.blocks) {
        const int target = coarse_of[block.front()];
        for (int m : block)
            if (coarse_of[m] != target) return false;
    }
    return true;
}

std::vector<Rational> propensity(const Distribution& dist) {
    return z_given_x_all(dist);
}

std::vector<OutcomeScorePair> outcome_scores(const Distribution& dist) {
    std::vector<OutcomeScorePair> out(dist.cardinality());
    for (int x = 0; x < dist.cardinality(); ++x)
        out[x] = OutcomeScorePair{dist.y_given_xz(x, 0), dist.y_given_xz(x, 1)};
    return out;
}

namespace {

// Disjoint-set over stratum indices; grouping is union-find over pairs
// within the mode's distance, which for exact mode degenerates to equality
// classes and in 1-D equals single-linkage chaining over sorted values.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int i) {
        while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<int> parent_;
};

template <typename WithinFn>
std::vector<std::vector<int>> components(int n, WithinFn within) {
    UnionFind uf(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (within(i, j)) uf.unite(i, j);
    std::vector<std::vector<int>> by_root(n);
    for (int i = 0; i < n; ++i) by_root[uf.find(i)].push_back(i);
    std::vector<std::vector<int>> blocks;
    for (auto& members : by_root)
        if (!members.empty()) blocks.push_back(std::move(members));
    return blocks;  // roots are minimal members, so blocks come out ordered
}

}  // namespace

ScorePartition group_values(std::span<const Rational> values, const EqualityMode& mode,
                            ScoreKind kind) {
    const int n = static_cast<int>(values.size());
    if (n == 0) throw EmptyInput("group_values: no scores");
    auto within = [&](int i, int j) {
        return mode.is_exact() ? values[i] == values[j]
                               : (values[i] - values[j]).abs() <= mode.eps();
    };
    ScorePartition part;
    part.kind = kind;
    part.stratum_count = n;
    part.blocks = components(n, within);
    for (const auto& block : part.blocks) part.witnesses.push_back({values[block.front()]});
    return part;
}

ScorePartition group_by_propensity(std::span<const Rational> propensities,
                                   const EqualityMode& mode) {
    return group_values(propensities, mode, ScoreKind::propensity);
}

ScorePartition group_by_outcome(std::span<const OutcomeScorePair> scores,
                                const EqualityMode& mode, Arm arm) {
    const int n = static_cast<int>(scores.size());
    if (n == 0) throw EmptyInput("group_by_outcome: no scores");

    if (arm != Arm::both) {
        std::vector<Rational> component(n);
        for (int i = 0; i < n; ++i)
            component[i] = arm == Arm::treated_only ? scores[i].p1 : scores[i].p0;
        ScorePartition part = group_values(
            component, mode,
            arm == Arm::treated_only ? ScoreKind::outcome_treated : ScoreKind::outcome_control);
        return part;
    }

    auto within = [&](int i, int j) {
        if (mode.is_exact()) return scores[i] == scores[j];
        const Rational d0 = (scores[i].p0 - scores[j].p0).abs();
        const Rational d1 = (scores[i].p1 - scores[j].p1).abs();
        return d0 <= mode.eps() && d1 <= mode.eps();
    };
    ScorePartition part;
    part.kind = ScoreKind::outcome_both;
    part.stratum_count = n;
    part.blocks = components(n, within);
    for (const auto& block : part.blocks) {
        const auto& rep = scores[block.front()];
        part.witnesses.push_back({rep.p0, rep.p1});
    }
    return part;
}

}  // namespace strata
