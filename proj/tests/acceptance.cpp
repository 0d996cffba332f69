// Acceptance suite: analytic identities of the estimators and the merge
// machinery, checked with exact rational arithmetic on generated instances.
// One line per criterion; exit is nonzero when anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "strata/dgp.hpp"
#include "strata/estimate.hpp"
#include "strata/oracle.hpp"
#include "strata/scores.hpp"
#include "strata/stratify.hpp"
#include "unit/helpers.hpp"

namespace {

using namespace strata;
using test::R;

struct Criterion {
    int id;
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<Criterion> g_results;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    g_results.push_back({id, name, pass, detail});
}

// Stratified estimate recomputed in doubles only, to exercise the reporting
// boundary against the exact path.
double double_route_ate(const Distribution& dist) {
    double ate = 0.0;
    for (int x = 0; x < dist.cardinality(); ++x) {
        double margin[2], hits[2], px = 0.0;
        for (int z = 0; z < 2; ++z) {
            margin[z] = dist.joint(x, z, 0).to_double() + dist.joint(x, z, 1).to_double();
            hits[z] = dist.joint(x, z, 1).to_double();
            px += margin[z];
        }
        ate += (hits[1] / margin[1] - hits[0] / margin[0]) * px;
    }
    return ate;
}

// --------------------------------------------------------------------------
// 1. The three estimator routes agree exactly on positive distributions.
void criterion_route_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 seeds(0xA11CE);
    int checked = 0;
    bool pass = true;
    for (int rep = 0; rep < 1000 && pass; ++rep) {
        const int n = 3 + static_cast<int>(seeds() % 6);
        const auto dist = realize(random_spec(n, seeds()));
        const Rational strat = ate_stratified(dist).ate;
        const Rational via_do = ate_do(dist).ate;
        const Rational via_ipw = ate_ipw(dist, propensity(dist)).ate;
        pass = strat == via_do && strat == via_ipw && strat >= Rational(-1) &&
               strat <= Rational(1);
        ++checked;
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    pass = pass && elapsed < 10000;
    report(1, "route equivalence (stratified = do = ipw, exact)", pass,
           std::to_string(checked) + " distributions, " + std::to_string(elapsed) + " ms");
}

// --------------------------------------------------------------------------
// 2. Pooling exactly tied strata leaves the estimate unchanged.
void criterion_merge_invariance() {
    std::mt19937_64 seeds(0xB0B);
    int checked = 0, float_checked = 0;
    bool pass = true;
    for (int rep = 0; rep < 500 && pass; ++rep) {
        const int n = 4 + static_cast<int>(seeds() % 5);
        const int family = rep % 3;
        RandomSpecOptions options;
        if (family == 0) {
            options.planted = {{PlantedTie::Kind::propensity, 0, 1, std::nullopt}};
        } else if (family == 1) {
            options.planted = {{PlantedTie::Kind::outcome1, 0, 1, std::nullopt},
                               {PlantedTie::Kind::outcome0, 0, 1, std::nullopt}};
        } else {
            options.planted = {{PlantedTie::Kind::outcome1, 0, 1, std::nullopt},
                               {PlantedTie::Kind::outcome0, 2, 3, std::nullopt}};
        }
        const auto dist = realize(random_spec(n, seeds(), options));
        const Rational base = ate_stratified(dist).ate;

        Rational merged;
        if (family == 0) {
            const auto plan = plan_from_partition(
                group_by_propensity(propensity(dist), EqualityMode::exact()), dist.x_space());
            pass = pass && plan.target.cardinality() == n - 1;
            merged = ate_stratified(apply_plan(dist, plan)).ate;
        } else if (family == 1) {
            const auto plan = plan_from_partition(
                group_by_outcome(outcome_scores(dist), EqualityMode::exact(), Arm::both),
                dist.x_space());
            pass = pass && plan.target.cardinality() == n - 1;
            merged = ate_stratified(apply_plan(dist, plan)).ate;
        } else {
            const auto dual =
                dual_plan(outcome_scores(dist), EqualityMode::exact(), dist.x_space());
            pass = pass && dual.treated.target.cardinality() == n - 1 &&
                   dual.control.target.cardinality() == n - 1;
            merged = ate_dual_stratified(dist, dual).ate;
        }
        pass = pass && merged == base;
        pass = pass && std::abs(merged.to_double() - base.to_double()) <= 1e-12;
        if (std::abs(double_route_ate(dist) - base.to_double()) <= 1e-12) ++float_checked;
        pass = pass && float_checked == checked + 1;  // this instance's float path agreed
        ++checked;
    }
    report(2, "merge invariance under exact ties (rational; float path 1e-12)", pass,
           std::to_string(checked) + " planted instances across 3 tie families");
}

// --------------------------------------------------------------------------
// 3. Balance factorization holds iff the pooled strata share treatment rates.
void criterion_balance_iff() {
    std::mt19937_64 seeds(0xC0FFEE);
    int clean = 0, detected = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 3 + static_cast<int>(seeds() % 6);
        const auto tied = realize(random_spec(
            n, seeds(), {.planted = {{PlantedTie::Kind::propensity, 0, 1, std::nullopt}}}));
        const auto plan = plan_from_partition(
            group_by_propensity(propensity(tied), EqualityMode::exact()), tied.x_space());
        const bool holds = oracle::factorization_check(tied, oracle::Variable::x,
                                                       oracle::Variable::z,
                                                       oracle::Variable::bx, &plan)
                               .holds() &&
                           check_balance(tied, plan).clean();
        if (holds) ++clean;

        // Corrupt: pool two strata whose treatment rates differ.
        const auto plain = realize(random_spec(n, seeds()));
        ScorePartition corrupt;
        corrupt.kind = ScoreKind::user;
        corrupt.stratum_count = n;
        const int a = static_cast<int>(seeds() % n);
        int b = static_cast<int>(seeds() % n);
        if (b == a) b = (a + 1) % n;
        corrupt.blocks.push_back({std::min(a, b), std::max(a, b)});
        for (int x = 0; x < n; ++x)
            if (x != a && x != b) corrupt.blocks.push_back({x});
        std::sort(corrupt.blocks.begin(), corrupt.blocks.end());
        corrupt.witnesses.assign(corrupt.blocks.size(), {Rational(0)});
        const auto bad_plan = plan_from_partition(corrupt, plain.x_space());
        const bool caught = !oracle::factorization_check(plain, oracle::Variable::x,
                                                         oracle::Variable::z,
                                                         oracle::Variable::bx, &bad_plan)
                                 .holds() &&
                            !check_balance(plain, bad_plan).clean();
        if (caught) ++detected;
    }
    report(3, "balance iff equal treatment rates (100% detection of corrupted plans)",
           clean == 100 && detected == 100,
           std::to_string(clean) + "/100 exact plans clean, " + std::to_string(detected) +
               "/100 corrupted plans flagged");
}

// --------------------------------------------------------------------------
// 4. With the outcome independent of treatment within strata, a mixture tie
//    planted behind a propensity tie cascades: two merges, and the pooled
//    blocks keep the outcome independent of treatment.
void criterion_cascade() {
    std::mt19937_64 seeds(0xDEED);
    int checked = 0;
    bool pass = true;
    for (int rep = 0; rep < 100 && pass; ++rep) {
        const int n = 4 + static_cast<int>(seeds() % 5);
        const auto dist = realize(
            random_spec(n, seeds(),
                        {.planted = {{PlantedTie::Kind::cascade, 0, 1, std::nullopt}},
                         .outcome_independent_of_z = true}));
        pass = oracle::factorization_check(dist, oracle::Variable::y, oracle::Variable::z,
                                           oracle::Variable::x)
                   .holds();
        const auto result = cascade(dist, default_cascade_policy(), EqualityMode::exact());
        pass = pass && result.merge_count() >= 2;
        pass = pass && result.final_dist.cardinality() <= n - 2;
        pass = pass && oracle::factorization_check(dist, oracle::Variable::y,
                                                   oracle::Variable::z, oracle::Variable::bx,
                                                   &result.composed)
                           .holds();
        ++checked;
    }
    report(4, "sequential cascade: 2+ merges and outcome-treatment independence kept", pass,
           std::to_string(checked) + " constructed instances");
}

// --------------------------------------------------------------------------
// 5. The cascade reaches the exhaustive minimum block count.
void criterion_minimality() {
    std::mt19937_64 seeds(0xE55);
    int checked = 0;
    bool pass = true;
    for (int rep = 0; rep < 150 && pass; ++rep) {
        const int family = rep % 5;
        int n = 0;
        RandomSpecOptions options;
        if (family == 0) {
            n = 3 + static_cast<int>(seeds() % 6);
            options.planted = {{PlantedTie::Kind::propensity, 0, 1, std::nullopt}};
        } else if (family == 1) {
            n = 3 + static_cast<int>(seeds() % 6);
            options.planted = {{PlantedTie::Kind::outcome1, 0, 1, std::nullopt},
                               {PlantedTie::Kind::outcome0, 0, 1, std::nullopt}};
        } else if (family == 2) {
            n = 3 + static_cast<int>(seeds() % 6);
            options.planted = {{PlantedTie::Kind::cascade, 0, 1, std::nullopt}};
        } else if (family == 3) {
            n = 4 + static_cast<int>(seeds() % 5);
            options.planted = {{PlantedTie::Kind::propensity, 0, 1, std::nullopt},
                               {PlantedTie::Kind::outcome1, 2, 3, std::nullopt},
                               {PlantedTie::Kind::outcome0, 2, 3, std::nullopt}};
        } else {
            n = 5 + static_cast<int>(seeds() % 4);
            options.planted = {{PlantedTie::Kind::cascade, 0, 1, 2},
                               {PlantedTie::Kind::propensity, 3, 4, std::nullopt}};
        }
        const auto dist = realize(random_spec(n, seeds(), options));
        const auto result = cascade(dist, default_cascade_policy(), EqualityMode::exact());
        const auto minimum = oracle::exhaustive_min_cardinality(dist);
        pass = result.final_dist.cardinality() == minimum.min_blocks;
        ++checked;
    }
    report(5, "cascade cardinality equals the exhaustive minimum", pass,
           std::to_string(checked) + " planted instances across 5 families");
}

// --------------------------------------------------------------------------
// 6. Misspecified scores: harmless for grouping when order-isomorphic,
//    harmful as weighting denominators.
void criterion_misspecification() {
    std::mt19937_64 seeds(0xF00D);
    int checked = 0;
    bool pass = true;
    for (int rep = 0; rep < 100 && pass; ++rep) {
        const int n = 3 + static_cast<int>(seeds() % 6);
        const auto dist = realize(random_spec(
            n, seeds(), {.planted = {{PlantedTie::Kind::propensity, 0, 1, std::nullopt}}}));
        const auto true_scores = propensity(dist);
        std::vector<Rational> skewed;
        for (const auto& v : true_scores)
            skewed.push_back((Rational(3) * v + Rational(2)) / Rational(7));

        const auto true_partition = group_by_propensity(true_scores, EqualityMode::exact());
        const auto skewed_partition = group_values(skewed, EqualityMode::exact());
        pass = true_partition.blocks == skewed_partition.blocks;

        const Rational base = ate_stratified(dist).ate;
        const auto plan = plan_from_partition(skewed_partition, dist.x_space());
        pass = pass && ate_stratified(apply_plan(dist, plan)).ate == base;
        ++checked;
    }

    // Constructed confounded instance: swapped denominators move the
    // estimate far from the truth.
    const auto dist = test::dist_from_params(
        {R(1, 2), R(1, 2)}, {R(1, 5), R(4, 5)},
        {{{R(1, 10), R(1, 5)}}, {{R(7, 10), R(9, 10)}}});
    const Rational truth = ate_stratified(dist).ate;
    const Rational wrong = ate_ipw(dist, std::vector<Rational>{R(4, 5), R(1, 5)}).ate;
    const Rational delta = (wrong - truth).abs();
    pass = pass && truth == R(3, 20) && delta > R(1, 20);

    report(6, "misspecified scores: grouping safe, weighting unsafe", pass,
           std::to_string(checked) + " grouping instances; weighting delta = " + delta.str() +
               " (" + delta.decimal_str() + ") > 0.05");
}

// --------------------------------------------------------------------------
// 7. Estimates from sampled data land near the generating truth.
void criterion_sampling() {
    const auto spec = random_spec(4, 0x5EED);
    const auto dist = realize(spec);
    const double truth = ate_stratified(dist).ate.to_double();
    const std::int64_t n = 100000;

    // Delta-method standard error from the generating parameters: arm-rate
    // noise plus the stratum-weight term.
    double variance = 0.0;
    double second_moment = 0.0;
    for (int x = 0; x < dist.cardinality(); ++x) {
        const double px = dist.marginal_x(x).to_double();
        const double lz = dist.z_given_x(x).to_double();
        const double p1 = dist.y_given_xz(x, 1).to_double();
        const double p0 = dist.y_given_xz(x, 0).to_double();
        const double tau = p1 - p0;
        variance += px * px *
                    (p1 * (1 - p1) / (static_cast<double>(n) * px * lz) +
                     p0 * (1 - p0) / (static_cast<double>(n) * px * (1 - lz)));
        second_moment += tau * tau * px;
    }
    variance += (second_moment - truth * truth) / static_cast<double>(n);
    const double se = std::sqrt(variance);

    int within = 0;
    const int runs = 20;
    for (int run = 0; run < runs; ++run) {
        const auto records = sample(dist, n, 7000 + static_cast<std::uint64_t>(run));
        const auto estimate =
            ate_stratified(to_distribution(ContingencyTable::from_records(records)));
        if (std::abs(estimate.ate.to_double() - truth) <= 3.0 * se) ++within;
    }
    const bool pass = within >= 19;  // >= 95% of runs
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d/%d runs within 3 SE (SE = %.3e, n = %lld)",
                  within, runs, se, static_cast<long long>(n));
    report(7, "sampling consistency at n = 1e5 over 20 seeds", pass, detail);
}

// --------------------------------------------------------------------------
// 8. The count-level brute-force estimator agrees with the library.
void criterion_oracle_agreement() {
    std::mt19937_64 rng(0x0DDBA11);
    int checked = 0;
    bool pass = true;
    for (int rep = 0; rep < 1000 && pass; ++rep) {
        const auto table = test::random_table(rng);
        pass = oracle::brute_ate(table) == ate_stratified(to_distribution(table)).ate;
        ++checked;
    }
    report(8, "brute-force oracle equals the stratified estimator", pass,
           std::to_string(checked) + " random tables, exact equality");
}

}  // namespace

int main() {
    criterion_route_equivalence();
    criterion_merge_invariance();
    criterion_balance_iff();
    criterion_cascade();
    criterion_minimality();
    criterion_misspecification();
    criterion_sampling();
    criterion_oracle_agreement();

    bool all = true;
    for (const auto& c : g_results) {
        std::printf("[%s] criterion %d: %s — %s\n", c.pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES above");
    return all ? 0 : 1;
}
