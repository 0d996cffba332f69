#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "strata/dgp.hpp"
#include "strata/scores.hpp"
#include "strata/stratify.hpp"

using namespace strata;
using test::R;

TEST_CASE("realize reproduces the spec parameters exactly") {
    const auto spec = random_spec(5, 101);
    const auto dist = realize(spec);
    REQUIRE(dist.cardinality() == 5);
    for (int x = 0; x < 5; ++x) {
        CHECK(dist.marginal_x(x) == spec.px()[x]);
        CHECK(dist.z_given_x(x) == spec.pz_given_x()[x]);
        for (int z = 0; z < 2; ++z) CHECK(dist.y_given_xz(x, z) == spec.py_given_xz()[x][z]);
    }
}

TEST_CASE("default labels sort numerically") {
    CHECK(default_labels(3) == std::vector<std::string>{"x1", "x2", "x3"});
    const auto labels = default_labels(12);
    CHECK(labels[0] == "x01");
    CHECK(labels[11] == "x12");
    CHECK(std::is_sorted(labels.begin(), labels.end()));
}

TEST_CASE("a propensity tie is discovered by grouping") {
    const auto spec =
        random_spec(4, 102, {.planted = {{PlantedTie::Kind::propensity, 0, 1, std::nullopt}}});
    const auto dist = realize(spec);
    const auto part = group_by_propensity(propensity(dist), EqualityMode::exact());
    CHECK(part.block_count() == 3);
    CHECK(part.blocks[0] == std::vector<int>{0, 1});
}

TEST_CASE("arm-specific ties land in the right component") {
    const auto spec = random_spec(
        4, 103,
        {.planted = {{PlantedTie::Kind::outcome1, 0, 1, std::nullopt},
                     {PlantedTie::Kind::outcome0, 2, 3, std::nullopt}}});
    const auto dist = realize(spec);
    const auto scores = outcome_scores(dist);
    CHECK(scores[0].p1 == scores[1].p1);
    CHECK(scores[0].p0 != scores[1].p0);
    CHECK(scores[2].p0 == scores[3].p0);
    CHECK(scores[2].p1 != scores[3].p1);
    CHECK(group_by_outcome(scores, EqualityMode::exact(), Arm::both).is_identity());
    CHECK(group_by_outcome(scores, EqualityMode::exact(), Arm::treated_only).block_count() == 3);
    CHECK(group_by_outcome(scores, EqualityMode::exact(), Arm::control_only).block_count() == 3);
}

TEST_CASE("unplanted specs have no score ties at all") {
    for (std::uint64_t seed : {11u, 22u, 33u, 44u, 55u}) {
        const auto dist = realize(random_spec(6, seed));
        CHECK(group_by_propensity(propensity(dist), EqualityMode::exact()).is_identity());
        CHECK(group_by_outcome(outcome_scores(dist), EqualityMode::exact(), Arm::both)
                  .is_identity());
        CHECK(group_by_outcome(outcome_scores(dist), EqualityMode::exact(), Arm::treated_only)
                  .is_identity());
        CHECK(group_by_outcome(outcome_scores(dist), EqualityMode::exact(), Arm::control_only)
                  .is_identity());
    }
}

TEST_CASE("a cascade tie is invisible before the merge and found after it") {
    const auto spec =
        random_spec(5, 104, {.planted = {{PlantedTie::Kind::cascade, 0, 1, std::nullopt}}});
    const auto dist = realize(spec);
    CHECK(group_by_outcome(outcome_scores(dist), EqualityMode::exact(), Arm::both).is_identity());
    const auto result = cascade(dist, default_cascade_policy(), EqualityMode::exact());
    CHECK(result.merge_count() == 2);
    CHECK(result.final_dist.cardinality() == 3);
}

TEST_CASE("infeasible mixture plants are rejected") {
    // w = 9/10 pulls the solved value far below zero: p(y|x3) = 1/20 cannot
    // be written as (9/10) * (9/10) + (1/10) * v with v in [0,1].
    CHECK_THROWS_AS(GeneratorSpec(default_labels(3), {R(9, 10), R(1, 100), R(9, 100)},
                                  {R(1, 2), R(1, 3), R(1, 4)},
                                  {{{R(9, 10), R(9, 10)}},
                                   {{R(1, 2), R(1, 2)}},
                                   {{R(1, 20), R(1, 20)}}},
                                  {{PlantedTie::Kind::cascade, 0, 1, std::nullopt}}, 7),
                    InfeasiblePlant);
}

TEST_CASE("generator validation") {
    CHECK_THROWS_AS(GeneratorSpec(default_labels(2), {R(1, 2), R(1, 3)}, {R(1, 2), R(1, 2)},
                                  {{{R(1, 2), R(1, 2)}}, {{R(1, 2), R(1, 2)}}}, {}, 0),
                    InvalidValue);  // px does not sum to 1
    CHECK_THROWS_AS(GeneratorSpec(default_labels(2), {R(1, 2), R(1, 2)}, {Rational(1), R(1, 2)},
                                  {{{R(1, 2), R(1, 2)}}, {{R(1, 2), R(1, 2)}}}, {}, 0),
                    InvalidValue);  // pz on the boundary
    CHECK_THROWS_AS(GeneratorSpec(default_labels(2), {R(1, 2), R(1, 2)}, {R(1, 2), R(1, 3)},
                                  {{{R(3, 2), R(1, 2)}}, {{R(1, 2), R(1, 2)}}}, {}, 0),
                    InvalidValue);  // py above 1
    CHECK_THROWS_AS(GeneratorSpec(default_labels(2), {R(1, 2), R(1, 2)}, {R(1, 2), R(1, 3)},
                                  {{{R(1, 2), R(1, 2)}}, {{R(1, 2), R(1, 2)}}},
                                  {{PlantedTie::Kind::propensity, 0, 0, std::nullopt}}, 0),
                    InvalidValue);  // tie with i == j
}

TEST_CASE("sampling is seed-deterministic") {
    const auto dist = realize(random_spec(3, 105));
    const auto a = sample(dist, 500, 9001);
    const auto b = sample(dist, 500, 9001);
    REQUIRE(a.size() == 500);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].z == b[i].z);
        CHECK(a[i].y == b[i].y);
    }
    const auto c = sample(dist, 500, 9002);
    bool any_difference = false;
    for (std::size_t i = 0; i < c.size(); ++i)
        any_difference = any_difference || c[i].x != a[i].x || c[i].z != a[i].z ||
                         c[i].y != a[i].y;
    CHECK(any_difference);
}

TEST_CASE("a single draw is one valid record") {
    const auto dist = realize(random_spec(3, 106));
    const auto records = sample(dist, 1, 1);
    REQUIRE(records.size() == 1);
    CHECK(dist.x_space().contains(records[0].x));
    CHECK((records[0].z == 0 || records[0].z == 1));
    CHECK((records[0].y == 0 || records[0].y == 1));
    CHECK_THROWS_AS(sample(dist, 0, 1), InvalidValue);
}

TEST_CASE("sampled cell frequencies track the generating cells") {
    const auto dist = realize(random_spec(3, 107));
    const std::int64_t n = 100000;
    int cells = 0, within = 0;
    for (int run = 0; run < 20; ++run) {
        const auto table =
            ContingencyTable::from_records(sample(dist, n, 5000 + static_cast<std::uint64_t>(run)));
        for (int x = 0; x < dist.cardinality(); ++x) {
            const int tx = table.x_space().index_of(dist.x_space().label(x));
            for (int z = 0; z < 2; ++z)
                for (int y = 0; y < 2; ++y) {
                    const double p = dist.joint(x, z, y).to_double();
                    const double observed =
                        static_cast<double>(table.count(tx, z, y)) / static_cast<double>(n);
                    const double se = std::sqrt(p * (1 - p) / static_cast<double>(n));
                    ++cells;
                    if (std::abs(observed - p) <= 3.0 * se) ++within;
                }
        }
    }
    // 3 standard errors should hold for at least 95% of cells over 20 seeds.
    CHECK(within * 100 >= cells * 95);
}
