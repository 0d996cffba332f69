#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "strata/table.hpp"

namespace strata {

/// An equality constraint baked into generator parameters. `propensity`
/// copies p(Z=1|x_i) onto x_j; `outcome1`/`outcome0` copy one outcome-score
/// component; `cascade` first ties the propensities of (i, j) and then
/// solves p(y|x_j, z) for both z so that the pooled block's outcome
/// conditionals land exactly on those of a third stratum (`target`,
/// defaulting to the smallest index outside {i, j}), which a sequential
/// merge discovers only after the first pooling.
struct PlantedTie {
    enum class Kind { propensity, outcome1, outcome0, cascade };
    Kind kind = Kind::propensity;
    int i = 0;
    int j = 0;
    std::optional<int> target;  // cascade only
};

const char* planted_tie_kind_name(PlantedTie::Kind kind);

/// Parameters of the three-factor model p(x) p(z|x) p(y|x,z). Construction
/// applies the planted ties to the parameters (so the ties hold exactly in
/// the realized distribution) and then validates:
///   px > 0 summing to 1, pz strictly inside (0,1), py within [0,1].
class GeneratorSpec {
public:
    GeneratorSpec(std::vector<std::string> labels, std::vector<Rational> px,
                  std::vector<Rational> pz_given_x,
                  std::vector<std::array<Rational, 2>> py_given_xz,  // [x][z]
                  std::vector<PlantedTie> planted, std::uint64_t seed);

    int n_strata() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Rational>& px() const { return px_; }
    const std::vector<Rational>& pz_given_x() const { return pz_; }
    const std::vector<std::array<Rational, 2>>& py_given_xz() const { return py_; }
    const std::vector<PlantedTie>& planted() const { return planted_; }
    std::uint64_t seed() const { return seed_; }

    /// Resolved third stratum of a cascade tie.
    static int cascade_target(const PlantedTie& tie);

private:
    std::vector<std::string> labels_;
    std::vector<Rational> px_;
    std::vector<Rational> pz_;
    std::vector<std::array<Rational, 2>> py_;
    std::vector<PlantedTie> planted_;
    std::uint64_t seed_;
};

/// Default labels "x1".."xn", zero-padded so lexicographic order matches
/// numeric order.
std::vector<std::string> default_labels(int n_strata);

/// The joint distribution whose conditionals equal the spec parameters
/// exactly.
Distribution realize(const GeneratorSpec& spec);

/// n i.i.d. draws, deterministic for a given seed (mt19937_64 with a fixed
/// 53-bit uniform mapping, inverse-CDF over the cells).
std::vector<Record> sample(const Distribution& dist, std::int64_t n, std::uint64_t seed);

struct RandomSpecOptions {
    int max_denominator = 1000;
    std::vector<PlantedTie> planted;
    /// Force p(y|x,0) == p(y|x,1) at every stratum (outcome independent of
    /// treatment within strata).
    bool outcome_independent_of_z = false;
};

/// Seeded random parameters with bounded denominators. Values are drawn
/// distinct per score (rejection sampling), so the only score equalities in
/// the realized distribution are the planted ones; infeasible cascade
/// plants are retried with fresh draws a bounded number of times.
GeneratorSpec random_spec(int n_strata, std::uint64_t seed, const RandomSpecOptions& options = {});

}  // namespace strata
