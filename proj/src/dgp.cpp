#include "strata/dgp.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace strata {

const char* planted_tie_kind_name(PlantedTie::Kind kind) {
    switch (kind) {
        case PlantedTie::Kind::propensity: return "propensity-tie";
        case PlantedTie::Kind::outcome1: return "outcome1-tie";
        case PlantedTie::Kind::outcome0: return "outcome0-tie";
        case PlantedTie::Kind::cascade: return "cascade-tie";
    }
    return "?";
}

int GeneratorSpec::cascade_target(const PlantedTie& tie) {
    if (tie.target) return *tie.target;
    for (int t = 0;; ++t)
        if (t != tie.i && t != tie.j) return t;
}

GeneratorSpec::GeneratorSpec(std::vector<std::string> labels, std::vector<Rational> px,
                             std::vector<Rational> pz_given_x,
                             std::vector<std::array<Rational, 2>> py_given_xz,
                             std::vector<PlantedTie> planted, std::uint64_t seed)
    : labels_(std::move(labels)),
      px_(std::move(px)),
      pz_(std::move(pz_given_x)),
      py_(std::move(py_given_xz)),
      planted_(std::move(planted)),
      seed_(seed) {
    const int n = static_cast<int>(labels_.size());
    if (n == 0) throw InvalidValue("GeneratorSpec: no strata");
    if (static_cast<int>(px_.size()) != n || static_cast<int>(pz_.size()) != n ||
        static_cast<int>(py_.size()) != n)
        throw InvalidValue("GeneratorSpec: parameter vectors must have one entry per stratum");

    // Plants rewrite parameters so the tie holds exactly in the realization.
    for (const PlantedTie& tie : planted_) {
        if (tie.i < 0 || tie.i >= n || tie.j < 0 || tie.j >= n || tie.i == tie.j)
            throw InvalidValue("GeneratorSpec: planted tie indices out of range or equal");
        switch (tie.kind) {
            case PlantedTie::Kind::propensity:
                pz_[tie.j] = pz_[tie.i];
                break;
            case PlantedTie::Kind::outcome1:
                py_[tie.j][1] = py_[tie.i][1];
                break;
            case PlantedTie::Kind::outcome0:
                py_[tie.j][0] = py_[tie.i][0];
                break;
            case PlantedTie::Kind::cascade: {
                const int t = cascade_target(tie);
                if (t < 0 || t >= n || t == tie.i || t == tie.j)
                    throw InvalidValue("GeneratorSpec: cascade target out of range");
                pz_[tie.j] = pz_[tie.i];
                // After pooling (i, j), the block's outcome conditionals are
                // the mixture w*py[i] + (1-w)*py[j] with w = px_i/(px_i+px_j)
                // in both arms (the shared propensity makes the weight
                // arm-independent). Solve py[j] so the mixture equals py[t].
                const Rational w = px_[tie.i] / (px_[tie.i] + px_[tie.j]);
                const Rational one_minus_w = Rational(1) - w;
                for (int z = 0; z < 2; ++z) {
                    const Rational solved = (py_[t][z] - w * py_[tie.i][z]) / one_minus_w;
                    if (solved < Rational(0) || solved > Rational(1))
                        throw InfeasiblePlant(
                            "cascade tie (" + std::to_string(tie.i) + "," +
                            std::to_string(tie.j) + ") -> " + std::to_string(t) +
                            ": solved p(y|x_j,z=" + std::to_string(z) + ") = " + solved.str() +
                            " outside [0,1]");
                    py_[tie.j][z] = solved;
                }
                break;
            }
        }
    }

    CategoricalSpace space(labels_);  // validates uniqueness/non-emptiness
    Rational px_sum;
    for (int x = 0; x < n; ++x) {
        if (px_[x] <= Rational(0)) throw InvalidValue("GeneratorSpec: px must be positive");
        px_sum += px_[x];
        if (pz_[x] <= Rational(0) || pz_[x] >= Rational(1))
            throw InvalidValue("GeneratorSpec: pz_given_x must lie strictly inside (0,1)");
        for (int z = 0; z < 2; ++z)
            if (py_[x][z] < Rational(0) || py_[x][z] > Rational(1))
                throw InvalidValue("GeneratorSpec: py_given_xz must lie in [0,1]");
    }
    if (px_sum != Rational(1))
        throw InvalidValue("GeneratorSpec: px sums to " + px_sum.str() + ", expected 1/1");
}

std::vector<std::string> default_labels(int n_strata) {
    if (n_strata < 1) throw InvalidValue("default_labels: need at least one stratum");
    int width = 1;
    for (int v = n_strata; v >= 10; v /= 10) ++width;
    std::vector<std::string> labels(n_strata);
    for (int i = 0; i < n_strata; ++i) {
        std::string digits = std::to_string(i + 1);
        labels[i] = "x" + std::string(width - digits.size(), '0') + digits;
    }
    return labels;
}

Distribution realize(const GeneratorSpec& spec) {
    const int n = spec.n_strata();
    std::vector<std::array<Rational, 4>> cells(n);
    const Rational one(1);
    for (int x = 0; x < n; ++x) {
        const Rational& px = spec.px()[x];
        for (int z = 0; z < 2; ++z) {
            const Rational pz = z ? spec.pz_given_x()[x] : one - spec.pz_given_x()[x];
            const Rational py1 = spec.py_given_xz()[x][z];
            cells[x][cell_index(z, 1)] = px * pz * py1;
            cells[x][cell_index(z, 0)] = px * pz * (one - py1);
        }
    }
    return Distribution(CategoricalSpace(spec.labels()), std::move(cells));
}

namespace {

// 53-bit uniform in [0,1); fixed mapping so output is identical across
// standard library implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<Record> sample(const Distribution& dist, std::int64_t n, std::uint64_t seed) {
    if (n < 1) throw InvalidValue("sample: n must be at least 1");
    const int strata = dist.cardinality();
    std::vector<double> cumulative;
    cumulative.reserve(static_cast<std::size_t>(strata) * 4);
    double acc = 0.0;
    for (int x = 0; x < strata; ++x)
        for (int c = 0; c < 4; ++c) {
            acc += dist.joint(x, c / 2, c % 2).to_double();
            cumulative.push_back(acc);
        }
    cumulative.back() = 1.0;  // guard against rounding shortfall

    std::mt19937_64 rng(seed);
    std::vector<Record> records;
    records.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        const double u = uniform01(rng);
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const int cell = static_cast<int>(it - cumulative.begin());
        records.push_back(Record{dist.x_space().label(cell / 4), (cell % 4) / 2, cell % 2});
    }
    return records;
}

namespace {

class ParameterDraw {
public:
    ParameterDraw(std::mt19937_64& rng, int max_denominator)
        : rng_(rng), max_den_(max_denominator) {
        if (max_denominator < 4) throw InvalidValue("random_spec: max_denominator too small");
    }

    // Rational strictly inside (0,1), distinct from everything in `used`.
    Rational open_unit(std::set<Rational>& used) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            std::uniform_int_distribution<int> den_draw(2, max_den_);
            const int den = den_draw(rng_);
            std::uniform_int_distribution<int> num_draw(1, den - 1);
            Rational r(num_draw(rng_), den);
            if (used.insert(r).second) return r;
        }
        throw Error("random_spec: could not draw a fresh rational; widen max_denominator");
    }

private:
    std::mt19937_64& rng_;
    int max_den_;
};

}  // namespace

GeneratorSpec random_spec(int n_strata, std::uint64_t seed, const RandomSpecOptions& options) {
    if (n_strata < 1) throw InvalidValue("random_spec: need at least one stratum");

    std::mt19937_64 rng(seed);
    // Plants can be infeasible for a particular draw (a solved mixture value
    // escaping [0,1]); retry with fresh parameters.
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Rational> px(n_strata);
        std::uniform_int_distribution<int> weight_draw(1, options.max_denominator);
        std::vector<long long> weights(n_strata);
        long long total = 0;
        for (auto& w : weights) {
            w = weight_draw(rng);
            total += w;
        }
        for (int x = 0; x < n_strata; ++x) px[x] = Rational(weights[x], total);

        ParameterDraw draw(rng, options.max_denominator);
        std::set<Rational> used_pz;
        std::vector<Rational> pz(n_strata);
        for (auto& v : pz) v = draw.open_unit(used_pz);

        std::vector<std::array<Rational, 2>> py(n_strata);
        std::set<Rational> used_p0, used_p1;
        for (int x = 0; x < n_strata; ++x) {
            py[x][0] = draw.open_unit(used_p0);
            py[x][1] = options.outcome_independent_of_z ? py[x][0] : draw.open_unit(used_p1);
        }

        try {
            return GeneratorSpec(default_labels(n_strata), std::move(px), std::move(pz),
                                 std::move(py), options.planted, seed);
        } catch (const InfeasiblePlant&) {
            if (attempt == 999) throw;
        }
    }
    throw InfeasiblePlant("random_spec: plants stayed infeasible across all retries");
}

}  // namespace strata
