#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "strata/errors.hpp"
#include "strata/rational.hpp"

namespace strata {

/// One observation: confounder stratum label, binary treatment, binary outcome.
struct Record {
    std::string x;
    int z = 0;
    int y = 0;
};

/// Ordered set of distinct stratum labels. Labels are opaque strings;
/// callers that build spaces from data sort them lexicographically.
class CategoricalSpace {
public:
    CategoricalSpace() = default;  // placeholder; real spaces have >= 1 label
    explicit CategoricalSpace(std::vector<std::string> labels);

    int cardinality() const { return static_cast<int>(labels_.size()); }
    const std::string& label(int i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }

    bool contains(const std::string& label) const { return index_.count(label) > 0; }
    int index_of(const std::string& label) const;

    friend bool operator==(const CategoricalSpace& a, const CategoricalSpace& b) {
        return a.labels_ == b.labels_;
    }

private:
    std::vector<std::string> labels_;
    std::map<std::string, int> index_;
};

// Cells are laid out [x][z*2 + y].
inline constexpr int cell_index(int z, int y) { return z * 2 + y; }

/// Integer counts n(x, z, y) over a stratum space with binary z and y.
/// This is the single source of truth for everything estimated from data.
class ContingencyTable {
public:
    ContingencyTable(CategoricalSpace x_space, std::vector<std::array<std::int64_t, 4>> cells);

    /// Tallies records; the stratum space is the sorted set of observed labels.
    static ContingencyTable from_records(const std::vector<Record>& records);

    const CategoricalSpace& x_space() const { return x_space_; }
    int cardinality() const { return x_space_.cardinality(); }

    std::int64_t count(int x, int z, int y) const { return cells_.at(x)[cell_index(z, y)]; }
    std::int64_t margin_xz(int x, int z) const;
    std::int64_t margin_x(int x) const;
    std::int64_t total() const { return total_; }

private:
    CategoricalSpace x_space_;
    std::vector<std::array<std::int64_t, 4>> cells_;
    std::int64_t total_;
};

/// Exact joint distribution p(x, z, y): non-negative rationals summing to 1.
class Distribution {
public:
    Distribution(CategoricalSpace x_space, std::vector<std::array<Rational, 4>> cells);

    const CategoricalSpace& x_space() const { return x_space_; }
    int cardinality() const { return x_space_.cardinality(); }

    const Rational& joint(int x, int z, int y) const { return cells_.at(x)[cell_index(z, y)]; }
    Rational marginal_x(int x) const;
    Rational margin_xz(int x, int z) const;
    Rational marginal_z(int z) const;

    /// p(Z=1 | X=x). Throws PositivityViolation when p(x) = 0.
    Rational z_given_x(int x) const;
    /// p(Y=1 | X=x, Z=z). Throws PositivityViolation when p(x, z) = 0.
    Rational y_given_xz(int x, int z) const;
    /// p(Y=1 | X=x). Throws PositivityViolation when p(x) = 0.
    Rational y_given_x(int x) const;
    /// p(Y=1 | Z=z), the naive group rate. Throws PositivityViolation when p(z) = 0.
    Rational y_given_z(int z) const;

private:
    CategoricalSpace x_space_;
    std::vector<std::array<Rational, 4>> cells_;
};

/// Empirical plug-in: p(x,z,y) = n(x,z,y) / total, exactly.
Distribution to_distribution(const ContingencyTable& table);

// Conditional extraction over all strata. Each checks positivity of its
// conditioning margin and throws PositivityViolation naming the stratum.
std::vector<Rational> x_marginal(const Distribution& dist);
std::vector<Rational> z_given_x_all(const Distribution& dist);
std::vector<Rational> y_given_x_all(const Distribution& dist);
std::vector<std::array<Rational, 2>> y_given_xz_all(const Distribution& dist);  // [x][z]

}  // namespace strata
