#include "strata/table.hpp"

#include <algorithm>
#include <numeric>

namespace strata {

CategoricalSpace::CategoricalSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw InvalidValue("CategoricalSpace: no labels");
    for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
        if (labels_[i].empty()) throw InvalidValue("CategoricalSpace: empty label");
        if (!index_.emplace(labels_[i], i).second)
            throw InvalidValue("CategoricalSpace: duplicate label '" + labels_[i] + "'");
    }
}

int CategoricalSpace::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw InvalidValue("unknown stratum label '" + label + "'");
    return it->second;
}

ContingencyTable::ContingencyTable(CategoricalSpace x_space,
                                   std::vector<std::array<std::int64_t, 4>> cells)
    : x_space_(std::move(x_space)), cells_(std::move(cells)), total_(0) {
    if (static_cast<int>(cells_.size()) != x_space_.cardinality())
        throw InvalidValue("ContingencyTable: cell rows do not match stratum space");
    for (const auto& row : cells_)
        for (auto c : row) {
            if (c < 0) throw InvalidValue("ContingencyTable: negative count");
            total_ += c;
        }
    if (total_ == 0) throw EmptyInput("ContingencyTable: all counts are zero");
}

ContingencyTable ContingencyTable::from_records(const std::vector<Record>& records) {
    if (records.empty()) throw EmptyInput("no records");
    std::map<std::string, std::array<std::int64_t, 4>> tally;
    for (const auto& r : records) {
        if (r.x.empty()) throw InvalidValue("record with empty x label");
        if (r.z != 0 && r.z != 1)
            throw InvalidValue("record with z=" + std::to_string(r.z) + ", expected 0 or 1");
        if (r.y != 0 && r.y != 1)
            throw InvalidValue("record with y=" + std::to_string(r.y) + ", expected 0 or 1");
        auto [it, inserted] = tally.try_emplace(r.x, std::array<std::int64_t, 4>{0, 0, 0, 0});
        ++it->second[cell_index(r.z, r.y)];
    }
    std::vector<std::string> labels;
    std::vector<std::array<std::int64_t, 4>> cells;
    labels.reserve(tally.size());
    cells.reserve(tally.size());
    for (auto& [label, row] : tally) {  // std::map iterates in sorted label order
        labels.push_back(label);
        cells.push_back(row);
    }
    return ContingencyTable(CategoricalSpace(std::move(labels)), std::move(cells));
}

std::int64_t ContingencyTable::margin_xz(int x, int z) const {
    return count(x, z, 0) + count(x, z, 1);
}

std::int64_t ContingencyTable::margin_x(int x) const {
    return margin_xz(x, 0) + margin_xz(x, 1);
}

Distribution::Distribution(CategoricalSpace x_space, std::vector<std::array<Rational, 4>> cells)
    : x_space_(std::move(x_space)), cells_(std::move(cells)) {
    if (static_cast<int>(cells_.size()) != x_space_.cardinality())
        throw InvalidValue("Distribution: cell rows do not match stratum space");
    Rational sum;
    for (const auto& row : cells_)
        for (const auto& p : row) {
            if (p.sign() < 0) throw InvalidValue("Distribution: negative probability");
            sum += p;
        }
    if (sum != Rational(1))
        throw InvalidValue("Distribution: probabilities sum to " + sum.str() + ", expected 1/1");
}

Rational Distribution::marginal_x(int x) const {
    const auto& row = cells_.at(x);
    return row[0] + row[1] + row[2] + row[3];
}

Rational Distribution::margin_xz(int x, int z) const {
    return joint(x, z, 0) + joint(x, z, 1);
}

Rational Distribution::marginal_z(int z) const {
    Rational sum;
    for (int x = 0; x < cardinality(); ++x) sum += margin_xz(x, z);
    return sum;
}

Rational Distribution::z_given_x(int x) const {
    const Rational px = marginal_x(x);
    if (px.is_zero()) throw PositivityViolation(x_space_.label(x), -1);
    return margin_xz(x, 1) / px;
}

Rational Distribution::y_given_xz(int x, int z) const {
    const Rational pxz = margin_xz(x, z);
    if (pxz.is_zero()) throw PositivityViolation(x_space_.label(x), z);
    return joint(x, z, 1) / pxz;
}

Rational Distribution::y_given_x(int x) const {
    const Rational px = marginal_x(x);
    if (px.is_zero()) throw PositivityViolation(x_space_.label(x), -1);
    return (joint(x, 0, 1) + joint(x, 1, 1)) / px;
}

Rational Distribution::y_given_z(int z) const {
    const Rational pz = marginal_z(z);
    if (pz.is_zero()) throw PositivityViolation("(any)", z);
    Rational py;
    for (int x = 0; x < cardinality(); ++x) py += joint(x, z, 1);
    return py / pz;
}

Distribution to_distribution(const ContingencyTable& table) {
    const std::int64_t total = table.total();
    if (total == 0) throw EmptyInput("to_distribution: empty table");
    std::vector<std::array<Rational, 4>> cells(table.cardinality());
    for (int x = 0; x < table.cardinality(); ++x)
        for (int z = 0; z < 2; ++z)
            for (int y = 0; y < 2; ++y)
                cells[x][cell_index(z, y)] = Rational(table.count(x, z, y), total);
    return Distribution(table.x_space(), std::move(cells));
}

std::vector<Rational> x_marginal(const Distribution& dist) {
    std::vector<Rational> out(dist.cardinality());
    for (int x = 0; x < dist.cardinality(); ++x) out[x] = dist.marginal_x(x);
    return out;
}

std::vector<Rational> z_given_x_all(const Distribution& dist) {
    std::vector<Rational> out(dist.cardinality());
    for (int x = 0; x < dist.cardinality(); ++x) out[x] = dist.z_given_x(x);
    return out;
}

std::vector<Rational> y_given_x_all(const Distribution& dist) {
    std::vector<Rational> out(dist.cardinality());
    for (int x = 0; x < dist.cardinality(); ++x) out[x] = dist.y_given_x(x);
    return out;
}

std::vector<std::array<Rational, 2>> y_given_xz_all(const Distribution& dist) {
    std::vector<std::array<Rational, 2>> out(dist.cardinality());
    for (int x = 0; x < dist.cardinality(); ++x)
        for (int z = 0; z < 2; ++z) out[x][z] = dist.y_given_xz(x, z);
    return out;
}

}  // namespace strata
