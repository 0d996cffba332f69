#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "strata/table.hpp"

namespace strata::test {

inline Rational R(long long num, long long den) { return Rational(num, den); }

/// Builds p(x,z,y) = px * p(z|x) * p(y|x,z) cell by cell, independently of
/// the generator module. pz entries may sit on 0 or 1 here so degenerate
/// cases are constructible.
inline Distribution dist_from_params(const std::vector<Rational>& px,
                                     const std::vector<Rational>& pz,
                                     const std::vector<std::array<Rational, 2>>& py,
                                     std::vector<std::string> labels = {}) {
    const int n = static_cast<int>(px.size());
    if (labels.empty())
        for (int i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
    std::vector<std::array<Rational, 4>> cells(n);
    const Rational one(1);
    for (int x = 0; x < n; ++x)
        for (int z = 0; z < 2; ++z) {
            const Rational mass = px[x] * (z ? pz[x] : one - pz[x]);
            cells[x][cell_index(z, 1)] = mass * py[x][z];
            cells[x][cell_index(z, 0)] = mass * (one - py[x][z]);
        }
    return Distribution(CategoricalSpace(std::move(labels)), std::move(cells));
}

inline ContingencyTable table_from_cells(std::vector<std::string> labels,
                                         std::vector<std::array<std::int64_t, 4>> cells) {
    return ContingencyTable(CategoricalSpace(std::move(labels)), std::move(cells));
}

/// Random table with positive (x, z) margins in every stratum.
inline ContingencyTable random_table(std::mt19937_64& rng, int max_strata = 8,
                                     int max_cell = 40) {
    std::uniform_int_distribution<int> strata_draw(1, max_strata);
    std::uniform_int_distribution<std::int64_t> cell_draw(0, max_cell);
    std::uniform_int_distribution<int> coin(0, 1);
    const int n = strata_draw(rng);
    std::vector<std::string> labels;
    std::vector<std::array<std::int64_t, 4>> cells(n);
    for (int x = 0; x < n; ++x) {
        labels.push_back("s" + std::to_string(x));
        for (int z = 0; z < 2; ++z) {
            cells[x][cell_index(z, 0)] = cell_draw(rng);
            cells[x][cell_index(z, 1)] = cell_draw(rng);
            if (cells[x][cell_index(z, 0)] + cells[x][cell_index(z, 1)] == 0)
                cells[x][cell_index(z, coin(rng))] = 1;
        }
    }
    return table_from_cells(std::move(labels), std::move(cells));
}

/// Random exact-rational parameters with all scores distinct; small
/// denominators keep arithmetic readable in failure output.
inline Distribution random_positive_dist(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> den_draw(2, 60);
    auto fresh = [&](std::vector<Rational>& used) {
        while (true) {
            const int den = den_draw(rng);
            std::uniform_int_distribution<int> num_draw(1, den - 1);
            Rational r(num_draw(rng), den);
            bool seen = false;
            for (const auto& u : used) seen = seen || u == r;
            if (!seen) {
                used.push_back(r);
                return r;
            }
        }
    };
    std::uniform_int_distribution<int> weight_draw(1, 30);
    std::vector<Rational> px(n);
    long long total = 0;
    std::vector<long long> weights(n);
    for (auto& w : weights) {
        w = weight_draw(rng);
        total += w;
    }
    for (int x = 0; x < n; ++x) px[x] = Rational(weights[x], total);
    std::vector<Rational> pz(n), used_pz, used_p0, used_p1;
    std::vector<std::array<Rational, 2>> py(n);
    for (int x = 0; x < n; ++x) {
        pz[x] = fresh(used_pz);
        py[x][0] = fresh(used_p0);
        py[x][1] = fresh(used_p1);
    }
    return dist_from_params(px, pz, py);
}

}  // namespace strata::test
