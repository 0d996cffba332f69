#include "strata/oracle.hpp"

#include <array>
#include <bit>
#include <map>

namespace strata {
namespace oracle {

Rational brute_ate(const ContingencyTable& table) {
    const std::int64_t total = table.total();
    Rational sum;
    for (int x = 0; x < table.cardinality(); ++x) {
        const std::int64_t treated = table.margin_xz(x, 1);
        const std::int64_t control = table.margin_xz(x, 0);
        if (treated == 0) throw PositivityViolation(table.x_space().label(x), 1);
        if (control == 0) throw PositivityViolation(table.x_space().label(x), 0);
        const Rational effect =
            Rational(table.count(x, 1, 1), treated) - Rational(table.count(x, 0, 1), control);
        sum += effect * Rational(table.margin_x(x), total);
    }
    return sum;
}

namespace {

constexpr int kMaxExhaustiveStrata = 8;

// Joint mass of a subset of strata, split by (z, y).
struct SubsetMass {
    std::array<Rational, 4> cell;  // [z*2+y]
    Rational pz(int z) const { return cell[z * 2] + cell[z * 2 + 1]; }
    Rational total() const { return cell[0] + cell[1] + cell[2] + cell[3]; }
};

// Two pooled blocks may merge when their treatment rates agree, or when
// their outcome rates agree in both arms (undefined rates never justify a
// merge). Cross-multiplied to stay division-free.
bool merge_justified(const SubsetMass& a, const SubsetMass& b) {
    if (a.pz(1) * b.total() == b.pz(1) * a.total()) return true;
    for (int z = 0; z < 2; ++z) {
        const Rational az = a.pz(z), bz = b.pz(z);
        if (az.is_zero() || bz.is_zero()) return false;
        if (a.cell[z * 2 + 1] * bz != b.cell[z * 2 + 1] * az) return false;
    }
    return true;
}

// Enumerates set partitions as restricted growth strings.
template <typename Visit>
void for_each_partition(int n, Visit visit) {
    std::vector<int> rgs(n, 0);
    std::vector<int> max_prefix(n, 0);
    while (true) {
        visit(rgs);
        int i = n - 1;
        while (i > 0 && rgs[i] == max_prefix[i - 1] + 1) --i;
        if (i == 0) return;
        ++rgs[i];
        for (int k = i; k < n; ++k) {
            if (k > i) rgs[k] = 0;
            max_prefix[k] = std::max(k > 0 ? max_prefix[k - 1] : 0, rgs[k]);
        }
    }
}

}  // namespace

MinCardinalityResult exhaustive_min_cardinality(const Distribution& dist) {
    const int n = dist.cardinality();
    if (n > kMaxExhaustiveStrata)
        throw TooManyStrata("exhaustive_min_cardinality: " + std::to_string(n) +
                            " strata exceeds the cap of " +
                            std::to_string(kMaxExhaustiveStrata));
    for (int x = 0; x < n; ++x)
        if (dist.marginal_x(x).is_zero()) throw PositivityViolation(dist.x_space().label(x), -1);

    // Pooled (z, y) masses for every subset of strata.
    std::vector<SubsetMass> mass(std::size_t(1) << n);
    for (int s = 1; s < (1 << n); ++s) {
        const int x = std::countr_zero(static_cast<unsigned>(s));
        mass[s] = mass[s & (s - 1)];
        for (int c = 0; c < 4; ++c) mass[s].cell[c] += dist.joint(x, c / 2, c % 2);
    }

    // buildable[S]: the strata of S can be pooled into one block by pairwise
    // merges, each justified on the pooled masses at merge time.
    std::vector<char> buildable(std::size_t(1) << n, 0);
    for (int x = 0; x < n; ++x) buildable[std::size_t(1) << x] = 1;
    std::vector<int> by_popcount[kMaxExhaustiveStrata + 1];
    for (int s = 1; s < (1 << n); ++s)
        by_popcount[std::popcount(static_cast<unsigned>(s))].push_back(s);
    for (int size = 2; size <= n; ++size) {
        for (int s : by_popcount[size]) {
            // Iterate proper sub-splits (a, s\a); fixing the lowest bit in
            // `a` halves the work without losing any split.
            const int low = s & -s;
            for (int a = (s - 1) & s; a; a = (a - 1) & s) {
                if (!(a & low)) continue;
                const int b = s ^ a;
                if (buildable[a] && buildable[b] && merge_justified(mass[a], mass[b])) {
                    buildable[s] = 1;
                    break;
                }
            }
        }
    }

    MinCardinalityResult best;
    best.min_blocks = n + 1;
    for_each_partition(n, [&](const std::vector<int>& rgs) {
        std::map<int, int> block_mask;
        for (int x = 0; x < n; ++x) block_mask[rgs[x]] |= 1 << x;
        if (static_cast<int>(block_mask.size()) >= best.min_blocks) return;
        for (const auto& [id, s] : block_mask)
            if (!buildable[s]) return;
        best.min_blocks = static_cast<int>(block_mask.size());
        best.witness.clear();
        for (const auto& [id, s] : block_mask) {
            std::vector<int> members;
            for (int x = 0; x < n; ++x)
                if (s & (1 << x)) members.push_back(x);
            best.witness.push_back(std::move(members));
        }
    });
    return best;
}

const char* variable_name(Variable v) {
    switch (v) {
        case Variable::x: return "X";
        case Variable::z: return "Z";
        case Variable::y: return "Y";
        case Variable::bx: return "b(X)";
    }
    return "?";
}

namespace {

struct VariableView {
    Variable var;
    int arity;
    const Distribution* dist;
    const MergePlan* plan;

    int value(int x, int z, int y) const {
        switch (var) {
            case Variable::x: return x;
            case Variable::z: return z;
            case Variable::y: return y;
            case Variable::bx: return plan->assignment[x];
        }
        return 0;
    }

    std::string value_name(int v) const {
        switch (var) {
            case Variable::x: return dist->x_space().label(v);
            case Variable::bx: return plan->target.label(v);
            default: return std::to_string(v);
        }
    }
};

VariableView make_view(Variable var, const Distribution& dist, const MergePlan* plan) {
    int arity = 2;
    if (var == Variable::x) arity = dist.cardinality();
    if (var == Variable::bx) {
        if (plan == nullptr)
            throw InvalidPlan("factorization_check: claim mentions b(X) but no plan was given");
        if (!(plan->source == dist.x_space()))
            throw InvalidPlan("factorization_check: plan does not cover the data's strata");
        arity = plan->target.cardinality();
    }
    return VariableView{var, arity, &dist, plan};
}

}  // namespace

IndependenceReport factorization_check(const Distribution& dist, Variable a, Variable b,
                                       Variable c, const MergePlan* plan) {
    const VariableView va = make_view(a, dist, plan);
    const VariableView vb = make_view(b, dist, plan);
    const VariableView vc = make_view(c, dist, plan);

    // Accumulate the needed margins by one sweep over the joint cells.
    std::map<std::array<int, 3>, Rational> p_abc;
    std::map<std::array<int, 2>, Rational> p_ac, p_bc;
    std::map<int, Rational> p_c;
    for (int x = 0; x < dist.cardinality(); ++x)
        for (int z = 0; z < 2; ++z)
            for (int y = 0; y < 2; ++y) {
                const Rational& p = dist.joint(x, z, y);
                if (p.is_zero()) continue;
                const int av = va.value(x, z, y);
                const int bv = vb.value(x, z, y);
                const int cv = vc.value(x, z, y);
                p_abc[{av, bv, cv}] += p;
                p_ac[{av, cv}] += p;
                p_bc[{bv, cv}] += p;
                p_c[cv] += p;
            }

    IndependenceReport report;
    for (int cv = 0; cv < vc.arity; ++cv) {
        const auto pc = p_c.find(cv);
        if (pc == p_c.end()) continue;  // zero conditioning margin: skipped
        for (int av = 0; av < va.arity; ++av)
            for (int bv = 0; bv < vb.arity; ++bv) {
                auto lookup = [](const auto& m, const auto& key) {
                    const auto it = m.find(key);
                    return it == m.end() ? Rational(0) : it->second;
                };
                const Rational joint = lookup(p_abc, std::array<int, 3>{av, bv, cv});
                const Rational lhs = joint / pc->second;
                const Rational rhs = (lookup(p_ac, std::array<int, 2>{av, cv}) / pc->second) *
                                     (lookup(p_bc, std::array<int, 2>{bv, cv}) / pc->second);
                if (lhs != rhs)
                    report.violations.push_back({va.value_name(av), vb.value_name(bv),
                                                 vc.value_name(cv), lhs, rhs});
            }
    }
    return report;
}

}  // namespace oracle
}  // namespace strata
