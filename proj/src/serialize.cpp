#include "strata/serialize.hpp"

#include <cmath>

namespace strata {

Json rational_json(const Rational& r) {
    return Json{{"rational", r.str()}, {"decimal", r.decimal_str()}};
}

Rational rational_from_json(const Json& j) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long long>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
    if (j.is_number())
        throw ParseError("non-integral JSON number '" + j.dump() +
                             "'; write probabilities as strings (\"2/5\" or \"0.4\")",
                         0);
    throw ParseError("expected a rational value, got " + j.dump(), 0);
}

Json mode_json(const EqualityMode& mode) {
    if (mode.is_exact()) return Json{{"type", "exact"}};
    return Json{{"type", "epsilon"}, {"epsilon", rational_json(mode.eps())}};
}

namespace {

Json witness_json(const ScorePartition& partition, std::size_t block) {
    const auto& w = partition.witnesses[block];
    switch (partition.kind) {
        case ScoreKind::outcome_both:
            return Json{{"p0", rational_json(w[0])}, {"p1", rational_json(w[1])}};
        case ScoreKind::outcome_treated:
            return Json{{"p1", rational_json(w[0])}};
        case ScoreKind::outcome_control:
            return Json{{"p0", rational_json(w[0])}};
        default:
            return Json{{"value", rational_json(w[0])}};
    }
}

}  // namespace

Json partition_json(const ScorePartition& partition, const CategoricalSpace& space,
                    const EqualityMode& mode) {
    Json blocks = Json::array();
    for (std::size_t b = 0; b < partition.blocks.size(); ++b) {
        Json members = Json::array();
        for (int m : partition.blocks[b]) members.push_back(space.label(m));
        blocks.push_back(Json{{"members", members}, {"witness", witness_json(partition, b)}});
    }
    return Json{{"score", score_kind_name(partition.kind)},
                {"mode", mode_json(mode)},
                {"strata", space.labels()},
                {"block_count", partition.block_count()},
                {"blocks", blocks}};
}

namespace {

const char* merge_reason_name(ScoreKind kind) { return score_kind_name(kind); }

ScoreKind merge_reason_from_name(const std::string& name) {
    for (ScoreKind k : {ScoreKind::propensity, ScoreKind::outcome_both,
                        ScoreKind::outcome_treated, ScoreKind::outcome_control, ScoreKind::user})
        if (name == score_kind_name(k)) return k;
    throw ParseError("unknown merge reason '" + name + "'", 0);
}

}  // namespace

Json plan_json(const MergePlan& plan) {
    Json assignment = Json::object();
    for (std::size_t i = 0; i < plan.assignment.size(); ++i)
        assignment[plan.source.label(static_cast<int>(i))] =
            plan.target.label(plan.assignment[i]);
    Json provenance = Json::array();
    for (int t = 0; t < plan.target.cardinality(); ++t)
        provenance.push_back(
            Json{{"target", plan.target.label(t)}, {"reason", merge_reason_name(plan.provenance[t])}});
    return Json{{"source", plan.source.labels()},
                {"target", plan.target.labels()},
                {"assignment", assignment},
                {"provenance", provenance}};
}

MergePlan plan_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("source") || !j.contains("target") ||
        !j.contains("assignment"))
        throw ParseError("merge plan needs 'source', 'target' and 'assignment'", 0);
    MergePlan plan;
    try {
        plan.source = CategoricalSpace(j.at("source").get<std::vector<std::string>>());
        plan.target = CategoricalSpace(j.at("target").get<std::vector<std::string>>());
    } catch (const InvalidValue& e) {
        throw ParseError(std::string("merge plan: ") + e.what(), 0);
    }
    plan.assignment.assign(plan.source.cardinality(), -1);
    const Json& assignment = j.at("assignment");
    if (!assignment.is_object()) throw ParseError("merge plan assignment must be an object", 0);
    for (const auto& [from, to] : assignment.items()) {
        if (!plan.source.contains(from))
            throw ParseError("assignment source '" + from + "' not in source space", 0);
        if (!to.is_string() || !plan.target.contains(to.get<std::string>()))
            throw ParseError("assignment target for '" + from + "' not in target space", 0);
        plan.assignment[plan.source.index_of(from)] = plan.target.index_of(to.get<std::string>());
    }
    std::vector<bool> hit(plan.target.cardinality(), false);
    for (std::size_t i = 0; i < plan.assignment.size(); ++i) {
        if (plan.assignment[i] < 0)
            throw ParseError("assignment missing source stratum '" +
                                 plan.source.label(static_cast<int>(i)) + "'",
                             0);
        hit[plan.assignment[i]] = true;
    }
    for (int t = 0; t < plan.target.cardinality(); ++t)
        if (!hit[t])
            throw ParseError("assignment is not onto: target '" + plan.target.label(t) +
                                 "' unused",
                             0);
    plan.provenance.assign(plan.target.cardinality(), ScoreKind::user);
    if (j.contains("provenance")) {
        for (const Json& entry : j.at("provenance")) {
            const std::string target = entry.at("target").get<std::string>();
            plan.provenance[plan.target.index_of(target)] =
                merge_reason_from_name(entry.at("reason").get<std::string>());
        }
    }
    return plan;
}

Json dual_plan_json(const DualPlan& dual) {
    return Json{{"treated", plan_json(dual.treated)}, {"control", plan_json(dual.control)}};
}

DualPlan dual_plan_from_json(const Json& j) {
    if (!json_is_dual_plan(j)) throw ParseError("dual plan needs 'treated' and 'control'", 0);
    return DualPlan{plan_from_json(j.at("treated")), plan_from_json(j.at("control"))};
}

bool json_is_dual_plan(const Json& j) {
    return j.is_object() && j.contains("treated") && j.contains("control");
}

namespace {

Json arm_table_json(const ArmTable& arm) {
    Json terms = Json::array();
    for (int b = 0; b < arm.space.cardinality(); ++b)
        terms.push_back(Json{{"stratum", arm.space.label(b)},
                             {"outcome_rate", rational_json(arm.outcome_rate[b])},
                             {"weight", rational_json(arm.weight[b])}});
    return Json{{"strata", arm.space.labels()}, {"terms", terms}};
}

}  // namespace

Json estimate_json(const EffectEstimate& estimate) {
    Json out{{"route", route_name(estimate.route)}, {"ate", rational_json(estimate.ate)}};
    if (!estimate.per_stratum.empty()) {
        out["strata"] = estimate.space.labels();
        Json per = Json::array();
        for (int x = 0; x < estimate.space.cardinality(); ++x)
            per.push_back(Json{{"stratum", estimate.space.label(x)},
                               {"effect", rational_json(estimate.per_stratum[x].effect)},
                               {"weight", rational_json(estimate.per_stratum[x].weight)}});
        out["per_stratum"] = per;
    }
    if (estimate.treated_arm) out["treated_arm"] = arm_table_json(*estimate.treated_arm);
    if (estimate.control_arm) out["control_arm"] = arm_table_json(*estimate.control_arm);
    if (estimate.dual_used)
        out["plan"] = dual_plan_json(*estimate.dual_used);
    else if (estimate.plan_used)
        out["plan"] = plan_json(*estimate.plan_used);
    else
        out["plan"] = nullptr;
    return out;
}

namespace {

PlantedTie planted_tie_from_json(const Json& j) {
    PlantedTie tie;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "propensity-tie")
        tie.kind = PlantedTie::Kind::propensity;
    else if (kind == "outcome1-tie")
        tie.kind = PlantedTie::Kind::outcome1;
    else if (kind == "outcome0-tie")
        tie.kind = PlantedTie::Kind::outcome0;
    else if (kind == "cascade-tie")
        tie.kind = PlantedTie::Kind::cascade;
    else
        throw ParseError("unknown planted tie kind '" + kind + "'", 0);
    tie.i = j.at("i").get<int>();
    tie.j = j.at("j").get<int>();
    if (j.contains("target")) tie.target = j.at("target").get<int>();
    return tie;
}

Json planted_tie_json(const PlantedTie& tie) {
    Json out{{"kind", planted_tie_kind_name(tie.kind)}, {"i", tie.i}, {"j", tie.j}};
    if (tie.kind == PlantedTie::Kind::cascade) out["target"] = GeneratorSpec::cascade_target(tie);
    return out;
}

}  // namespace

GeneratorSpec generator_spec_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("generator spec must be a JSON object", 0);
    for (const char* key : {"px", "pz_given_x", "py_given_xz"})
        if (!j.contains(key))
            throw ParseError(std::string("generator spec missing '") + key + "'", 0);

    std::vector<Rational> px;
    for (const Json& v : j.at("px")) px.push_back(rational_from_json(v));
    const int n = static_cast<int>(px.size());

    std::vector<std::string> labels;
    if (j.contains("labels"))
        labels = j.at("labels").get<std::vector<std::string>>();
    else
        labels = default_labels(n);
    if (j.contains("n_strata") && j.at("n_strata").get<int>() != n)
        throw ParseError("n_strata disagrees with the px vector length", 0);

    std::vector<Rational> pz;
    for (const Json& v : j.at("pz_given_x")) pz.push_back(rational_from_json(v));

    std::vector<std::array<Rational, 2>> py;
    for (const Json& row : j.at("py_given_xz")) {
        if (!row.is_array() || row.size() != 2)
            throw ParseError("py_given_xz rows must be [p(y=1|x,z=0), p(y=1|x,z=1)]", 0);
        py.push_back({rational_from_json(row[0]), rational_from_json(row[1])});
    }

    std::vector<PlantedTie> planted;
    if (j.contains("planted"))
        for (const Json& t : j.at("planted")) planted.push_back(planted_tie_from_json(t));

    const std::uint64_t seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;
    return GeneratorSpec(std::move(labels), std::move(px), std::move(pz), std::move(py),
                         std::move(planted), seed);
}

Json generator_spec_json(const GeneratorSpec& spec) {
    Json px = Json::array(), pz = Json::array(), py = Json::array();
    for (const auto& v : spec.px()) px.push_back(rational_json(v));
    for (const auto& v : spec.pz_given_x()) pz.push_back(rational_json(v));
    for (const auto& row : spec.py_given_xz())
        py.push_back(Json::array({rational_json(row[0]), rational_json(row[1])}));
    Json planted = Json::array();
    for (const auto& tie : spec.planted()) planted.push_back(planted_tie_json(tie));
    return Json{{"labels", spec.labels()}, {"px", px},           {"pz_given_x", pz},
                {"py_given_xz", py},       {"planted", planted}, {"seed", spec.seed()}};
}

Json balance_violations_json(const BalanceReport& report, const Distribution& dist,
                             const MergePlan& plan) {
    Json out = Json::array();
    for (const auto& v : report.violations)
        out.push_back(Json{{"stratum", dist.x_space().label(v.source_index)},
                           {"z", v.z},
                           {"block", plan.target.label(v.target_index)},
                           {"lhs", rational_json(v.lhs)},
                           {"rhs", rational_json(v.rhs)}});
    return out;
}

Json independence_violations_json(const oracle::IndependenceReport& report) {
    Json out = Json::array();
    for (const auto& v : report.violations)
        out.push_back(Json{{"a", v.a_value},
                           {"b", v.b_value},
                           {"c", v.c_value},
                           {"lhs", rational_json(v.lhs)},
                           {"rhs", rational_json(v.rhs)}});
    return out;
}

}  // namespace strata
