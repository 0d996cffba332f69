#include "strata/estimate.hpp"

namespace strata {

const char* route_name(Route route) {
    switch (route) {
        case Route::stratified: return "stratified";
        case Route::do_calculus: return "do";
        case Route::ipw: return "ipw";
        case Route::dual_stratified: return "dual";
    }
    return "?";
}

Rational stratum_effect(const Distribution& dist, int x) {
    return dist.y_given_xz(x, 1) - dist.y_given_xz(x, 0);
}

EffectEstimate ate_stratified(const Distribution& dist) {
    EffectEstimate est;
    est.route = Route::stratified;
    est.space = dist.x_space();
    for (int x = 0; x < dist.cardinality(); ++x) {
        StratumTerm term{stratum_effect(dist, x), dist.marginal_x(x)};
        est.ate += term.effect * term.weight;
        est.per_stratum.push_back(std::move(term));
    }
    return est;
}

InterventionDistribution intervene(const Distribution& dist, int z) {
    if (z != 0 && z != 1) throw InvalidValue("intervene: z must be 0 or 1");
    InterventionDistribution out;
    out.z_set = z;
    out.p_yx.resize(dist.cardinality());
    for (int x = 0; x < dist.cardinality(); ++x) {
        const Rational rate = dist.y_given_xz(x, z);  // needs p(x, z) > 0
        const Rational px = dist.marginal_x(x);
        out.p_yx[x][1] = px * rate;
        out.p_yx[x][0] = px * (Rational(1) - rate);
        out.p_y[0] += out.p_yx[x][0];
        out.p_y[1] += out.p_yx[x][1];
    }
    return out;
}

EffectEstimate ate_do(const Distribution& dist) {
    const InterventionDistribution treated = intervene(dist, 1);
    const InterventionDistribution control = intervene(dist, 0);
    EffectEstimate est;
    est.route = Route::do_calculus;
    est.space = dist.x_space();
    est.ate = treated.p_y[1] - control.p_y[1];
    for (int x = 0; x < dist.cardinality(); ++x)
        est.per_stratum.push_back({stratum_effect(dist, x), dist.marginal_x(x)});
    return est;
}

EffectEstimate ate_ipw(const Distribution& dist, std::span<const Rational> scores) {
    if (static_cast<int>(scores.size()) != dist.cardinality())
        throw InvalidValue("ate_ipw: one score per stratum required");
    EffectEstimate est;
    est.route = Route::ipw;
    est.space = dist.x_space();
    const Rational one(1);
    for (int x = 0; x < dist.cardinality(); ++x) {
        const Rational& s = scores[x];
        if (s <= Rational(0) || s >= one) throw DegenerateWeight(dist.x_space().label(x));
        const Rational contribution =
            dist.joint(x, 1, 1) / s - dist.joint(x, 0, 1) / (one - s);
        est.ate += contribution;
        const Rational px = dist.marginal_x(x);
        // effect * weight == contribution, keeping the decomposition exact.
        est.per_stratum.push_back({px.is_zero() ? Rational(0) : contribution / px, px});
    }
    return est;
}

std::array<Rational, 2> potential_outcome_dist(const Distribution& dist, int i) {
    return intervene(dist, i).p_y;
}

namespace {

// sum_B p(Y=1 | B, z) p(B) over one arm's merged strata.
Rational arm_term(const Distribution& merged, int z, ArmTable& table) {
    table.space = merged.x_space();
    Rational sum;
    for (int b = 0; b < merged.cardinality(); ++b) {
        const Rational rate = merged.y_given_xz(b, z);
        const Rational weight = merged.marginal_x(b);
        sum += rate * weight;
        table.outcome_rate.push_back(rate);
        table.weight.push_back(weight);
    }
    return sum;
}

}  // namespace

EffectEstimate ate_dual_stratified(const Distribution& dist, const DualPlan& dual) {
    const Distribution merged_treated = apply_plan(dist, dual.treated);
    const Distribution merged_control = apply_plan(dist, dual.control);

    EffectEstimate est;
    est.route = Route::dual_stratified;
    est.space = dist.x_space();
    est.dual_used = dual;
    ArmTable treated, control;
    const Rational t = arm_term(merged_treated, 1, treated);
    const Rational c = arm_term(merged_control, 0, control);
    est.ate = t - c;
    est.treated_arm = std::move(treated);
    est.control_arm = std::move(control);
    return est;
}

}  // namespace strata
