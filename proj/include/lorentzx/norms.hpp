#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "exponent.hpp"
#include "families.hpp"
#include "grid.hpp"
#include "quadrature.hpp"
#include "report.hpp"

namespace lorentzx {

/// Which variable Lorentz norm to take: exponents p, q of the rearrangement
/// variable, an optional weight power gamma (weight w(t) = t^gamma(t)), and
/// the choice between the plain norm (through f*) and the star norm
/// (through f**).
struct NormSpec {
    ExponentFunction p;
    ExponentFunction q;
    std::optional<ExponentFunction> gamma;
    bool use_double_star = false;

    NormSpec with_double_star(bool flag) const {
        NormSpec s = *this;
        s.use_double_star = flag;
        return s;
    }

    /// t-power in front of f*: gamma + 1/p - 1/q.
    ExponentFunction power_profile() const {
        std::vector<std::pair<double, ExponentFunction>> parts;
        if (gamma) parts.emplace_back(1.0, *gamma);
        parts.emplace_back(1.0, reciprocal(p));
        parts.emplace_back(-1.0, reciprocal(q));
        return exponent_sum(std::move(parts));
    }
};

namespace detail {
inline void require_axis(const StepFunction& f, const char* who) {
    if (f.partition().origin() < 0.0)
        throw std::invalid_argument(std::string(who) + ": function must live on the [0,l] axis");
}
} // namespace detail

/// Modular of the variable Lebesgue space: integral of |f(t)|^{p(t)}.
inline double lebesgue_modular(const StepFunction& f, const ExponentFunction& p) {
    detail::require_axis(f, "lebesgue_modular");
    ModularTable table(f.partition(), ExponentFunction::constant(0.0), p);
    return table.modular(f.values(), 1.0);
}

/// Luxemburg norm of the variable Lebesgue space.
inline double luxemburg_norm(const StepFunction& f, const ExponentFunction& p) {
    detail::require_axis(f, "luxemburg_norm");
    ModularTable table(f.partition(), ExponentFunction::constant(0.0), p);
    return table.luxemburg(f.values());
}

/// Lorentz modular: integral of t^{q/p-1} (f*)^q, equivalently the Lebesgue
/// modular of t^{1/p-1/q} f* in exponent q.
inline double lorentz_modular(const StepFunction& f, const NormSpec& spec) {
    Rearranged fs = rearrange(f);
    std::vector<std::pair<double, ExponentFunction>> parts;
    parts.emplace_back(1.0, reciprocal(spec.p));
    parts.emplace_back(-1.0, reciprocal(spec.q));
    ModularTable table(fs.partition(), exponent_sum(std::move(parts)), spec.q);
    return table.modular(fs.fn.values(), 1.0);
}

/// Variable Lorentz norm: Luxemburg norm of w(t) t^{1/p-1/q} h(t) in
/// exponent q, where h is f* (plain) or f** (star variant).
inline double lorentz_norm(const StepFunction& f, const NormSpec& spec) {
    Rearranged fs = rearrange(f);
    StepFunction h = spec.use_double_star ? double_star(fs) : fs.fn;
    ModularTable table(h.partition(), spec.power_profile(), spec.q);
    return table.luxemburg(h.values());
}

// ---------------------------------------------------------------------------

/// Finiteness of the Lorentz modular against the two-piece frozen-exponent
/// split (t-power frozen at q(0)/p(0) below 1 and at q(inf)/p(inf) above).
struct SplitModularReport {
    double lhs = 0.0;          // full modular
    double rhs = 0.0;          // frozen split
    double ratio = 1.0;        // lhs / rhs
    double refined_ratio = 1.0;
    bool agree = false;        // same finiteness
    bool stable = false;       // ratio moves less than 2x under refinement
    bool ok() const { return agree && stable; }
};

inline SplitModularReport split_modular_check(const StepFunction& f, const NormSpec& spec) {
    const double c0 = spec.q.limit_at_zero() / spec.p.limit_at_zero();
    const bool inf_dom = spec.p.infinite_domain() && spec.q.infinite_domain();
    const double cinf = inf_dom ? *spec.q.limit_at_infinity() / *spec.p.limit_at_infinity() : c0;

    ExponentFunction q = spec.q;
    auto frozen_power = ExponentFunction::formula(
        [q, c0, cinf](double t) { return ((t < 1.0 ? c0 : cinf) - 1.0) / q(t); },
        (c0 - 1.0) / q.limit_at_zero(),
        q.limit_at_infinity() ? std::optional<double>((cinf - 1.0) / *q.limit_at_infinity())
                              : std::nullopt,
        q.domain_length(), std::vector<double>{1.0}, "split-frozen");

    auto eval = [&](const StepFunction& g, double& lhs, double& rhs) {
        Rearranged gs = rearrange(g);
        std::vector<std::pair<double, ExponentFunction>> parts;
        parts.emplace_back(1.0, reciprocal(spec.p));
        parts.emplace_back(-1.0, reciprocal(spec.q));
        lhs = ModularTable(gs.partition(), exponent_sum(std::move(parts)), spec.q)
                  .modular(gs.fn.values(), 1.0);
        rhs = ModularTable(gs.partition(), frozen_power, spec.q).modular(gs.fn.values(), 1.0);
    };

    SplitModularReport rep;
    eval(f, rep.lhs, rep.rhs);
    double lhs4 = 0, rhs4 = 0;
    eval(resample(f, f.partition().refined_linear(4)), lhs4, rhs4);
    rep.agree = std::isfinite(rep.lhs) == std::isfinite(rep.rhs);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    rep.refined_ratio = rhs4 > 0.0 ? lhs4 / rhs4 : rep.ratio;
    rep.stable = std::isfinite(rep.ratio)
                     ? (rep.refined_ratio <= 2.0 * rep.ratio && rep.ratio <= 2.0 * rep.refined_ratio)
                     : true;
    return rep;
}

/// Verify |int u v| <= k ||u||_p ||v||_p' with k = 1/p_- + 1/p'_-.
struct HolderReport {
    double pairing = 0.0;
    double bound = 0.0; // k ||u|| ||v||
    double ratio = 0.0; // pairing / (||u|| ||v||), to compare against k
    double k = 0.0;
    bool holds = false;
};

inline HolderReport holder_check(const StepFunction& u, const StepFunction& v,
                                 const ExponentFunction& p) {
    if (!u.partition().same_mesh(v.partition()))
        throw std::invalid_argument("holder_check: functions must share a partition");
    ClassReport cls = classify(p);
    if (cls.p_minus <= 1.0) throw std::domain_error("holder_check: requires p_minus > 1");
    HolderReport rep;
    rep.k = 1.0 / cls.p_minus + (1.0 - 1.0 / cls.p_plus);
    std::vector<double> terms(u.cells());
    for (std::size_t i = 0; i < u.cells(); ++i)
        terms[i] = u.value(i) * v.value(i) * u.partition().width(i);
    rep.pairing = std::fabs(detail::pairwise_sum(terms));
    double nu = luxemburg_norm(u, p);
    double nv = luxemburg_norm(v, conjugate(p));
    rep.bound = rep.k * nu * nv;
    rep.ratio = (nu > 0.0 && nv > 0.0) ? rep.pairing / (nu * nv) : 0.0;
    rep.holds = rep.pairing <= rep.bound * (1.0 + 1e-9) + 1e-300;
    return rep;
}

// ---------------------------------------------------------------------------

/// Sup of ||f||^1 / ||f|| over a family: the operational form of the
/// norm-equivalence theorem.  Stable sup under refinement and family
/// extension reads "equivalent"; monotone tenfold growth along the ladder
/// reads "blow-up".
inline BoundednessReport norm_equivalence_experiment(const NormSpec& spec, const Family& family,
                                                     const Partition& base,
                                                     const Protocol& proto = {}) {
    BoundednessReport rep;
    if (spec.gamma) {
        ClassReport g = classify(*spec.gamma);
        double thr0 = 1.0 - 1.0 / spec.p.limit_at_zero();
        rep.condition_flags.push_back(std::string("gamma0<1/p'(0): ") +
                                      ((spec.gamma->limit_at_zero() < thr0) ? "yes" : "no"));
        rep.condition_flags.push_back(std::string("gamma decays: ") + (g.decays() ? "yes" : "no"));
    }

    auto sweep = [&](const Partition& part, bool record) {
        double sup = 0.0;
        for (const auto& member : family) {
            StepFunction f = member.realize(part);
            double den = lorentz_norm(f, spec.with_double_star(false));
            if (den == 0.0) continue;
            double num = lorentz_norm(f, spec.with_double_star(true));
            double ratio = num / den;
            sup = std::max(sup, ratio);
            if (record) {
                rep.ratios.emplace_back(member.id, ratio);
                if (member.on_curve) rep.family_curve.emplace_back(member.parameter, ratio);
            }
        }
        return sup;
    };

    rep.sup_ratio = sweep(base, true);
    rep.refinement_curve.emplace_back(base.cells(), rep.sup_ratio);
    Partition fine = base.starts_at_zero() && base.style() == Partition::Style::geometric
                         ? Partition::geometric(base.right(0) / proto.refinement_factor,
                                                base.truncation(),
                                                base.cells() * proto.refinement_factor)
                         : base.refined_linear(proto.refinement_factor);
    rep.refinement_curve.emplace_back(fine.cells(), sweep(fine, false));
    rep.verdict = decide_verdict(rep, proto);
    return rep;
}

} // namespace lorentzx
