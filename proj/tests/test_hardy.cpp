#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lorentzx/hardy.hpp"

using namespace lorentzx;

namespace {

ExponentFunction c(double v) { return ExponentFunction::constant(v); }

// constant-valued exponent forced through the quadrature path (no
// constant-value fast path), for closed-form-vs-quadrature comparisons
ExponentFunction c_slow(double v) {
    return ExponentFunction::formula([v](double) { return v; }, v, v, ExponentFunction::kInf, {},
                                     "custom");
}

HardySpec averaging_spec() {
    return HardySpec{c(2.0), c(2.0), c(0.0), c(0.0), c(0.0), HardyDirection::lower};
}

} // namespace

TEST_CASE("hardy_lower: plain averaging and closed forms") {
    Partition part = Partition::uniform(0.0, 2.0, 200);
    HardySpec spec = averaging_spec();

    StepFunction chi = StepFunction::indicator(part, 0.0, 1.0);
    StepFunction g = hardy_lower(chi, spec);
    for (std::size_t k = 0; k < part.cells(); ++k) {
        double t = part.right(k);
        CHECK(g.value(k) == doctest::Approx(std::min(t, 1.0) / t).epsilon(1e-12));
    }

    StepFunction zero = hardy_lower(StepFunction::zero(part), spec);
    for (std::size_t k = 0; k < part.cells(); ++k) CHECK(zero.value(k) == 0.0);

    // alpha = 1/4 through the quadrature path vs the exact antiderivative
    HardySpec spec14{c(2.0), c(2.0), c_slow(0.25), c(0.0), c(0.0), HardyDirection::lower};
    Partition gp = Partition::geometric(1e-8, 1.0, 400);
    StepFunction f = StepFunction::sampled(gp, [](double s) { return std::pow(s, 0.25); });
    StepFunction h = hardy_lower(f, spec14);
    double cum = 0.0;
    for (std::size_t k = 0; k < gp.cells(); ++k) {
        double a = gp.left(k), b = gp.right(k);
        cum += f.value(k) * (std::pow(b, 0.75) - std::pow(a, 0.75)) / 0.75;
        double expected = std::pow(gp.right(k), 0.25 - 1.0) * cum;
        CHECK(h.value(k) == doctest::Approx(expected).epsilon(1e-6));
    }
    // and the analytic envelope t^{1/4} at interior points (step-level error)
    for (std::size_t k = 100; k < 390; k += 40) {
        double t = gp.right(k);
        CHECK(std::fabs(h.value(k) - std::pow(t, 0.25)) <= 0.02 * std::pow(t, 0.25));
    }
}

TEST_CASE("hardy_upper: log kernel and closed forms") {
    Partition part = Partition::uniform(0.0, 3.0, 300);
    HardySpec spec{c(2.0), c(2.0), c(0.0), c(0.0), c(0.0), HardyDirection::upper};

    StepFunction chi = StepFunction::indicator(part, 1.0, 2.0);
    StepFunction g = hardy_upper(chi, spec);
    for (std::size_t k = 0; k + 1 < part.cells(); ++k) {
        double t = part.right(k);
        double expected = t < 2.0 ? std::log(2.0 / std::max(t, 1.0)) : 0.0;
        CHECK(g.value(k) == doctest::Approx(expected).epsilon(1e-10));
    }

    // beta = 1/2 through the quadrature path vs exact antiderivative
    HardySpec spec12{c(2.0), c(2.0), c(0.0), c_slow(0.5), c(0.0), HardyDirection::upper};
    Partition gp = Partition::geometric(1e-8, 1.0, 400);
    StepFunction f = StepFunction::sampled(gp, [](double s) { return std::sqrt(s); });
    StepFunction h = hardy_upper(f, spec12);
    std::vector<double> J(gp.cells());
    for (std::size_t k = 0; k < gp.cells(); ++k) {
        double a = gp.left(k), b = gp.right(k);
        J[k] = f.value(k) * 2.0 * (a > 0 ? 1.0 / std::sqrt(a) - 1.0 / std::sqrt(b)
                                         : std::numeric_limits<double>::infinity());
    }
    double tail = 0.0;
    for (std::size_t k = gp.cells(); k-- > 0;) {
        double expected = std::pow(gp.right(k), 0.5) * tail;
        if (k > 0) // the zero cell's own kernel integral never enters
            CHECK(h.value(k) == doctest::Approx(expected).epsilon(1e-6));
        tail += J[k];
    }
    // analytic envelope t^{1/2} ln(1/t)
    for (std::size_t k = 80; k < 360; k += 40) {
        double t = gp.right(k);
        double env = std::sqrt(t) * std::log(1.0 / t);
        CHECK(std::fabs(h.value(k) - env) <= 0.03 * std::max(env, 0.1));
    }
}

TEST_CASE("hardy operator properties: positivity, monotonicity, homogeneity") {
    Partition part = Partition::geometric(1e-6, 4.0, 256);
    HardySpec low{c(2.0), c(2.0), c_slow(0.2), c(0.0), c(0.0), HardyDirection::lower};
    HardySpec up{c(2.0), c(2.0), c(0.0), c_slow(0.3), c(0.0), HardyDirection::upper};

    SplitMix64 rng(404);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<double> a(part.cells()), b(part.cells());
        for (std::size_t i = 0; i < part.cells(); ++i) {
            a[i] = rng.uniform(0.0, 2.0);
            b[i] = a[i] + rng.uniform(0.0, 1.0);
        }
        StepFunction fa(part, a), fb(part, b);
        for (const HardySpec& spec : {low, up}) {
            StepFunction ga = hardy_apply(fa, spec), gb = hardy_apply(fb, spec);
            for (std::size_t i = 0; i < part.cells(); ++i) {
                CHECK(ga.value(i) >= 0.0);
                CHECK(ga.value(i) <= gb.value(i) * (1.0 + 1e-12) + 1e-300);
            }
            StepFunction g3 = hardy_apply(fa.scaled(3.0), spec);
            for (std::size_t i = 0; i < part.cells(); ++i)
                CHECK(g3.value(i) == doctest::Approx(3.0 * ga.value(i)).epsilon(1e-13));
        }
    }
}

TEST_CASE("hardy_conditions flags") {
    HardyConditionReport r1 = hardy_conditions(averaging_spec());
    CHECK(r1.alpha_zero_ok);  // 0 < 1/2
    CHECK(r1.beta_zero_ok);   // 0 > -1/2
    CHECK(r1.nu_range_zero_ok);
    CHECK(r1.exponent_relation_zero_ok);
    CHECK(r1.infinity_applicable);
    CHECK(*r1.alpha_inf_ok);
    CHECK(r1.lower_ok());
    CHECK(r1.upper_ok());

    // boundary case: alpha(0) = 1/p'(0) fails the strict inequality
    HardySpec boundary{c(2.0), c(2.0), c(0.5), c(0.0), c(0.0), HardyDirection::lower};
    CHECK_FALSE(hardy_conditions(boundary).alpha_zero_ok);

    // exponent relation: p(0)=2, nu(0)=1/4 pairs with q(0)=4
    HardySpec rel{c(2.0), c(4.0), c(0.0), c(0.0), c(0.25), HardyDirection::lower};
    HardyConditionReport rr = hardy_conditions(rel);
    CHECK(rr.exponent_relation_zero_ok);
    CHECK(rr.nu_range_zero_ok);

    // finite domain: infinity-side flags are not applicable
    HardySpec fin{ExponentFunction::constant(2.0, 1.0), ExponentFunction::constant(2.0, 1.0),
                  c(0.0), c(0.0), c(0.0), HardyDirection::lower};
    HardyConditionReport rf = hardy_conditions(fin);
    CHECK_FALSE(rf.infinity_applicable);
    CHECK_FALSE(rf.alpha_inf_ok.has_value());
}

TEST_CASE("estimate_operator_norm: classical averaging approaches p' = 2") {
    HardySpec spec = averaging_spec();
    Partition base = hardy_default_grid(spec, 1024);
    Family fam = default_hardy_family(spec, 99, {0.1, 0.03, 0.01, 0.003}, 4);
    BoundednessReport rep = estimate_operator_norm(spec, fam, base);
    CHECK(rep.verdict == Verdict::bounded);
    CHECK(rep.sup_ratio >= 1.8);
    CHECK(rep.sup_ratio <= 2.0);
    // the eps-ladder climbs toward the Hardy constant from below
    REQUIRE(rep.family_curve.size() == 4);
    CHECK(rep.family_curve.front().second < rep.family_curve.back().second);
    CHECK(rep.truncation_sensitivity <= 0.02);
}

TEST_CASE("estimate_operator_norm: necessity of the strict inequalities") {
    // alpha(0) = 1/p'(0) + 0.05: the zero-side ladder blows up
    HardySpec bad{c(2.0), c(2.0), make_test_exponent(0.55, 0.3, 0.0, ExponentMode::log_decay),
                  c(0.0), c(0.0), HardyDirection::lower};
    Partition base = hardy_default_grid(bad, 1024);
    Family fam = default_hardy_family(bad, 7, {0.1, 0.03, 0.01, 0.003}, 3);
    BoundednessReport rep = estimate_operator_norm(bad, fam, base);
    CHECK(rep.verdict == Verdict::blow_up);
    REQUIRE(rep.family_curve.size() == 4);
    CHECK(rep.family_curve.back().second >= 10.0 * rep.family_curve.front().second);

    // beta(0) = -1/p(0) - 0.05: no growing eps-ladder; the deepening
    // refinement exposes the unboundedness instead
    HardySpec badu{c(2.0), c(2.0), c(0.0), make_test_exponent(-0.55, -0.3, 0.0, ExponentMode::log_decay),
                   c(0.0), HardyDirection::upper};
    BoundednessReport repu = estimate_operator_norm(badu, default_hardy_family(badu, 8, {0.1, 0.03}, 3),
                                                    hardy_default_grid(badu, 1024));
    CHECK(repu.verdict == Verdict::blow_up);
    REQUIRE(repu.refinement_curve.size() == 2);
    CHECK(repu.refinement_curve[1].second >= 10.0 * repu.refinement_curve[0].second);
}

TEST_CASE("norm-equivalence operator consistency") {
    // with nu = 0 and alpha = 1/p - 1/q, the lower operator on phi = t^alpha f*
    // reproduces ||f||^1 up to the within-cell weighting of the step layer
    ExponentFunction p = c(2.0), q = c(1.5);
    NormSpec nspec{p, q, std::nullopt, false};
    Partition part = Partition::geometric(1e-9, 1.0, 512);
    SplitMix64 rng(17);
    std::vector<double> v(part.cells());
    for (auto& x : v) x = rng.uniform(0.0, 2.0);
    StepFunction f(part, v);

    double star = lorentz_norm(f, nspec.with_double_star(true));

    Rearranged fs = rearrange(f);
    PrefixIntegral F(fs.fn);
    const double e = 1.0 / 2.0 - 1.0 / 1.5;
    std::vector<double> y(fs.fn.cells());
    for (std::size_t k = 0; k < y.size(); ++k) {
        double t = fs.partition().right(k);
        y[k] = std::pow(t, e - 1.0) * F(t);
    }
    double via_hardy = luxemburg_norm(StepFunction(fs.partition(), y), q);
    CHECK(via_hardy == doctest::Approx(star).epsilon(0.05));
}
