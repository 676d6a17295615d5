#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorentzx {

/// A variable exponent p(.) on (0, l), 0 < l <= infinity, with limits p(0)
/// and (for infinite domains) p(inf).  Two backing representations exist:
/// sampled points interpolated linearly in u = ln t, and closed-form
/// evaluators (used by constructed test exponents and by pointwise exact
/// transforms such as conjugation).  Outside the sampled range the function
/// approaches its limits at a log rate, so decay behavior at the endpoints
/// is a property of the representation itself.
class ExponentFunction {
public:
    struct Sample {
        double t;
        double value;
    };

    static ExponentFunction constant(double c, double domain_length = kInf) {
        ExponentFunction e;
        auto impl = std::make_shared<Impl>();
        impl->limit0 = c;
        impl->limit_inf = std::isinf(domain_length) ? std::optional<double>(c) : std::nullopt;
        impl->domain_length = domain_length;
        impl->const_value = c;
        impl->samples = {Sample{1.0, c}};
        impl->mode = "constant";
        e.impl_ = std::move(impl);
        return e;
    }

    static ExponentFunction from_samples(std::vector<Sample> samples, double limit0,
                                         std::optional<double> limit_inf,
                                         double domain_length = kInf) {
        if (samples.empty())
            throw std::invalid_argument("ExponentFunction: need at least one sample");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!(samples[i].t > 0.0))
                throw std::invalid_argument("ExponentFunction: sample abscissae must be positive");
            if (i > 0 && !(samples[i].t > samples[i - 1].t))
                throw std::invalid_argument("ExponentFunction: sample abscissae must increase");
        }
        if (std::isinf(domain_length) && !limit_inf)
            throw std::invalid_argument("ExponentFunction: infinite domain requires limit at infinity");
        auto impl = std::make_shared<Impl>();
        impl->limit0 = limit0;
        impl->limit_inf = limit_inf;
        impl->domain_length = domain_length;
        impl->samples = std::move(samples);
        impl->log_ts.reserve(impl->samples.size());
        for (const auto& s : impl->samples) impl->log_ts.push_back(std::log(s.t));
        impl->knots.reserve(impl->samples.size());
        for (const auto& s : impl->samples) impl->knots.push_back(s.t);
        impl->mode = "samples";
        ExponentFunction e;
        e.impl_ = std::move(impl);
        return e;
    }

    static ExponentFunction formula(std::function<double(double)> fn, double limit0,
                                    std::optional<double> limit_inf, double domain_length,
                                    std::vector<double> knots, std::string mode,
                                    double amplitude = 0.0) {
        auto impl = std::make_shared<Impl>();
        impl->fn = std::move(fn);
        impl->limit0 = limit0;
        impl->limit_inf = limit_inf;
        impl->domain_length = domain_length;
        impl->knots = std::move(knots);
        impl->mode = std::move(mode);
        impl->amplitude = amplitude;
        ExponentFunction e;
        e.impl_ = std::move(impl);
        return e;
    }

    /// Pointwise evaluation.  Positive arguments only; values beyond the
    /// domain length are clamped to the far endpoint.
    double operator()(double t) const {
        if (!(t > 0.0)) throw std::domain_error("ExponentFunction: argument must be positive");
        const Impl& im = *impl_;
        if (im.const_value) return *im.const_value;
        if (!std::isinf(im.domain_length) && t > im.domain_length) t = im.domain_length;
        if (im.fn) return im.fn(t);
        // sampled: interpolate in u = ln t, blend to the limits outside
        const auto& ss = im.samples;
        if (t <= ss.front().t) {
            // limit0 + (v1 - limit0) * ln(e + 1/t1) / ln(e + 1/t)
            double c = std::log(std::numbers::e + 1.0 / ss.front().t);
            return im.limit0 + (ss.front().value - im.limit0) * c / std::log(std::numbers::e + 1.0 / t);
        }
        if (t >= ss.back().t) {
            if (!im.limit_inf) return ss.back().value;
            double c = std::log(std::numbers::e + ss.back().t);
            return *im.limit_inf + (ss.back().value - *im.limit_inf) * c / std::log(std::numbers::e + t);
        }
        double u = std::log(t);
        std::size_t lo = 0, hi = ss.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (im.log_ts[mid] <= u ? lo : hi) = mid;
        }
        double w = (u - im.log_ts[lo]) / (im.log_ts[hi] - im.log_ts[lo]);
        return ss[lo].value + w * (ss[hi].value - ss[lo].value);
    }

    double limit_at_zero() const { return impl_->limit0; }
    std::optional<double> limit_at_infinity() const { return impl_->limit_inf; }
    double domain_length() const { return impl_->domain_length; }
    bool infinite_domain() const { return std::isinf(impl_->domain_length); }

    /// Value used for t beyond any truncation of an infinite domain.
    double far_value() const {
        return impl_->limit_inf ? *impl_->limit_inf
                                : (impl_->samples.empty() ? impl_->limit0 : impl_->samples.back().value);
    }

    std::optional<double> constant_value() const { return impl_->const_value; }
    const std::vector<double>& knots() const { return impl_->knots; }
    const std::vector<Sample>& samples() const { return impl_->samples; }
    const std::string& mode() const { return impl_->mode; }
    double amplitude() const { return impl_->amplitude; }

    static constexpr double kInf = std::numeric_limits<double>::infinity();

private:
    struct Impl {
        std::function<double(double)> fn; // empty for sampled representation
        double limit0 = 0.0;
        std::optional<double> limit_inf;
        double domain_length = kInf;
        std::optional<double> const_value;
        std::vector<Sample> samples;
        std::vector<double> log_ts;
        std::vector<double> knots;
        std::string mode = "formula";
        double amplitude = 0.0;
    };

    std::shared_ptr<const Impl> impl_;
};

namespace detail {

/// Scan grid used by class membership checks: geometric points spanning the
/// interesting range of the domain.
inline std::vector<double> classify_grid(const ExponentFunction& p, std::size_t n = 512) {
    double hi = p.infinite_domain() ? std::ldexp(1.0, 40) : p.domain_length();
    double lo = hi * std::ldexp(1.0, -80);
    if (p.infinite_domain()) lo = std::ldexp(1.0, -40);
    std::vector<double> g(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t j = 0; j < n; ++j)
        g[j] = std::exp(llo + (lhi - llo) * static_cast<double>(j) / static_cast<double>(n - 1));
    return g;
}

inline double exponent_min(const ExponentFunction& p) {
    double m = p.limit_at_zero();
    if (p.limit_at_infinity()) m = std::min(m, *p.limit_at_infinity());
    for (double t : classify_grid(p, 256)) m = std::min(m, p(t));
    return m;
}

} // namespace detail

/// Measured decay constant at one endpoint: the grid supremum of
/// |p(t) - p(limit)| times the matching log factor, with a divergence flag
/// set when the running supremum keeps growing under range extension.
struct DecayEstimate {
    double constant = 0.0;
    bool diverges = false;
};

struct ClassReport {
    double p_minus = 0.0;
    double p_plus = 0.0;
    DecayEstimate decay_zero;
    std::optional<DecayEstimate> decay_infinity; // absent for finite domains
    std::vector<std::pair<double, bool>> in_class_Pa; // per requested threshold

    /// Both decay conditions hold (finite measured constants).
    bool decays() const {
        return !decay_zero.diverges && (!decay_infinity || !decay_infinity->diverges);
    }
};

/// Compute bounds, decay constants and class membership for the requested
/// thresholds.  Divergence is declared when the running supremum of the
/// decay product still grows by a factor >= 2 across dyadic range
/// extensions; a converging product saturates well before the last probes.
inline ClassReport classify(const ExponentFunction& p, const std::vector<double>& thresholds = {}) {
    ClassReport rep;
    double mn = p.limit_at_zero(), mx = p.limit_at_zero();
    if (p.limit_at_infinity()) {
        mn = std::min(mn, *p.limit_at_infinity());
        mx = std::max(mx, *p.limit_at_infinity());
    }
    for (double t : detail::classify_grid(p)) {
        double v = p(t);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    rep.p_minus = mn;
    rep.p_plus = mx;

    auto probe = [&](bool at_zero) {
        DecayEstimate est;
        double sup = 0.0;
        double checkpoints[4] = {0, 0, 0, 0};
        const double scale = p.infinite_domain() ? 1.0 : p.domain_length();
        for (int k = 1; k <= 60; ++k) {
            double t = at_zero ? scale * std::ldexp(1.0, -k) : std::ldexp(1.0, k);
            double lim = at_zero ? p.limit_at_zero() : *p.limit_at_infinity();
            double factor = at_zero ? std::log(scale / t) : std::log(std::numbers::e + t);
            double prod = std::fabs(p(t) - lim) * factor;
            sup = std::max(sup, prod);
            if (k % 15 == 0) checkpoints[k / 15 - 1] = sup;
        }
        est.constant = sup;
        // Running sups: a converging product saturates (last segment flat),
        // a diverging one keeps growing through the deepest probes.
        est.diverges = checkpoints[3] > 1e-12 && checkpoints[3] >= 2.0 * checkpoints[0] &&
                       checkpoints[3] >= 1.1 * checkpoints[2];
        return est;
    };

    rep.decay_zero = probe(true);
    // grid sup over t <= scale/2 contributes to the reported constant as well
    {
        const double scale = p.infinite_domain() ? 1.0 : p.domain_length();
        for (double t : detail::classify_grid(p))
            if (t <= 0.5 * scale && t < scale) {
                double prod = std::fabs(p(t) - p.limit_at_zero()) * std::log(scale / t);
                rep.decay_zero.constant = std::max(rep.decay_zero.constant, prod);
            }
    }
    if (p.infinite_domain()) {
        rep.decay_infinity = probe(false);
        for (double t : detail::classify_grid(p))
            if (t >= 2.0) {
                double prod = std::fabs(p(t) - *p.limit_at_infinity()) * std::log(std::numbers::e + t);
                rep.decay_infinity->constant = std::max(rep.decay_infinity->constant, prod);
            }
    }
    for (double a : thresholds)
        rep.in_class_Pa.emplace_back(a, a < rep.p_minus && std::isfinite(rep.p_plus));
    return rep;
}

/// Pointwise conjugate exponent p' with 1/p'(t) = 1 - 1/p(t).  Exact at
/// every point (wraps the evaluator rather than resampling the image).
inline ExponentFunction conjugate(const ExponentFunction& p) {
    if (detail::exponent_min(p) <= 1.0 + 1e-12)
        throw std::domain_error("conjugate: undefined unless p_minus > 1");
    auto conj = [](double v) { return v / (v - 1.0); };
    if (p.constant_value()) return ExponentFunction::constant(conj(*p.constant_value()), p.domain_length());
    std::optional<double> li;
    if (p.limit_at_infinity()) li = conj(*p.limit_at_infinity());
    ExponentFunction base = p;
    return ExponentFunction::formula([base, conj](double t) { return conj(base(t)); },
                                     conj(p.limit_at_zero()), li, p.domain_length(), p.knots(),
                                     "conjugate");
}

/// t -> 1/p(t), with limits mapped accordingly.
inline ExponentFunction reciprocal(const ExponentFunction& p) {
    if (p.constant_value()) return ExponentFunction::constant(1.0 / *p.constant_value(), p.domain_length());
    std::optional<double> li;
    if (p.limit_at_infinity()) li = 1.0 / *p.limit_at_infinity();
    ExponentFunction base = p;
    return ExponentFunction::formula([base](double t) { return 1.0 / base(t); },
                                     1.0 / p.limit_at_zero(), li, p.domain_length(), p.knots(),
                                     "reciprocal");
}

/// Affine combination  c0 + sum_i coef_i * e_i(t); knots are merged.  Used to
/// assemble composite power profiles such as gamma + 1/p - 1/q.
inline ExponentFunction exponent_sum(std::vector<std::pair<double, ExponentFunction>> parts,
                                     double c0 = 0.0) {
    if (parts.empty()) return ExponentFunction::constant(c0);
    bool all_const = true;
    double const_val = c0;
    double const_dom = ExponentFunction::kInf;
    for (const auto& [c, e] : parts) {
        if (!e.constant_value()) {
            all_const = false;
            break;
        }
        const_val += c * *e.constant_value();
        const_dom = std::min(const_dom, e.domain_length());
    }
    if (all_const) return ExponentFunction::constant(const_val, const_dom);
    double l0 = c0;
    bool have_inf = true;
    double linf = c0;
    double dom = ExponentFunction::kInf;
    std::vector<double> knots;
    for (const auto& [c, e] : parts) {
        l0 += c * e.limit_at_zero();
        if (e.limit_at_infinity())
            linf += c * *e.limit_at_infinity();
        else
            have_inf = false;
        dom = std::min(dom, e.domain_length());
        knots.insert(knots.end(), e.knots().begin(), e.knots().end());
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    auto fn = [parts, c0](double t) {
        double v = c0;
        for (const auto& [c, e] : parts) v += c * e(t);
        return v;
    };
    return ExponentFunction::formula(fn, l0, have_inf ? std::optional<double>(linf) : std::nullopt,
                                     dom, std::move(knots), "combined");
}

enum class ExponentMode { log_decay, log_log_violation, oscillating };

inline const char* to_string(ExponentMode m) {
    switch (m) {
        case ExponentMode::log_decay: return "log-decay";
        case ExponentMode::log_log_violation: return "log-log-violation";
        case ExponentMode::oscillating: return "oscillating";
    }
    return "?";
}

/// Construct a test exponent with prescribed limits.
///
///  - log-decay: smooth, satisfies the endpoint decay conditions with a
///    measured constant proportional to the amplitude.
///  - log-log-violation: the product |p(t)-p(0)| ln(1/t) grows without bound
///    toward 0 (decay condition deliberately broken there).
///  - oscillating: a square wave in ln t under a log-decaying envelope; the
///    endpoint conditions hold, yet the function has interior jumps, so no
///    pointwise continuity modulus holds between the endpoints.
inline ExponentFunction make_test_exponent(double limit_zero, double limit_infinity,
                                           double amplitude, ExponentMode mode) {
    const double p0 = limit_zero, pinf = limit_infinity, A = amplitude;
    const double ke = std::pow(std::log(std::numbers::e + 1.0), 2);
    auto sigma = [](double t) { return 0.5 * (1.0 + std::tanh(0.5 * std::log(t))); };
    auto env = [ke](double t) {
        return ke / (std::log(std::numbers::e + 1.0 / t) * std::log(std::numbers::e + t));
    };
    auto base = [p0, pinf, sigma](double t) { return p0 + (pinf - p0) * sigma(t); };

    std::function<double(double)> fn;
    std::vector<double> knots;
    switch (mode) {
        case ExponentMode::log_decay:
            fn = [base, env, A](double t) { return base(t) + A * env(t); };
            break;
        case ExponentMode::log_log_violation: {
            const double ee = std::exp(std::numbers::e);
            const double m1 = 1.0 / std::log(std::log(ee + 1.0));
            fn = [base, A, ee, m1](double t) {
                double m = (t <= 1.0)
                               ? 1.0 / std::log(std::log(ee + 1.0 / t))
                               : m1 * std::log(std::numbers::e + 1.0) / std::log(std::numbers::e + t);
                return base(t) + A * m;
            };
            break;
        }
        case ExponentMode::oscillating: {
            const double period = std::log(4.0);
            fn = [base, env, A, period](double t) {
                double u = std::log(t);
                long k = static_cast<long>(std::floor(u / period));
                double sq = (k % 2 == 0) ? 1.0 : -1.0;
                return base(t) + A * sq * env(t);
            };
            for (int k = -66; k <= 66; ++k) knots.push_back(std::exp(period * k));
            break;
        }
    }
    auto e = ExponentFunction::formula(fn, p0, pinf, ExponentFunction::kInf, std::move(knots),
                                       to_string(mode), A);
    // integrability exponents must stay positive; weight powers (negative or
    // zero limits) may take any sign
    if (p0 > 0.0 && pinf > 0.0 && detail::exponent_min(e) <= 0.0)
        throw std::invalid_argument("make_test_exponent: parameters produce nonpositive values");
    return e;
}

// ---------------------------------------------------------------------------
// serialization: limit0=..., limitInf=..., samples=[(t,v),...], mode=..., amplitude=...

inline std::string serialize_exponent(const ExponentFunction& p) {
    char buf[64];
    std::string out;
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out += "limit0=" + num(p.limit_at_zero());
    out += ", limitInf=";
    out += p.limit_at_infinity() ? num(*p.limit_at_infinity()) : std::string("none");
    out += ", samples=[";
    bool first = true;
    for (const auto& s : p.samples()) {
        if (!first) out += ",";
        first = false;
        out += "(" + num(s.t) + "," + num(s.value) + ")";
    }
    out += "], mode=" + p.mode();
    out += ", amplitude=" + num(p.amplitude());
    return out;
}

/// `finite_domain_hint` supplies the domain length when the block declares
/// limitInf=none (finite domain); blocks with a limit at infinity always
/// yield infinite-domain exponents.
inline ExponentFunction parse_exponent(const std::string& text,
                                       double finite_domain_hint = ExponentFunction::kInf) {
    auto fail = [&](const std::string& why) {
        throw std::runtime_error("parse_exponent: " + why + " in '" + text + "'");
    };
    double limit0 = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> limit_inf;
    bool limit_inf_none = false;
    std::vector<ExponentFunction::Sample> samples;
    std::string mode = "samples";
    double amplitude = 0.0;

    // split on top-level commas (samples brackets protected)
    std::vector<std::string> fields;
    int depth = 0;
    std::string cur;
    for (char c : text) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == ',' && depth == 0) {
            fields.push_back(cur);
            cur.clear();
        } else
            cur += c;
    }
    if (!cur.empty()) fields.push_back(cur);

    auto trim = [](std::string s) {
        auto a = s.find_first_not_of(" \t");
        auto b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    for (auto& f : fields) {
        auto eq = f.find('=');
        if (eq == std::string::npos) fail("expected key=value");
        std::string key = trim(f.substr(0, eq)), val = trim(f.substr(eq + 1));
        if (key == "limit0")
            limit0 = std::stod(val);
        else if (key == "limitInf") {
            if (val == "none")
                limit_inf_none = true;
            else
                limit_inf = std::stod(val);
        } else if (key == "mode")
            mode = val;
        else if (key == "amplitude")
            amplitude = std::stod(val);
        else if (key == "samples") {
            if (val.size() < 2 || val.front() != '[' || val.back() != ']') fail("bad samples list");
            std::string inner = val.substr(1, val.size() - 2);
            std::size_t i = 0;
            while (i < inner.size()) {
                auto open = inner.find('(', i);
                if (open == std::string::npos) break;
                auto close = inner.find(')', open);
                if (close == std::string::npos) fail("unbalanced sample tuple");
                std::string pair = inner.substr(open + 1, close - open - 1);
                auto comma = pair.find(',');
                if (comma == std::string::npos) fail("sample tuple needs two entries");
                samples.push_back({std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1))});
                i = close + 1;
            }
        } else
            fail("unknown key '" + key + "'");
    }
    if (std::isnan(limit0)) fail("limit0 missing");

    double domain = ExponentFunction::kInf;
    if (limit_inf_none) {
        domain = finite_domain_hint;
        if (std::isinf(domain) && !samples.empty()) domain = samples.back().t;
        if (std::isinf(domain)) fail("limitInf=none needs a finite domain length");
    }
    if (mode == "constant") return ExponentFunction::constant(limit0, domain);
    if (mode == "samples") {
        if (samples.empty()) fail("samples required for mode=samples");
        return ExponentFunction::from_samples(std::move(samples), limit0, limit_inf, domain);
    }
    if (!limit_inf) fail("constructed modes need limitInf");
    ExponentMode m;
    if (mode == "log-decay")
        m = ExponentMode::log_decay;
    else if (mode == "log-log-violation")
        m = ExponentMode::log_log_violation;
    else if (mode == "oscillating")
        m = ExponentMode::oscillating;
    else {
        fail("unknown mode '" + mode + "'");
        return ExponentFunction::constant(1);
    }
    return make_test_exponent(limit0, *limit_inf, amplitude, m);
}

} // namespace lorentzx
