#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "exponent.hpp"
#include "families.hpp"
#include "grid.hpp"
#include "hardy.hpp"
#include "norms.hpp"
#include "report.hpp"

namespace lorentzx {

// ---------------------------------------------------------------------------
// pointwise kernels.  All operators act on step functions over 1-D domains;
// singular kernels integrate in closed form per cell, so no quadrature error
// enters the measured constants.

namespace detail {

/// Average of |f| over B(x, r) with the full-ball denominator 2r; the
/// numerator sees only the domain (f is zero outside).
class BallAverages {
public:
    explicit BallAverages(const StepFunction& f) : prefix_(f.abs()) {}

    double average(double x, double r) const { return (prefix_(x + r) - prefix_(x - r)) / (2.0 * r); }
    double mass(double x, double r) const { return prefix_(x + r) - prefix_(x - r); }

private:
    PrefixIntegral prefix_;
};

} // namespace detail

/// Hardy-Littlewood maximal value at one point.  The ball average is affine
/// in r between radii where an endpoint crosses a breakpoint, hence
/// piecewise monotone: the supremum is attained at a breakpoint radius (or
/// in the r -> 0 limit, giving |f| itself).
inline double maximal_at(const StepFunction& f, const detail::BallAverages& balls, double x) {
    double best = std::fabs(f(x));
    for (double b : f.partition().breakpoints()) {
        double r = std::fabs(x - b);
        if (r > 0.0) best = std::max(best, balls.average(x, r));
    }
    return best;
}

inline StepFunction maximal(const StepFunction& f) {
    const Partition& part = f.partition();
    const auto& bp = part.breakpoints();
    const std::size_t n = part.cells();
    std::vector<double> cums(n + 1, 0.0), av(n);
    for (std::size_t i = 0; i < n; ++i) {
        av[i] = std::fabs(f.value(i));
        cums[i + 1] = cums[i] + av[i] * part.width(i);
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = part.midpoint(i);
        double best = av[i];
        // radii hitting breakpoints at or left of x; the far endpoint
        // y = 2x - b_j moves right monotonically as j decreases
        std::size_t m = i;
        for (std::size_t j = i + 1; j-- > 0;) {
            const double r = x - bp[j];
            if (!(r > 0.0)) continue;
            const double y = x + r;
            while (m < n && bp[m + 1] < y) ++m;
            const double Ay = (m >= n || y >= bp[n]) ? cums[n] : cums[m] + av[m] * (y - bp[m]);
            best = std::max(best, (Ay - cums[j]) / (2.0 * r));
        }
        // radii hitting breakpoints right of x; y = 2x - b_j moves left
        std::size_t m2 = i;
        for (std::size_t j = i + 1; j <= n; ++j) {
            const double r = bp[j] - x;
            const double y = x - r;
            while (m2 > 0 && bp[m2] > y) --m2;
            const double Ay = (y <= bp[0]) ? 0.0 : cums[m2] + av[m2] * (y - bp[m2]);
            best = std::max(best, (cums[j] - Ay) / (2.0 * r));
        }
        out[i] = best;
    }
    return StepFunction(part, std::move(out));
}

/// Fractional maximal value: denominator (2r)^{1-alpha}.  Between
/// breakpoint radii the mass is affine a + b r, and (a + b r) r^{alpha-1}
/// has at most one interior critical point r* = a(1-alpha)/(alpha b),
/// which is included exactly.
inline double fractional_maximal_at(const StepFunction& f, const detail::BallAverages& balls,
                                    double x, double alpha) {
    std::vector<double> radii;
    radii.reserve(f.partition().breakpoints().size());
    for (double b : f.partition().breakpoints()) {
        double r = std::fabs(x - b);
        if (r > 0.0) radii.push_back(r);
    }
    std::sort(radii.begin(), radii.end());
    auto value = [&](double r) { return balls.mass(x, r) / std::pow(2.0 * r, 1.0 - alpha); };
    double best = 0.0;
    double prev_r = 0.0, prev_m = 0.0;
    for (double r : radii) {
        double m = balls.mass(x, r);
        best = std::max(best, m / std::pow(2.0 * r, 1.0 - alpha));
        double dr = r - prev_r;
        if (dr > 0.0 && prev_r > 0.0) {
            double slope = (m - prev_m) / dr;
            double a = prev_m - slope * prev_r;
            if (slope > 0.0 && a > 0.0) {
                double rc = a * (1.0 - alpha) / (alpha * slope);
                if (rc > prev_r && rc < r) best = std::max(best, value(rc));
            }
        }
        prev_r = r;
        prev_m = m;
    }
    return best;
}

inline StepFunction fractional_maximal(const StepFunction& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("fractional_maximal: need 0 < alpha < 1");
    const Partition& part = f.partition();
    const auto& bp = part.breakpoints();
    const std::size_t n = part.cells();
    std::vector<double> cums(n + 1, 0.0), av(n);
    for (std::size_t i = 0; i < n; ++i) {
        av[i] = std::fabs(f.value(i));
        cums[i + 1] = cums[i] + av[i] * part.width(i);
    }
    std::vector<double> out(n);
    std::vector<std::pair<double, double>> rm; // (radius, ball mass), merged ascending
    for (std::size_t i = 0; i < n; ++i) {
        const double x = part.midpoint(i);
        rm.clear();
        // merge the two monotone candidate sequences by radius
        std::size_t jl = i + 1, jr = i + 1; // left candidates: jl-1 down; right: jr up
        std::size_t m = i, m2 = i;
        auto mass_left = [&](std::size_t j) { // radius x - bp[j]
            const double y = 2.0 * x - bp[j];
            while (m < n && bp[m + 1] < y) ++m;
            const double Ay = (m >= n || y >= bp[n]) ? cums[n] : cums[m] + av[m] * (y - bp[m]);
            return Ay - cums[j];
        };
        auto mass_right = [&](std::size_t j) { // radius bp[j] - x
            const double y = 2.0 * x - bp[j];
            while (m2 > 0 && bp[m2] > y) --m2;
            const double Ay = (y <= bp[0]) ? 0.0 : cums[m2] + av[m2] * (y - bp[m2]);
            return cums[j] - Ay;
        };
        while (jl > 0 || jr <= n) {
            const double rl = jl > 0 ? x - bp[jl - 1] : std::numeric_limits<double>::infinity();
            const double rr = jr <= n ? bp[jr] - x : std::numeric_limits<double>::infinity();
            if (rl <= rr) {
                if (rl > 0.0) rm.emplace_back(rl, mass_left(jl - 1));
                --jl;
            } else {
                rm.emplace_back(rr, mass_right(jr));
                ++jr;
            }
        }
        double best = 0.0;
        double prev_r = 0.0, prev_m = 0.0;
        for (auto [r, mass] : rm) {
            if (mass > prev_m || prev_r == 0.0)
                best = std::max(best, mass / std::pow(2.0 * r, 1.0 - alpha));
            const double dr = r - prev_r;
            if (dr > 0.0 && prev_r > 0.0 && mass > prev_m) {
                const double slope = (mass - prev_m) / dr;
                const double a = prev_m - slope * prev_r;
                if (slope > 0.0 && a > 0.0) {
                    const double rc = a * (1.0 - alpha) / (alpha * slope);
                    if (rc > prev_r && rc < r) {
                        const double mc = a + slope * rc;
                        best = std::max(best, mc / std::pow(2.0 * rc, 1.0 - alpha));
                    }
                }
            }
            prev_r = r;
            prev_m = mass;
        }
        out[i] = best;
    }
    return StepFunction(part, std::move(out));
}

/// Riesz potential (0 < alpha < 1): per-cell antiderivative of |x-y|^{alpha-1},
/// singular cell included exactly (the singularity is integrable).
inline double riesz_at(const StepFunction& f, double x, double alpha) {
    double sum = 0.0;
    const Partition& part = f.partition();
    for (std::size_t i = 0; i < f.cells(); ++i) {
        double v = f.value(i);
        if (v == 0.0) continue;
        double c = part.left(i), d = part.right(i), k;
        if (d <= x)
            k = (std::pow(x - c, alpha) - std::pow(x - d, alpha)) / alpha;
        else if (c >= x)
            k = (std::pow(d - x, alpha) - std::pow(c - x, alpha)) / alpha;
        else
            k = (std::pow(x - c, alpha) + std::pow(d - x, alpha)) / alpha;
        sum += v * k;
    }
    return sum;
}

inline StepFunction riesz_potential(const StepFunction& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("riesz_potential: need 0 < alpha < 1");
    std::vector<double> out(f.cells());
    for (std::size_t i = 0; i < f.cells(); ++i)
        out[i] = riesz_at(f, f.partition().midpoint(i), alpha);
    return StepFunction(f.partition(), std::move(out));
}

/// Principal-value integral of f(y)/(x-y): exact log antiderivatives per
/// cell; for x inside a cell the symmetric cancellation is already in the
/// closed form ln((x-c)/(d-x)).
inline double hilbert_at(const StepFunction& f, double x) {
    double sum = 0.0;
    double delta_coef = 0.0; // coefficient of ln(delta) from cells abutting x
    const Partition& part = f.partition();
    for (std::size_t i = 0; i < f.cells(); ++i) {
        double v = f.value(i);
        if (v == 0.0) continue;
        double c = part.left(i), d = part.right(i);
        if (d == x) { // cell ends exactly at x: v (ln(x-c) - ln delta)
            sum += v * std::log(x - c);
            delta_coef -= v;
        } else if (c == x) { // cell starts exactly at x: v (ln delta - ln(d-x))
            sum -= v * std::log(d - x);
            delta_coef += v;
        } else if (d < x) {
            sum += v * std::log((x - c) / (x - d));
        } else if (c > x) {
            sum -= v * std::log((d - x) / (c - x));
        } else { // x interior: symmetric cancellation built into the closed form
            sum += v * std::log((x - c) / (d - x));
        }
    }
    if (delta_coef != 0.0) {
        // a genuine jump of f at x: the principal value diverges there
        return delta_coef > 0.0 ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
    }
    return sum;
}

inline StepFunction hilbert(const StepFunction& f) {
    std::vector<double> out(f.cells());
    for (std::size_t i = 0; i < f.cells(); ++i)
        out[i] = hilbert_at(f, f.partition().midpoint(i));
    return StepFunction(f.partition(), std::move(out));
}

/// Poisson extension at height y > 0, kernel (1/pi) y / ((x-s)^2 + y^2).
inline double poisson_at(const StepFunction& f, double x, double y) {
    double sum = 0.0;
    const Partition& part = f.partition();
    for (std::size_t i = 0; i < f.cells(); ++i) {
        double v = f.value(i);
        if (v == 0.0) continue;
        sum += v * (std::atan((x - part.left(i)) / y) - std::atan((x - part.right(i)) / y));
    }
    return sum / std::numbers::pi;
}

/// Sup over a log grid of heights of |P_y f|; the truncated stand-in for
/// the sup over all y > 0.
inline double poisson_sup_at(const StepFunction& f, double x, std::size_t heights = 64) {
    double wmin = f.partition().width(0);
    for (std::size_t i = 1; i < f.cells(); ++i) wmin = std::min(wmin, f.partition().width(i));
    const double y_lo = wmin, y_hi = 10.0 * f.partition().length();
    double best = 0.0;
    for (std::size_t j = 0; j < heights; ++j) {
        double y = y_lo * std::pow(y_hi / y_lo, static_cast<double>(j) / static_cast<double>(heights - 1));
        best = std::max(best, std::fabs(poisson_at(f, x, y)));
    }
    return best;
}

inline StepFunction poisson_sup(const StepFunction& f, std::size_t heights = 64) {
    std::vector<double> out(f.cells());
    for (std::size_t i = 0; i < f.cells(); ++i)
        out[i] = poisson_sup_at(f, f.partition().midpoint(i), heights);
    return StepFunction(f.partition(), std::move(out));
}

// ---------------------------------------------------------------------------
// convolution

namespace detail {

/// Second antiderivative of a step function: piecewise quadratic, constant
/// slope (total mass) beyond the domain.
class SecondAntiderivative {
public:
    explicit SecondAntiderivative(const StepFunction& f) : part_(f.partition()), vals_(f.values()) {
        const std::size_t n = part_.cells();
        a1_.resize(n + 1);
        a2_.resize(n + 1);
        a1_[0] = a2_[0] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double w = part_.width(i);
            a2_[i + 1] = a2_[i] + a1_[i] * w + 0.5 * vals_[i] * w * w;
            a1_[i + 1] = a1_[i] + vals_[i] * w;
        }
    }

    double operator()(double y) const {
        if (y <= part_.origin()) return 0.0;
        if (y >= part_.truncation()) return a2_.back() + a1_.back() * (y - part_.truncation());
        std::size_t i = part_.cell_index(y);
        double d = y - part_.left(i);
        return a2_[i] + a1_[i] * d + 0.5 * vals_[i] * d * d;
    }

private:
    Partition part_;
    std::vector<double> vals_;
    std::vector<double> a1_, a2_;
};

} // namespace detail

/// Exact cell averages of (k*f) on the target partition: the convolution of
/// two step functions is piecewise linear and its integral is evaluated in
/// closed form, so mass is conserved exactly.
inline StepFunction convolve(const StepFunction& k, const StepFunction& f, const Partition& target) {
    detail::SecondAntiderivative F2(f);
    auto B = [&](double x) { // integral of (k*f) up to x
        double s = 0.0;
        for (std::size_t j = 0; j < k.cells(); ++j) {
            double u = k.value(j);
            if (u == 0.0) continue;
            s += u * (F2(x - k.partition().left(j)) - F2(x - k.partition().right(j)));
        }
        return s;
    };
    std::vector<double> out(target.cells());
    double prev = B(target.left(0));
    for (std::size_t i = 0; i < target.cells(); ++i) {
        double next = B(target.right(i));
        out[i] = (next - prev) / target.width(i);
        prev = next;
    }
    return StepFunction(target, std::move(out));
}

inline StepFunction convolve(const StepFunction& k, const StepFunction& f) {
    double lo = k.partition().origin() + f.partition().origin();
    double hi = k.partition().truncation() + f.partition().truncation();
    std::size_t cells = std::max<std::size_t>(k.cells() + f.cells(), 16);
    return convolve(k, f, Partition::uniform(lo, hi, cells));
}

// ---------------------------------------------------------------------------
// rearrangement-estimate checks

enum class BoundKind { maximal, riesz, singular, convolution };

namespace detail {

/// Tail integral  t -> int_t^l g(s) s^{alpha-1} ds for a step g on [0, l];
/// alpha = 0 selects the logarithmic kernel 1/s.
class PowerTail {
public:
    PowerTail(const StepFunction& g, double alpha) : part_(g.partition()), vals_(g.values()), alpha_(alpha) {
        const std::size_t n = part_.cells();
        suffix_.assign(n + 1, 0.0);
        for (std::size_t i = n; i-- > 0;)
            suffix_[i] = suffix_[i + 1] + vals_[i] * piece(part_.left(i), part_.right(i));
    }

    double operator()(double t) const {
        if (t >= part_.truncation()) return 0.0;
        if (t <= part_.origin()) return suffix_.front();
        std::size_t i = part_.cell_index(t);
        return suffix_[i + 1] + vals_[i] * piece(t, part_.right(i));
    }

private:
    double piece(double a, double b) const {
        if (alpha_ == 0.0) return std::log(b / a);
        return (std::pow(b, alpha_) - std::pow(a, alpha_)) / alpha_;
    }

    Partition part_;
    std::vector<double> vals_;
    double alpha_;
    std::vector<double> suffix_;
};

} // namespace detail

/// sup_t (Tf)*(t) / rhs(t) over the rearranged mesh of Tf, where rhs is the
/// constant-free right-hand side of the matching rearrangement estimate.
/// The classical inequalities state lhs <= C rhs; the measured constant is
/// the grid estimate of the best C.
///
/// The convolution estimate is implemented with f* in its first term (the
/// classical O'Neil form); `note` flags that choice on such reports.
struct RearrangementCheck {
    double measured_constant = 0.0;
    bool holds = true; // rhs positive wherever lhs is
    const char* note = "";
};

inline RearrangementCheck check_rearrangement_bound(const StepFunction& Tf, const StepFunction& f,
                                                    BoundKind kind, double alpha = 0.0,
                                                    const StepFunction* kernel = nullptr) {
    Rearranged lhs = rearrange(Tf);
    Rearranged fs = rearrange(f);
    DoubleStarEval fss(fs);
    PrefixIntegral F(fs.fn);
    std::optional<detail::PowerTail> tail;
    std::optional<Rearranged> ks;
    std::optional<DoubleStarEval> kss;
    std::optional<detail::PowerTail> ktail; // int_t k* f* via product step
    std::optional<PrefixIntegral> Fk;

    switch (kind) {
        case BoundKind::maximal:
            break;
        case BoundKind::riesz:
            tail.emplace(fs.fn, alpha);
            break;
        case BoundKind::singular:
            tail.emplace(fs.fn, 0.0);
            break;
        case BoundKind::convolution: {
            if (!kernel) throw std::invalid_argument("check_rearrangement_bound: kernel required");
            ks = rearrange(*kernel);
            kss.emplace(*ks);
            // product step k*(s) f*(s) on the merged mesh
            std::vector<double> pts;
            for (double b : fs.partition().breakpoints()) pts.push_back(b);
            for (double b : ks->partition().breakpoints()) pts.push_back(b);
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            if (pts.front() > 0.0) pts.insert(pts.begin(), 0.0);
            std::vector<double> prod(pts.size() - 1);
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                double mid = 0.5 * (pts[i] + pts[i + 1]);
                prod[i] = fs(mid) * (*ks)(mid);
            }
            StepFunction pstep(Partition::from_breakpoints(pts), prod);
            Fk.emplace(pstep);
            break;
        }
    }

    auto rhs = [&](double t) {
        switch (kind) {
            case BoundKind::maximal:
                return fss(t);
            case BoundKind::riesz:
                return std::pow(t, alpha - 1.0) * F(t) + (*tail)(t);
            case BoundKind::singular:
                return F(t) / t + (*tail)(t);
            case BoundKind::convolution:
                return (*kss)(t)*F(t) + (Fk->total() - (*Fk)(t));
        }
        return 0.0;
    };

    RearrangementCheck rep;
    if (kind == BoundKind::convolution) rep.note = "first term uses f*";
    for (std::size_t i = 0; i < lhs.fn.cells(); ++i) {
        double L = lhs.fn.value(i);
        if (L <= 0.0) continue;
        double t = lhs.partition().midpoint(i);
        double R = rhs(t);
        if (!(R > 0.0)) {
            rep.holds = false;
            continue;
        }
        rep.measured_constant = std::max(rep.measured_constant, L / R);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// boundedness experiments

struct OperatorSpec {
    enum class Kind { maximal, fractional_maximal, riesz, hilbert, convolution, poisson_sup };
    Kind kind = Kind::maximal;
    double alpha = 0.0;
    std::optional<StepFunction> kernel;
};

inline const char* to_string(OperatorSpec::Kind k) {
    using K = OperatorSpec::Kind;
    switch (k) {
        case K::maximal: return "maximal";
        case K::fractional_maximal: return "fractional-maximal";
        case K::riesz: return "riesz";
        case K::hilbert: return "hilbert";
        case K::convolution: return "convolution";
        case K::poisson_sup: return "poisson-sup";
    }
    return "?";
}

inline StepFunction apply_operator(const OperatorSpec& op, const StepFunction& f) {
    using K = OperatorSpec::Kind;
    switch (op.kind) {
        case K::maximal: return maximal(f);
        case K::fractional_maximal: return fractional_maximal(f, op.alpha);
        case K::riesz: return riesz_potential(f.abs(), op.alpha);
        case K::hilbert: return hilbert(f);
        case K::convolution:
            if (!op.kernel) throw std::invalid_argument("apply_operator: convolution needs a kernel");
            return convolve(*op.kernel, f);
        case K::poisson_sup: return poisson_sup(f, 64);
    }
    throw std::logic_error("apply_operator: unknown kind");
}

/// Target integrability exponent of the fractional operators:
/// 1/p_alpha = 1/p - alpha.
inline ExponentFunction shift_exponent(const ExponentFunction& p, double alpha) {
    ClassReport cls = classify(p);
    if (!(cls.p_plus < 1.0 / alpha))
        throw std::invalid_argument("shift_exponent: requires p_plus < 1/alpha");
    if (p.constant_value()) {
        double v = *p.constant_value();
        return ExponentFunction::constant(v / (1.0 - alpha * v), p.domain_length());
    }
    ExponentFunction base = p;
    std::optional<double> li;
    if (p.limit_at_infinity()) li = *p.limit_at_infinity() / (1.0 - alpha * *p.limit_at_infinity());
    return ExponentFunction::formula(
        [base, alpha](double t) {
            double v = base(t);
            return v / (1.0 - alpha * v);
        },
        p.limit_at_zero() / (1.0 - alpha * p.limit_at_zero()), li, p.domain_length(), p.knots(),
        "shifted");
}

/// Ratio sweep ||Tf||_target / ||f||_source in the (weighted) Lorentz norms;
/// fractional kinds land in the shifted target space.  Verdict per the
/// refinement/ladder protocol.
inline BoundednessReport boundedness_experiment(const OperatorSpec& op, const NormSpec& spec,
                                                const Family& family, const Partition& base,
                                                const Protocol& proto = {}) {
    BoundednessReport rep;
    const bool fractional =
        op.kind == OperatorSpec::Kind::riesz || op.kind == OperatorSpec::Kind::fractional_maximal;
    NormSpec source = spec;
    NormSpec target = spec;
    if (fractional) target.p = shift_exponent(spec.p, op.alpha);

    const double p0 = spec.p.limit_at_zero();
    if (spec.gamma) {
        const double g0 = spec.gamma->limit_at_zero();
        rep.condition_flags.push_back(std::string("gamma(0)<1/p'(0): ") +
                                      (g0 < 1.0 - 1.0 / p0 ? "yes" : "no"));
        if (fractional)
            rep.condition_flags.push_back(std::string("gamma(0)>alpha-1/p(0): ") +
                                          (g0 > op.alpha - 1.0 / p0 ? "yes" : "no"));
        if (spec.p.infinite_domain() && spec.gamma->limit_at_infinity()) {
            const double gi = *spec.gamma->limit_at_infinity();
            const double pi = *spec.p.limit_at_infinity();
            rep.condition_flags.push_back(std::string("gamma(inf)<1/p'(inf): ") +
                                          (gi < 1.0 - 1.0 / pi ? "yes" : "no"));
            if (fractional)
                rep.condition_flags.push_back(std::string("gamma(inf)>alpha-1/p(inf): ") +
                                              (gi > op.alpha - 1.0 / pi ? "yes" : "no"));
        }
    }

    auto sweep = [&](const Partition& part, bool record) {
        double sup = 0.0;
        for (const auto& member : family) {
            StepFunction f = member.realize(part);
            double den = lorentz_norm(f, source);
            if (den == 0.0) continue;
            StepFunction g = apply_operator(op, f);
            double ratio = lorentz_norm(g, target) / den;
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
    Partition fine = deepen_grid(base, spec.p.infinite_domain(), proto.refinement_factor);
    rep.refinement_curve.emplace_back(fine.cells(), sweep(fine, false));
    rep.verdict = decide_verdict(rep, proto);
    return rep;
}

} // namespace lorentzx
