#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorentzx {

namespace detail {

/// Pairwise summation: deterministic and accurate regardless of length.
inline double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

} // namespace detail

/// Breakpoints of a finite interval mesh.  The canonical rearrangement axis
/// starts at 0; shifted domains (e.g. symmetric intervals around the origin)
/// are allowed for functions living in x-space.
class Partition {
public:
    enum class Style { geometric, uniform, custom };

    /// Geometric mesh of [0, truncation]: cell widths grow by a constant
    /// ratio, the first interior breakpoint equals t_min.  Adjacent cell
    /// widths therefore keep a bounded ratio while breakpoints cluster
    /// logarithmically toward 0.
    static Partition geometric(double t_min, double truncation, std::size_t cells) {
        if (!(t_min > 0.0) || !(truncation > t_min))
            throw std::invalid_argument("Partition::geometric: need 0 < t_min < truncation");
        if (cells < 2) throw std::invalid_argument("Partition::geometric: need at least 2 cells");
        const double n = static_cast<double>(cells);
        if (t_min * n >= truncation)
            throw std::invalid_argument("Partition::geometric: t_min too large for cell count");
        // Widths w_k = t_min * r^k; solve for s = ln r so the mesh ends at truncation.
        const double target = std::log(truncation / t_min);
        auto logsum = [&](double s) {
            // ln( (r^n - 1) / (r - 1) ) computed stably
            double a = n * s, b = s;
            double la = (a > 700.0) ? a : std::log(std::expm1(a));
            double lb = std::log(std::expm1(b));
            return la - lb;
        };
        double lo = 1e-15, hi = std::log(4.0);
        if (logsum(hi) < target)
            throw std::invalid_argument("Partition::geometric: range too wide, increase cells");
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (logsum(mid) < target ? lo : hi) = mid;
        }
        const double s = 0.5 * (lo + hi);
        std::vector<double> pts(cells + 1);
        pts[0] = 0.0;
        const double lden = std::log(std::expm1(s));
        const double lt = std::log(t_min);
        for (std::size_t k = 1; k < cells; ++k) {
            const double ks = static_cast<double>(k) * s;
            pts[k] = (ks > 30.0) ? std::exp(lt + ks - lden)
                                 : t_min * std::expm1(ks) / std::expm1(s);
        }
        pts[cells] = truncation;
        return Partition(std::move(pts), Style::geometric);
    }

    /// Uniform mesh of [a, b].
    static Partition uniform(double a, double b, std::size_t cells) {
        if (!(b > a)) throw std::invalid_argument("Partition::uniform: need a < b");
        if (cells < 1) throw std::invalid_argument("Partition::uniform: need at least 1 cell");
        std::vector<double> pts(cells + 1);
        for (std::size_t k = 0; k <= cells; ++k)
            pts[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(cells);
        pts[0] = a;
        pts[cells] = b;
        return Partition(std::move(pts), Style::uniform);
    }

    static Partition from_breakpoints(std::vector<double> pts) {
        return Partition(std::move(pts), Style::custom);
    }

    std::size_t cells() const { return pts_->size() - 1; }
    double left(std::size_t i) const { return (*pts_)[i]; }
    double right(std::size_t i) const { return (*pts_)[i + 1]; }
    double width(std::size_t i) const { return (*pts_)[i + 1] - (*pts_)[i]; }
    double midpoint(std::size_t i) const { return 0.5 * ((*pts_)[i] + (*pts_)[i + 1]); }
    double origin() const { return pts_->front(); }
    double truncation() const { return pts_->back(); }
    double length() const { return pts_->back() - pts_->front(); }
    bool starts_at_zero() const { return pts_->front() == 0.0; }
    Style style() const { return style_; }
    const std::vector<double>& breakpoints() const { return *pts_; }

    /// Index of the cell containing t (right-open cells, last cell closed).
    std::size_t cell_index(double t) const {
        const auto& p = *pts_;
        if (t <= p.front()) return 0;
        if (t >= p.back()) return cells() - 1;
        auto it = std::upper_bound(p.begin(), p.end(), t);
        return static_cast<std::size_t>(it - p.begin()) - 1;
    }

    /// Split every cell into `factor` equal parts.
    Partition refined_linear(std::size_t factor) const {
        std::vector<double> pts;
        pts.reserve(cells() * factor + 1);
        for (std::size_t i = 0; i < cells(); ++i) {
            for (std::size_t j = 0; j < factor; ++j)
                pts.push_back(left(i) + width(i) * static_cast<double>(j) / static_cast<double>(factor));
        }
        pts.push_back(truncation());
        return Partition(std::move(pts), style_);
    }

    bool same_mesh(const Partition& o) const { return pts_ == o.pts_ || *pts_ == *o.pts_; }

private:
    Partition(std::vector<double> pts, Style style)
        : pts_(std::make_shared<const std::vector<double>>(std::move(pts))), style_(style) {
        const auto& p = *pts_;
        if (p.size() < 2) throw std::invalid_argument("Partition: need at least one cell");
        for (std::size_t i = 0; i + 1 < p.size(); ++i)
            if (!(p[i] < p[i + 1]))
                throw std::invalid_argument("Partition: breakpoints must be strictly increasing");
        if (!std::isfinite(p.front()) || !std::isfinite(p.back()))
            throw std::invalid_argument("Partition: breakpoints must be finite");
    }

    std::shared_ptr<const std::vector<double>> pts_;
    Style style_;
};

/// Piecewise-constant function on a Partition; the universal function
/// representation of the library.  Values are attached to right-open cells.
class StepFunction {
public:
    StepFunction(Partition part, std::vector<double> values)
        : part_(std::move(part)), vals_(std::move(values)) {
        if (vals_.size() != part_.cells())
            throw std::invalid_argument("StepFunction: one value per cell required");
    }

    static StepFunction zero(const Partition& p) {
        return StepFunction(p, std::vector<double>(p.cells(), 0.0));
    }

    static StepFunction constant(const Partition& p, double c) {
        return StepFunction(p, std::vector<double>(p.cells(), c));
    }

    /// Sample a callable at cell midpoints.
    template <class F>
    static StepFunction sampled(const Partition& p, F&& f) {
        std::vector<double> v(p.cells());
        for (std::size_t i = 0; i < p.cells(); ++i) v[i] = f(p.midpoint(i));
        return StepFunction(p, std::move(v));
    }

    /// Indicator of [a, b] snapped to the nearest breakpoints.
    static StepFunction indicator(const Partition& p, double a, double b) {
        std::vector<double> v(p.cells(), 0.0);
        for (std::size_t i = 0; i < p.cells(); ++i)
            if (p.left(i) >= a - 1e-15 * p.length() && p.right(i) <= b + 1e-15 * p.length())
                v[i] = 1.0;
        return StepFunction(p, std::move(v));
    }

    const Partition& partition() const { return part_; }
    std::size_t cells() const { return vals_.size(); }
    double value(std::size_t i) const { return vals_[i]; }
    const std::vector<double>& values() const { return vals_; }

    /// Right-continuous evaluation; 0 outside the domain.
    double operator()(double t) const {
        if (t < part_.origin() || t > part_.truncation()) return 0.0;
        return vals_[part_.cell_index(t)];
    }

    double integral() const {
        std::vector<double> terms(vals_.size());
        for (std::size_t i = 0; i < vals_.size(); ++i) terms[i] = vals_[i] * part_.width(i);
        return detail::pairwise_sum(terms);
    }

    double integral_abs() const {
        std::vector<double> terms(vals_.size());
        for (std::size_t i = 0; i < vals_.size(); ++i) terms[i] = std::fabs(vals_[i]) * part_.width(i);
        return detail::pairwise_sum(terms);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : vals_) m = std::max(m, std::fabs(v));
        return m;
    }

    StepFunction abs() const {
        std::vector<double> v(vals_);
        for (double& x : v) x = std::fabs(x);
        return StepFunction(part_, std::move(v));
    }

    template <class F>
    StepFunction map(F&& f) const {
        std::vector<double> v(vals_);
        for (double& x : v) x = f(x);
        return StepFunction(part_, std::move(v));
    }

    StepFunction scaled(double c) const {
        return map([c](double x) { return c * x; });
    }

    friend StepFunction operator+(const StepFunction& a, const StepFunction& b) {
        if (!a.part_.same_mesh(b.part_))
            throw std::invalid_argument("StepFunction: mismatched partitions in +");
        std::vector<double> v(a.vals_);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.vals_[i];
        return StepFunction(a.part_, std::move(v));
    }

private:
    Partition part_;
    std::vector<double> vals_;
};

/// Exact prefix integral A(y) = integral of f from the domain origin to y;
/// piecewise linear, evaluable anywhere (clamped outside).
class PrefixIntegral {
public:
    explicit PrefixIntegral(const StepFunction& f) : part_(f.partition()) {
        cums_.resize(part_.cells() + 1);
        cums_[0] = 0.0;
        for (std::size_t i = 0; i < part_.cells(); ++i)
            cums_[i + 1] = cums_[i] + f.value(i) * part_.width(i);
    }

    double operator()(double y) const {
        if (y <= part_.origin()) return 0.0;
        if (y >= part_.truncation()) return cums_.back();
        std::size_t i = part_.cell_index(y);
        double slope = (cums_[i + 1] - cums_[i]) / part_.width(i);
        return cums_[i] + slope * (y - part_.left(i));
    }

    double total() const { return cums_.back(); }
    double at_breakpoint(std::size_t k) const { return cums_[k]; }

private:
    Partition part_;
    std::vector<double> cums_;
};

/// Non-increasing rearrangement together with its mesh.
struct Rearranged {
    StepFunction fn;

    const Partition& partition() const { return fn.partition(); }
    double operator()(double t) const { return fn(t); }
};

/// Measure of { |f| > s }.  Widths of qualifying cells are summed in a
/// canonical order so the result is identical for a function and its
/// rearrangement.
inline double distribution(const StepFunction& f, double s) {
    if (s < 0.0) throw std::domain_error("distribution: level must be nonnegative");
    std::vector<std::pair<double, double>> hit; // (|value|, width)
    for (std::size_t i = 0; i < f.cells(); ++i) {
        double a = std::fabs(f.value(i));
        if (a > s) hit.emplace_back(a, f.partition().width(i));
    }
    std::sort(hit.begin(), hit.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
    });
    std::vector<double> w(hit.size());
    for (std::size_t i = 0; i < hit.size(); ++i) w[i] = hit[i].second;
    return detail::pairwise_sum(w);
}

/// Non-increasing rearrangement f*.  Exact for step functions: sort the
/// (|value|, width) pairs by value and lay the widths out from 0.
inline Rearranged rearrange(const StepFunction& f) {
    std::vector<std::pair<double, double>> cells(f.cells());
    for (std::size_t i = 0; i < f.cells(); ++i)
        cells[i] = {std::fabs(f.value(i)), f.partition().width(i)};
    std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first > y.first;
        return x.second < y.second;
    });
    std::vector<double> pts{0.0};
    std::vector<double> vals;
    pts.reserve(cells.size() + 1);
    vals.reserve(cells.size());
    for (const auto& [value, width] : cells) {
        double next = pts.back() + width;
        if (next == pts.back()) continue; // width below resolution at this offset
        pts.push_back(next);
        vals.push_back(value);
    }
    return Rearranged{StepFunction(Partition::from_breakpoints(std::move(pts)), std::move(vals))};
}

inline bool is_nonincreasing(const StepFunction& f) {
    for (std::size_t i = 0; i + 1 < f.cells(); ++i)
        if (f.value(i) < f.value(i + 1)) return false;
    return true;
}

/// Maximal average f**(t) = (1/t) * integral of f* over (0, t), evaluated at
/// cell right endpoints.  On the first cell the average equals the first
/// value identically, which keeps f* <= f** free of rounding artifacts.
inline StepFunction double_star(const Rearranged& fstar) {
    const StepFunction& g = fstar.fn;
    if (!g.partition().starts_at_zero())
        throw std::invalid_argument("double_star: rearrangement must start at 0");
    if (!is_nonincreasing(g))
        throw std::invalid_argument("double_star: input must be non-increasing");
    std::vector<double> out(g.cells());
    double cum = 0.0;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        cum += g.value(i) * g.partition().width(i);
        out[i] = (i == 0) ? g.value(0) : cum / g.partition().right(i);
    }
    return StepFunction(g.partition(), std::move(out));
}

/// Exact running average of f* evaluable at any t > 0 (not just right
/// endpoints); used where pointwise values of f** are compared.
class DoubleStarEval {
public:
    explicit DoubleStarEval(const Rearranged& fstar)
        : prefix_(fstar.fn), part_(fstar.partition()), first_value_(fstar.fn.cells() ? fstar.fn.value(0) : 0.0) {}

    double operator()(double t) const {
        if (t <= part_.right(0)) return first_value_; // average of a constant head
        return prefix_(t) / t;
    }

private:
    PrefixIntegral prefix_;
    Partition part_;
    double first_value_;
};

/// Cell-average preserving projection onto another partition.  Mass is
/// conserved exactly; refining then coarsening returns the original values.
inline StepFunction resample(const StepFunction& f, const Partition& target) {
    if (target.truncation() < f.partition().truncation() - 1e-12 * f.partition().length())
        throw std::invalid_argument("resample: target must cover the source domain");
    PrefixIntegral A(f);
    std::vector<double> v(target.cells());
    for (std::size_t j = 0; j < target.cells(); ++j)
        v[j] = (A(target.right(j)) - A(target.left(j))) / target.width(j);
    return StepFunction(target, std::move(v));
}

} // namespace lorentzx
