#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "exponent.hpp"
#include "grid.hpp"

namespace lorentzx {

namespace quad {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr double kNode[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr double kWeight[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

} // namespace quad

/// Precomputed quadrature for modular integrals of the form
///
///     J(v, lambda) = sum_i  int_cell_i  ( |v_i| t^{e(t)} / lambda )^{q(t)} dt
///
/// on a fixed partition, where e is a power profile and q an exponent
/// function.  Each cell is reduced to nodes (q_n, c_n) contributing
/// exp( q_n * (ln|v_i| - ln lambda) + c_n ), which keeps the lambda-sweeps of
/// the Luxemburg bisection cheap and overflow-safe.
///
/// Integration runs in u = ln t.  Cells are split at the knots of e and q
/// (sample points, jump locations) and then subdivided until the local
/// exponential slope is resolved by the 8-point rule.  The cell touching 0
/// is integrated down to a relative depth of 2^-45 with the remaining tail
/// taken in closed form at the frozen endpoint exponents; a nonpositive
/// tail power marks the whole modular as divergent at 0.
class ModularTable {
public:
    ModularTable(Partition part, const ExponentFunction& power, const ExponentFunction& q)
        : part_(std::move(part)) {
        if (part_.origin() < 0.0)
            throw std::invalid_argument("ModularTable: rearrangement-axis partition expected");
        const std::size_t n = part_.cells();
        cell_begin_.resize(n + 1);

        const bool exact = power.constant_value() && q.constant_value();
        std::vector<double> knots = merge_knots(power, q);

        for (std::size_t i = 0; i < n; ++i) {
            cell_begin_[i] = static_cast<std::uint32_t>(nodes_.size());
            const double a = part_.left(i), b = part_.right(i);
            if (exact) {
                emit_exact_cell(a, b, *power.constant_value(), *q.constant_value());
                continue;
            }
            if (a == 0.0) {
                emit_zero_cell(b, power, q, knots);
            } else {
                emit_segments(std::log(a), std::log(b), power, q, knots, a, b);
            }
        }
        cell_begin_[n] = static_cast<std::uint32_t>(nodes_.size());
    }

    const Partition& partition() const { return part_; }
    bool divergent_at_zero() const { return divergent_; }

    /// Modular value for the given cell values at scaling lambda.
    double modular(const std::vector<double>& values, double lambda) const {
        const double ll = std::log(lambda);
        const std::size_t n = part_.cells();
        std::vector<double> terms(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::fabs(values[i]);
            if (v == 0.0) continue;
            if (std::isinf(v)) return kInf;
            if (i == 0 && divergent_) return kInf;
            const double lv = std::log(v) - ll;
            double s = 0.0;
            for (std::uint32_t k = cell_begin_[i]; k < cell_begin_[i + 1]; ++k) {
                const double arg = nodes_[k].q * lv + nodes_[k].c;
                if (arg > 709.0) return kInf;
                if (arg > -745.0) s += std::exp(arg);
            }
            terms[i] = s;
        }
        return detail::pairwise_sum(terms);
    }

    /// Per-cell integrals at scaling lambda.  A divergent zero-cell produces
    /// an infinite first entry (when it carries a nonzero value) instead of
    /// poisoning the whole vector.
    std::vector<double> cell_integrals(const std::vector<double>& values, double lambda) const {
        const double ll = std::log(lambda);
        const std::size_t n = part_.cells();
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = std::fabs(values[i]);
            if (v == 0.0) continue;
            if (std::isinf(v) || (i == 0 && divergent_)) {
                out[i] = kInf;
                continue;
            }
            const double lv = std::log(v) - ll;
            double s = 0.0;
            for (std::uint32_t k = cell_begin_[i]; k < cell_begin_[i + 1]; ++k) {
                const double arg = nodes_[k].q * lv + nodes_[k].c;
                if (arg > 709.0) {
                    s = kInf;
                    break;
                }
                if (arg > -745.0) s += std::exp(arg);
            }
            out[i] = s;
        }
        return out;
    }

    /// Luxemburg functional: the scaling at which the modular equals 1.
    double luxemburg(const std::vector<double>& values) const {
        double vmax = 0.0;
        for (double v : values) vmax = std::max(vmax, std::fabs(v));
        if (vmax == 0.0) return 0.0;
        if (std::isinf(vmax)) return kInf;
        if (divergent_ && values[0] != 0.0) return kInf;

        double hi = vmax;
        int guard = 0;
        while (modular(values, hi) > 1.0) {
            hi *= 2.0;
            if (++guard > 1100) return kInf;
        }
        double lo = 0.5 * hi;
        while (modular(values, lo) <= 1.0) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-300) return 0.0;
        }
        for (int it = 0; it < 60 && hi / lo - 1.0 > 1e-13; ++it) {
            double mid = std::sqrt(lo * hi);
            (modular(values, mid) <= 1.0 ? hi : lo) = mid;
        }
        return std::sqrt(lo * hi);
    }

private:
    struct Node {
        double q;
        double c;
    };

    static constexpr double kInf = std::numeric_limits<double>::infinity();

    static std::vector<double> merge_knots(const ExponentFunction& a, const ExponentFunction& b) {
        std::vector<double> k = a.knots();
        k.insert(k.end(), b.knots().begin(), b.knots().end());
        std::sort(k.begin(), k.end());
        k.erase(std::unique(k.begin(), k.end()), k.end());
        return k;
    }

    void emit_exact_cell(double a, double b, double e, double q) {
        const double s = e * q; // integrand (v/lambda)^q * t^s
        const double r = 1.0 + s;
        double lc; // log of the cell integral, computed without overflow
        if (a == 0.0) {
            if (r <= 0.0) {
                divergent_ = true;
                return;
            }
            lc = r * std::log(b) - std::log(r);
        } else if (s == 0.0) {
            lc = std::log(b - a);
        } else if (r == 0.0) {
            lc = std::log(std::log(b / a)); // int t^-1 dt
        } else {
            const double x = r * std::log(b / a); // same sign as r
            const double tail = (x > 700.0) ? x - std::log(r) : std::log(std::expm1(x) / r);
            lc = r * std::log(a) + tail;
        }
        if (!std::isnan(lc) && lc > -std::numeric_limits<double>::infinity())
            nodes_.push_back({q, lc});
    }

    // GL nodes over u in [ua, ub], split at knots and by slope.
    void emit_segments(double ua, double ub, const ExponentFunction& power,
                       const ExponentFunction& q, const std::vector<double>& knots, double ta,
                       double tb) {
        std::vector<double> cuts{ua};
        auto it = std::upper_bound(knots.begin(), knots.end(), ta);
        for (; it != knots.end() && *it < tb; ++it) {
            double u = std::log(*it);
            if (u > cuts.back() + 1e-14) cuts.push_back(u);
        }
        cuts.push_back(ub);
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            const double lo = cuts[j], hi = cuts[j + 1];
            const double t0 = std::exp(lo), t1 = std::exp(hi);
            const double slope =
                std::max({1.0, std::fabs(1.0 + power(t0) * q(t0)), std::fabs(1.0 + power(t1) * q(t1))});
            const double du_max = std::min(2.0, 8.0 / slope);
            const std::size_t pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / du_max)));
            for (std::size_t m = 0; m < pieces; ++m) {
                const double u0 = lo + (hi - lo) * static_cast<double>(m) / static_cast<double>(pieces);
                const double u1 = lo + (hi - lo) * static_cast<double>(m + 1) / static_cast<double>(pieces);
                const double mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
                for (int g = 0; g < 8; ++g) {
                    const double u = mid + half * quad::kNode[g];
                    const double t = std::exp(u);
                    const double qq = q(t);
                    // contribution weight: gl * half * e^u (Jacobian dt = e^u du)
                    const double c = qq * power(t) * u + std::log(quad::kWeight[g] * half) + u;
                    nodes_.push_back({qq, c});
                }
            }
        }
    }

    void emit_zero_cell(double b, const ExponentFunction& power, const ExponentFunction& q,
                        const std::vector<double>& knots) {
        const double e0 = power.limit_at_zero();
        const double q0 = q.limit_at_zero();
        const double tail_power = 1.0 + e0 * q0;
        if (tail_power <= 0.0) {
            divergent_ = true;
            return;
        }
        const double ub = std::log(b);
        const double ua = ub - 45.0 * std::numbers::ln2;
        emit_segments(ua, ub, power, q, knots, std::exp(ua), b);
        // frozen closed-form tail below t = b * 2^-45
        const double lc = tail_power * ua - std::log(tail_power);
        if (lc > -745.0) nodes_.push_back({q0, lc});
    }

    Partition part_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> cell_begin_;
    bool divergent_ = false;
};

} // namespace lorentzx
