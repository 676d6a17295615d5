#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "grid.hpp"
#include "random.hpp"

namespace lorentzx {

/// One adversarial test function, realizable on any partition so that the
/// same member can be re-realized on refined grids.  Members flagged with
/// `on_curve` form the parameter ladder the blow-up protocol inspects.
struct FamilyMember {
    std::string id;
    double parameter = std::numeric_limits<double>::quiet_NaN();
    bool on_curve = false;
    std::function<StepFunction(const Partition&)> realize;
};

using Family = std::vector<FamilyMember>;

namespace families {

/// Cell-average-exact realization of  t^a  restricted to (lo, hi).
inline StepFunction power_piece(const Partition& part, double a, double lo, double hi) {
    std::vector<double> v(part.cells(), 0.0);
    auto anti = [a](double t) { return std::pow(t, a + 1.0) / (a + 1.0); }; // a != -1 here
    for (std::size_t i = 0; i < part.cells(); ++i) {
        double c = std::max(part.left(i), lo), d = std::min(part.right(i), hi);
        if (d <= c) continue;
        v[i] = (anti(d) - anti(c)) / part.width(i);
    }
    return StepFunction(part, std::move(v));
}

/// Near-extremal powers  s^{-1/p0 + eps} on (t_min, 1): the sharpness
/// witnesses of the Hardy-type conditions at the origin.  Supported from the
/// first interior breakpoint: a cell average over [0, t_min) misrepresents
/// the singular head badly in the near-critical regime.
inline Family power_ladder_zero(double p0, const std::vector<double>& eps_ladder) {
    Family fam;
    for (double eps : eps_ladder) {
        double a = -1.0 / p0 + eps;
        fam.push_back({"pow0/eps=" + std::to_string(eps), eps, true,
                       [a](const Partition& part) {
                           return power_piece(part, a, part.right(0), 1.0);
                       }});
    }
    return fam;
}

/// Matching family for the infinity-side conditions:  s^{-1/pinf - eps} on (1, T).
inline Family power_ladder_infinity(double pinf, const std::vector<double>& eps_ladder) {
    Family fam;
    for (double eps : eps_ladder) {
        double a = -1.0 / pinf - eps;
        fam.push_back({"powInf/eps=" + std::to_string(eps), eps, true,
                       [a](const Partition& part) {
                           return power_piece(part, a, 1.0, part.truncation());
                       }});
    }
    return fam;
}

/// L^p-normalized spikes of shrinking width 2^-k placed at `where` in [0,1]
/// of the domain; the dilation ladder driving blow-ups of the weight
/// conditions.  Widths snap to breakpoints so indicators are exact.
inline Family spike_ladder(double p0, const std::vector<double>& k_ladder, double where = 0.0) {
    Family fam;
    for (double k : k_ladder) {
        fam.push_back({"spike/k=" + std::to_string(k), k, true,
                       [k, p0, where](const Partition& part) {
                           const double T = part.truncation();
                           double target = std::min(std::ldexp(1.0, -static_cast<int>(k)), 0.5 * T);
                           double c0 = part.origin() + where * (T - part.origin());
                           std::vector<double> v(part.cells(), 0.0);
                           // cells within [c0, c0 + target], at least one cell
                           double w = 0.0;
                           for (std::size_t i = 0; i < part.cells(); ++i) {
                               if (part.left(i) >= c0 - 1e-300 && part.right(i) <= c0 + target * (1 + 1e-12)) {
                                   v[i] = 1.0;
                                   w += part.width(i);
                               }
                           }
                           if (w == 0.0) { // grid coarser than the spike: use one cell
                               std::size_t i = part.cell_index(c0);
                               v[i] = 1.0;
                               w = part.width(i);
                           }
                           double h = std::pow(w, -1.0 / p0);
                           for (double& x : v) x *= h;
                           return StepFunction(part, std::move(v));
                       }});
    }
    return fam;
}

/// Indicators of dyadic intervals [0, 2^-j] (snapped to breakpoints).
inline Family dyadic_indicators(const std::vector<int>& js) {
    Family fam;
    for (int j : js) {
        fam.push_back({"dyadic/j=" + std::to_string(j), static_cast<double>(j), false,
                       [j](const Partition& part) {
                           double b = std::min(std::ldexp(1.0, -j) * part.truncation() /
                                                   std::max(1.0, part.truncation()),
                                               part.truncation());
                           b = std::max(b, part.right(0));
                           std::vector<double> v(part.cells(), 0.0);
                           for (std::size_t i = 0; i < part.cells(); ++i)
                               if (part.right(i) <= b * (1 + 1e-12)) v[i] = 1.0;
                           return StepFunction(part, std::move(v));
                       }});
    }
    return fam;
}

/// Seeded random step functions.  Each member is a fixed coarse-mesh
/// function over a fraction of the domain, realized on any partition by the
/// exact cell-average projection — the same limit object at every
/// resolution, so refinement curves compare like with like.
inline Family random_members(std::uint64_t seed, std::size_t count, bool signed_values = false) {
    Family fam;
    for (std::size_t m = 0; m < count; ++m) {
        std::uint64_t member_seed = SplitMix64(seed + 0x1000 * (m + 1)).next_u64();
        fam.push_back({"rand/" + std::to_string(m), static_cast<double>(m), false,
                       [member_seed, signed_values](const Partition& part) {
                           SplitMix64 rng(member_seed);
                           const double o = part.origin(), T = part.truncation();
                           double lo_frac = rng.uniform(0.0, 0.6);
                           double hi_frac = lo_frac + rng.uniform(0.1, 1.0 - lo_frac);
                           const std::size_t canon = 48;
                           std::vector<double> pts(canon + 1), vals(canon);
                           for (std::size_t i = 0; i <= canon; ++i) {
                               double frac = lo_frac + (hi_frac - lo_frac) * static_cast<double>(i) /
                                                           static_cast<double>(canon);
                               pts[i] = o + frac * (T - o);
                           }
                           for (auto& x : vals) {
                               x = std::exp(rng.uniform(-2.0, 2.0));
                               if (signed_values && rng.next_u64() & 1) x = -x;
                           }
                           StepFunction coarse(Partition::from_breakpoints(std::move(pts)),
                                               std::move(vals));
                           std::vector<double> v(part.cells());
                           PrefixIntegral A(coarse);
                           for (std::size_t j = 0; j < part.cells(); ++j)
                               v[j] = (A(part.right(j)) - A(part.left(j))) / part.width(j);
                           return StepFunction(part, std::move(v));
                       }});
    }
    return fam;
}

inline Family concat(std::initializer_list<Family> parts) {
    Family all;
    for (const auto& p : parts)
        for (const auto& m : p) all.push_back(m);
    return all;
}

/// Small random step function on its own uneven mesh (unit tests, oracles).
inline StepFunction random_small(SplitMix64& rng, std::size_t max_cells = 64,
                                 bool signed_values = true) {
    std::size_t n = 2 + rng.below(max_cells - 1);
    std::vector<double> pts(n + 1);
    pts[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) pts[i] = pts[i - 1] + std::exp(rng.uniform(-2.5, 1.5));
    std::vector<double> v(n);
    for (auto& x : v) {
        x = std::exp(rng.uniform(-2.0, 2.0));
        if (signed_values && rng.next_u64() & 1) x = -x;
    }
    return StepFunction(Partition::from_breakpoints(std::move(pts)), std::move(v));
}

} // namespace families
} // namespace lorentzx
