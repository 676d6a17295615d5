#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace lorentzx {

enum class Verdict { bounded, blow_up, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::bounded: return "bounded";
        case Verdict::blow_up: return "blow-up";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

/// Decision thresholds of the boundedness protocol.  Heuristics, not proofs:
/// "flat" and "grows tenfold" stand in for "uniformly bounded" and
/// "unbounded" at desk scale.  Overridable from experiment configs.
struct Protocol {
    double flatness = 0.10;      // relative sup-ratio drift allowed under refinement
    double blowup_factor = 10.0; // total monotone growth declaring blow-up
    std::size_t refinement_factor = 4;
    double monotone_slack = 0.02; // jitter tolerated in "monotone" growth
};

/// Outcome of one operator-norm sweep: per-function ratios, their supremum,
/// stability of the supremum under grid refinement, and the ratio curve
/// along the designated parameter ladder.
struct BoundednessReport {
    std::vector<std::pair<std::string, double>> ratios; // id -> ratio on base grid
    double sup_ratio = 0.0;
    std::vector<std::pair<std::size_t, double>> refinement_curve; // (cells, sup ratio)
    std::vector<std::pair<double, double>> family_curve;          // (parameter, ratio)
    Verdict verdict = Verdict::inconclusive;
    double truncation_sensitivity = 0.0; // relative sup change when T doubles (0 if unchecked)
    std::vector<std::string> condition_flags;
    std::vector<std::string> notes;
};

/// Shared verdict rule.  Blow-up: the ladder ratios grow monotonically by
/// the configured total factor.  Bounded: the refinement curve is flat, the
/// ladder does not blow up, and its last extension step is already flat.
inline Verdict decide_verdict(const BoundednessReport& rep, const Protocol& proto) {
    bool family_monotone = true;
    double growth = 1.0;
    double last_step = 1.0;
    if (rep.family_curve.size() >= 2) {
        for (std::size_t i = 1; i < rep.family_curve.size(); ++i) {
            double prev = rep.family_curve[i - 1].second;
            double next = rep.family_curve[i].second;
            if (!(next >= prev * (1.0 - proto.monotone_slack))) family_monotone = false;
        }
        double first = rep.family_curve.front().second;
        double last = rep.family_curve.back().second;
        if (std::isinf(last) || std::isnan(last)) return Verdict::blow_up;
        growth = (first > 0.0) ? last / first : std::numeric_limits<double>::infinity();
        last_step = rep.family_curve[rep.family_curve.size() - 2].second > 0.0
                        ? last / rep.family_curve[rep.family_curve.size() - 2].second
                        : std::numeric_limits<double>::infinity();
    }
    if (family_monotone && growth >= proto.blowup_factor) return Verdict::blow_up;

    bool flat = true;
    bool ref_monotone = rep.refinement_curve.size() >= 2;
    for (std::size_t i = 1; i < rep.refinement_curve.size(); ++i) {
        double a = rep.refinement_curve[i - 1].second;
        double b = rep.refinement_curve[i].second;
        if (!(std::fabs(b - a) <= proto.flatness * std::max(a, 1e-300))) flat = false;
        if (!(b >= a * (1.0 - proto.monotone_slack))) ref_monotone = false;
    }
    if (ref_monotone && !rep.refinement_curve.empty()) {
        double rf = rep.refinement_curve.front().second;
        double rl = rep.refinement_curve.back().second;
        if (std::isinf(rl) || (rf > 0.0 && rl / rf >= proto.blowup_factor)) return Verdict::blow_up;
    }
    if (flat && growth < proto.blowup_factor && last_step <= 1.0 + proto.flatness)
        return Verdict::bounded;
    return Verdict::inconclusive;
}

/// Measured-constant report for the rearrangement estimates: the supremum of
/// lhs/rhs over the evaluation grid plus its behavior under refinement.
struct RearrangementBoundReport {
    double measured_constant = 0.0;
    std::vector<std::pair<std::size_t, double>> refinement_curve;
    bool holds = true; // rhs positive wherever lhs is
    std::vector<std::string> notes;
};

} // namespace lorentzx
