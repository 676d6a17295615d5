#pragma once

#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "ergodic.hpp"
#include "hardy.hpp"
#include "io.hpp"
#include "norms.hpp"
#include "operators.hpp"

namespace lorentzx {

struct RunResult {
    int exit_code = 0;
    std::string outcome; // verdict, "holds"/"violated", or a value
    double sup_ratio = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> artifacts;
    std::string summary;
};

namespace detail {

inline std::string output_dir(const ExperimentConfig& cfg) {
    if (const char* env = std::getenv("LORENTZX_OUTDIR")) {
        if (*env) return env;
    }
    return cfg.out_dir;
}

inline std::string artifact_path(const ExperimentConfig& cfg, const std::string& name) {
    std::string dir = output_dir(cfg);
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / (cfg.prefix + "_" + name)).string();
}

inline bool domain_is_infinite(const ExperimentConfig& cfg) {
    auto it = cfg.exponent_blocks.find("p");
    if (it == cfg.exponent_blocks.end()) return true;
    return it->second.find("limitInf=none") == std::string::npos;
}

inline Partition experiment_grid(const ExperimentConfig& cfg) {
    return Partition::geometric(cfg.t_min, cfg.truncation, cfg.cells);
}

} // namespace detail

/// CSV artifact of one boundedness report: per-member rows plus a summary
/// block in comment lines.
inline std::string boundedness_csv(const ExperimentConfig& cfg, const std::string& kind,
                                   const BoundednessReport& rep) {
    std::string out = csv_banner(cfg.hash());
    out += "id,ratio\n";
    for (const auto& [id, ratio] : rep.ratios) out += id + "," + format_double(ratio) + "\n";
    out += "# summary kind=" + kind + " verdict=" + to_string(rep.verdict) +
           " sup_ratio=" + format_double(rep.sup_ratio) + "\n";
    out += "# refinement";
    for (const auto& [cells, sup] : rep.refinement_curve)
        out += " " + std::to_string(cells) + ":" + format_double(sup);
    out += "\n# family_curve";
    for (const auto& [param, ratio] : rep.family_curve)
        out += " " + format_double(param) + ":" + format_double(ratio);
    out += "\n";
    if (rep.truncation_sensitivity > 0.0)
        out += "# truncation_sensitivity " + format_double(rep.truncation_sensitivity) + "\n";
    for (const auto& flag : rep.condition_flags) out += "# condition " + flag + "\n";
    for (const auto& note : rep.notes) out += "# note " + note + "\n";
    return out;
}

namespace detail {

inline Family experiment_family(const ExperimentConfig& cfg, double p0, bool infinite,
                                std::optional<double> pinf, bool spikes_on_curve) {
    Family fam = families::power_ladder_zero(p0, cfg.eps_ladder);
    for (auto& m : fam) m.on_curve = !spikes_on_curve;
    if (infinite && pinf) {
        Family inf_side = families::power_ladder_infinity(*pinf, cfg.eps_ladder);
        for (auto& m : inf_side) m.on_curve = false;
        fam = families::concat({fam, inf_side});
    }
    if (spikes_on_curve) fam = families::concat({fam, families::spike_ladder(p0, cfg.spike_ladder)});
    fam = families::concat(
        {fam, families::dyadic_indicators(cfg.dyadic), families::random_members(cfg.seed, cfg.family_size, false)});
    if (fam.empty()) throw std::runtime_error("validation: empty family");
    return fam;
}

inline int verdict_exit(const ExperimentConfig& cfg, const std::string& got, std::string& summary) {
    if (!cfg.expected) return 0;
    if (*cfg.expected == got) {
        summary += "expected " + *cfg.expected + ": match\n";
        return 0;
    }
    summary += "expected " + *cfg.expected + ", got " + got + "\n";
    return 2;
}

inline RunResult run_norm(const ExperimentConfig& cfg) {
    if (cfg.input_csv.empty()) throw std::runtime_error("validation: norm kind needs f=<csv>");
    StepFunction f = read_step_csv(cfg.input_csv);
    ExponentFunction p = cfg.exponent("p", 2.0);
    RunResult res;
    double value;
    std::string what;
    if (cfg.has_exponent("q") || cfg.has_exponent("gamma") || cfg.star) {
        NormSpec spec{p, cfg.has_exponent("q") ? cfg.exponent("q", 2.0) : p,
                      cfg.has_exponent("gamma")
                          ? std::optional<ExponentFunction>(cfg.exponent("gamma", 0.0))
                          : std::nullopt,
                      cfg.star};
        value = lorentz_norm(f, spec);
        what = cfg.star ? "lorentz-star" : "lorentz";
    } else {
        value = luxemburg_norm(f, p);
        what = "lebesgue";
    }
    std::string csv = csv_banner(cfg.hash()) + "norm,kind\n" + format_double(value) + "," + what + "\n";
    std::string path = artifact_path(cfg, "norm.csv");
    write_text_file(path, csv);
    res.artifacts.push_back(path);
    res.outcome = format_double(value);
    res.sup_ratio = value;
    res.summary = what + " norm = " + res.outcome + "\n";
    return res;
}

inline RunResult run_rearrange(const ExperimentConfig& cfg) {
    if (cfg.input_csv.empty()) throw std::runtime_error("validation: rearrange kind needs f=<csv>");
    StepFunction f = read_step_csv(cfg.input_csv);
    Rearranged fs = rearrange(f);
    RunResult res;
    std::string path = artifact_path(cfg, "rearranged.csv");
    write_text_file(path, step_to_csv(fs.fn, cfg.hash()));
    res.artifacts.push_back(path);
    res.outcome = "ok";
    res.summary = "rearranged " + std::to_string(f.cells()) + " cells\n";
    return res;
}

inline RunResult run_hardy(const ExperimentConfig& cfg) {
    HardySpec spec{cfg.exponent("p", 2.0),      cfg.exponent("q", 2.0),
                   cfg.exponent("alpha", 0.0),  cfg.exponent("beta", 0.0),
                   cfg.exponent("nu", 0.0),
                   cfg.direction == "upper" ? HardyDirection::upper : HardyDirection::lower};
    Partition base = experiment_grid(cfg);
    Family fam = experiment_family(cfg, spec.p.limit_at_zero(), spec.p.infinite_domain(),
                                   spec.p.limit_at_infinity(), false);
    BoundednessReport rep = estimate_operator_norm(spec, fam, base, cfg.protocol);

    RunResult res;
    std::string path = artifact_path(cfg, "report.csv");
    write_text_file(path, boundedness_csv(cfg, "hardy-" + cfg.direction, rep));
    res.artifacts.push_back(path);
    res.outcome = to_string(rep.verdict);
    res.sup_ratio = rep.sup_ratio;
    res.summary = "hardy " + cfg.direction + ": verdict " + res.outcome +
                  ", sup_ratio " + format_double(rep.sup_ratio) + "\n";
    res.exit_code = verdict_exit(cfg, res.outcome, res.summary);
    return res;
}

inline OperatorSpec::Kind parse_operator(const std::string& name) {
    using K = OperatorSpec::Kind;
    if (name == "maximal") return K::maximal;
    if (name == "fractional-maximal") return K::fractional_maximal;
    if (name == "riesz") return K::riesz;
    if (name == "hilbert") return K::hilbert;
    if (name == "convolution") return K::convolution;
    if (name == "poisson-sup") return K::poisson_sup;
    throw std::runtime_error("validation: unknown operator '" + name + "'");
}

inline RunResult run_op(const ExperimentConfig& cfg) {
    NormSpec spec{cfg.exponent("p", 2.0), cfg.exponent("q", 2.0),
                  cfg.has_exponent("gamma")
                      ? std::optional<ExponentFunction>(cfg.exponent("gamma", 0.0))
                      : std::nullopt,
                  false};
    OperatorSpec op;
    op.kind = parse_operator(cfg.op);
    op.alpha = cfg.op_alpha;
    if (op.kind == OperatorSpec::Kind::convolution) {
        // default kernel: unit-mass bump on [0, 1/8]
        Partition kp = Partition::uniform(0.0, 0.125, 8);
        op.kernel = StepFunction::constant(kp, 8.0);
    }
    Partition base = experiment_grid(cfg);
    Family fam = experiment_family(cfg, spec.p.limit_at_zero(), spec.p.infinite_domain(),
                                   spec.p.limit_at_infinity(), true);
    BoundednessReport rep = boundedness_experiment(op, spec, fam, base, cfg.protocol);

    RunResult res;
    std::string path = artifact_path(cfg, "report.csv");
    write_text_file(path, boundedness_csv(cfg, cfg.op, rep));
    res.artifacts.push_back(path);
    res.outcome = to_string(rep.verdict);
    res.sup_ratio = rep.sup_ratio;
    res.summary = cfg.op + ": verdict " + res.outcome + ", sup_ratio " +
                  format_double(rep.sup_ratio) + "\n";
    res.exit_code = verdict_exit(cfg, res.outcome, res.summary);
    return res;
}

inline RunResult run_ergodic(const ExperimentConfig& cfg) {
    FlowSpec flow{cfg.flow == "translation" ? FlowSpec::Kind::line_translation
                                            : FlowSpec::Kind::circle_rotation};
    RunResult res;
    std::string csv = csv_banner(cfg.hash());

    if (cfg.check == "distribution" || cfg.check == "star-bound") {
        bool all_ok = true;
        if (cfg.check == "distribution") {
            // one artifact per arc with columns (lambda, empirical, formula, abs_error)
            for (std::size_t a = 0; a < cfg.arcs.size(); ++a) {
                double xi = cfg.arcs[a];
                double pos = flow.finite() ? 0.2 : 0.0;
                ArcSet E{{{pos, pos + xi}}};
                DistributionCheckReport rep = distribution_check(E, flow);
                std::string one = csv_banner(cfg.hash()) + "lambda,empirical,formula,abs_error\n";
                for (auto [l, emp, form, err] : rep.rows)
                    one += format_double(l) + "," + format_double(emp) + "," + format_double(form) +
                           "," + format_double(err) + "\n";
                one += "# summary arc=" + format_double(xi) +
                       " sup_error=" + format_double(rep.sup_error) + "\n";
                std::string apath = artifact_path(cfg, "arc" + std::to_string(a) + "_report.csv");
                write_text_file(apath, one);
                res.artifacts.push_back(apath);
                csv += "# arc=" + format_double(xi) + " sup_error=" + format_double(rep.sup_error) + "\n";
                all_ok = all_ok && rep.sup_error <= cfg.tolerance;
            }
        } else {
            csv += "arc,sup_bound_ratio,sup_identity_error,bound_holds\n";
            for (double xi : cfg.arcs) {
                double pos = flow.finite() ? 0.2 : 0.0;
                ArcSet E{{{pos, pos + xi}}};
                StarBoundReport rep = star_bound_check(E, flow);
                csv += format_double(xi) + "," + format_double(rep.sup_bound_ratio) + "," +
                       format_double(rep.sup_identity_error) + "," +
                       (rep.bound_holds ? "yes" : "no") + "\n";
                all_ok = all_ok && rep.bound_holds;
            }
        }
        res.outcome = all_ok ? "holds" : "violated";
        std::string path = artifact_path(cfg, "report.csv");
        write_text_file(path, csv);
        res.artifacts.push_back(path);
        res.summary = "ergodic " + cfg.check + ": " + res.outcome + "\n";
        res.exit_code = verdict_exit(cfg, res.outcome, res.summary);
        return res;
    }

    if (cfg.check == "maximal-star") {
        csv += "id,measured_constant,holds\n";
        bool all_ok = true;
        Partition part = flow.finite() ? Partition::uniform(0.0, 1.0, cfg.cells)
                                       : Partition::uniform(0.0, cfg.truncation, cfg.cells);
        Family fam = families::random_members(cfg.seed, cfg.family_size, false);
        for (double xi : cfg.arcs)
            fam.push_back({"arc/xi=" + format_double(xi), xi, false,
                           [xi](const Partition& p) {
                               return StepFunction::indicator(p, 0.125 * p.truncation(),
                                                              0.125 * p.truncation() + xi);
                           }});
        for (const auto& member : fam) {
            MaximalStarReport rep = ergodic_maximal_star_check(member.realize(part), flow);
            csv += member.id + "," + format_double(rep.measured_constant) + "," +
                   (rep.holds ? "yes" : "no") + "\n";
            all_ok = all_ok && rep.holds;
        }
        res.outcome = all_ok ? "holds" : "violated";
        std::string path = artifact_path(cfg, "report.csv");
        write_text_file(path, csv);
        res.artifacts.push_back(path);
        res.summary = "ergodic maximal-star: " + res.outcome + "\n";
        res.exit_code = verdict_exit(cfg, res.outcome, res.summary);
        return res;
    }

    if (cfg.check != "boundedness")
        throw std::runtime_error("validation: unknown ergodic check '" + cfg.check + "'");

    NormSpec spec{cfg.exponent("p", 2.0), cfg.exponent("q", 2.0),
                  cfg.has_exponent("gamma")
                      ? std::optional<ExponentFunction>(cfg.exponent("gamma", 0.0))
                      : std::nullopt,
                  false};
    Partition base = flow.finite() ? Partition::geometric(cfg.t_min, 1.0, cfg.cells)
                                   : experiment_grid(cfg);
    Family fam = families::concat({families::spike_ladder(spec.p.limit_at_zero(), cfg.spike_ladder),
                                   families::random_members(cfg.seed, cfg.family_size, false)});
    for (double xi : cfg.arcs)
        fam.push_back({"arc/xi=" + format_double(xi), xi, false,
                       [xi, &flow](const Partition& p) {
                           double span = flow.finite() ? 1.0 : p.truncation();
                           return StepFunction::indicator(p, 0.125 * span, 0.125 * span + xi);
                       }});
    ErgodicOperator eop =
        cfg.ergodic_op == "hilbert" ? ErgodicOperator::hilbert : ErgodicOperator::maximal;
    BoundednessReport rep = ergodic_boundedness_experiment(eop, spec, flow, fam, base, cfg.protocol);

    std::string path = artifact_path(cfg, "report.csv");
    write_text_file(path, boundedness_csv(cfg, to_string(eop), rep));
    res.artifacts.push_back(path);
    res.outcome = to_string(rep.verdict);
    res.sup_ratio = rep.sup_ratio;
    res.summary = std::string(to_string(eop)) + " on " + cfg.flow + ": verdict " + res.outcome +
                  ", sup_ratio " + format_double(rep.sup_ratio) + "\n";
    res.exit_code = verdict_exit(cfg, res.outcome, res.summary);
    return res;
}

} // namespace detail

inline RunResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind == "norm") return detail::run_norm(cfg);
    if (cfg.kind == "rearrange") return detail::run_rearrange(cfg);
    if (cfg.kind == "hardy-verify") return detail::run_hardy(cfg);
    if (cfg.kind == "op-verify") return detail::run_op(cfg);
    if (cfg.kind == "ergodic-verify") return detail::run_ergodic(cfg);
    throw std::runtime_error("validation: unknown experiment kind '" + cfg.kind + "'");
}

/// One run per swept value; the named limit (p0, q0, alpha0, beta0, nu0,
/// gamma0) or the operator order (op-alpha) is replaced, everything else is
/// inherited.
inline RunResult run_sweep(const ExperimentConfig& cfg) {
    if (!cfg.sweep_parameter || cfg.sweep_parameter->empty())
        throw std::runtime_error("validation: sweep needs exactly one parameter");
    if (cfg.sweep_values.empty()) throw std::runtime_error("validation: sweep needs values");
    const std::string& param = *cfg.sweep_parameter;

    std::string csv = csv_banner(cfg.hash());
    csv += "value,sup_ratio,verdict\n";
    RunResult res;
    std::string last;
    bool flipped = false;
    for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
        double v = cfg.sweep_values[i];
        ExperimentConfig sub = cfg;
        sub.prefix = cfg.prefix + "_v" + std::to_string(i);
        sub.expected.reset();
        if (param == "op-alpha") {
            sub.op_alpha = v;
        } else if (param.size() >= 2 && param.back() == '0') {
            std::string name = param.substr(0, param.size() - 1);
            if (name != "p" && name != "q" && name != "alpha" && name != "beta" && name != "nu" &&
                name != "gamma")
                throw std::runtime_error("validation: unknown sweep parameter '" + param + "'");
            // rebuild the block with limit0 = v, keeping the shape of the original
            double linf = v;
            double amp = 0.0;
            std::string mode = "log-decay";
            auto it = cfg.exponent_blocks.find(name);
            if (it != cfg.exponent_blocks.end()) {
                ExponentFunction orig = cfg.exponent(name, 0.0);
                if (orig.limit_at_infinity()) linf = *orig.limit_at_infinity();
                amp = orig.amplitude();
                if (orig.mode() == "oscillating" || orig.mode() == "log-log-violation")
                    mode = orig.mode();
                else if (orig.constant_value())
                    mode = "log-decay"; // constant with shifted limit0 becomes a ramp
            }
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "limit0=%.17g, limitInf=%.17g, samples=[], mode=%s, amplitude=%.17g", v,
                          linf, mode.c_str(), amp);
            sub.exponent_blocks[name] = buf;
        } else {
            throw std::runtime_error("validation: unknown sweep parameter '" + param + "'");
        }
        RunResult one = run_experiment(sub);
        csv += format_double(v) + "," + format_double(one.sup_ratio) + "," + one.outcome + "\n";
        if (!last.empty() && one.outcome != last) flipped = true;
        last = one.outcome;
        res.summary += "value " + format_double(v) + ": " + one.outcome + "\n";
        for (auto& a : one.artifacts) res.artifacts.push_back(a);
    }
    csv += std::string("# summary flipped=") + (flipped ? "yes" : "no") + "\n";
    std::string path = detail::artifact_path(cfg, "sweep.csv");
    write_text_file(path, csv);
    res.artifacts.push_back(path);
    res.outcome = flipped ? "flip" : last;
    return res;
}

} // namespace lorentzx
