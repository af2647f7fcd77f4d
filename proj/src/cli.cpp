#include "snspm/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "snspm/attack.hpp"
#include "snspm/errors.hpp"
#include "snspm/mc_oracle.hpp"
#include "snspm/povm.hpp"
#include "snspm/rates.hpp"
#include "snspm/sweep.hpp"

namespace snspm {
namespace {

using nlohmann::json;

const char* const kScalarKeys[] = {"mu",     "delta", "V",    "eta_det",
                                   "p_dark", "f_EC",  "alpha", "L"};

void set_scalar(ProtocolParams& p, const std::string& key, double value) {
    if (key == "mu") p.mu = value;
    else if (key == "delta") p.delta = value;
    else if (key == "V") p.V = value;
    else if (key == "eta_det") p.eta_det = value;
    else if (key == "p_dark") p.p_dark = value;
    else if (key == "f_EC") p.f_ec = value;
    else if (key == "alpha") p.alpha_db_per_km = value;
    else if (key == "L") p.L_km = value;
    else throw param_error("unknown configuration key: " + key);
}

bool is_scalar_key(const std::string& key) {
    for (const char* k : kScalarKeys)
        if (key == k) return true;
    return false;
}

double require_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw param_error("configuration key '" + key + "' must be a number");
    return j.get<double>();
}

} // namespace

ProtocolParams params_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw param_error(std::string("configuration is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw param_error("configuration must be a JSON object");

    ProtocolParams p;
    bool has_const_eps = false;
    EpsilonProfile prof;
    bool has_eps0 = false, has_eps_max = false, has_lmax = false;
    for (const auto& [key, value] : doc.items()) {
        if (is_scalar_key(key)) {
            set_scalar(p, key, require_number(value, key));
        } else if (key == "epsilon") {
            p.epsilon = require_number(value, key);
            has_const_eps = true;
        } else if (key == "epsilon0") {
            prof.eps0 = require_number(value, key);
            has_eps0 = true;
        } else if (key == "epsilon_max") {
            prof.eps_max = require_number(value, key);
            has_eps_max = true;
        } else if (key == "L_max") {
            prof.L_max_km = require_number(value, key);
            has_lmax = true;
        } else {
            throw param_error("unknown configuration key: " + key);
        }
    }
    const bool any_profile = has_eps0 || has_eps_max || has_lmax;
    const bool full_profile = has_eps0 && has_eps_max && has_lmax;
    if (has_const_eps && any_profile)
        throw param_error("give either 'epsilon' or the profile triple, not both");
    if (any_profile && !full_profile)
        throw param_error("profile requires all of epsilon0, epsilon_max, L_max");
    if (!has_const_eps && !any_profile)
        throw param_error("missing sending probability: 'epsilon' or epsilon0/epsilon_max/L_max");
    if (full_profile) p.epsilon = prof;
    ensure_valid(p);
    return p;
}

ProtocolParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw param_error("cannot read configuration file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return params_from_json_text(buf.str());
}

void apply_override(ProtocolParams& p, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos || eq == 0)
        throw param_error("override must look like key=value: " + key_value);
    const std::string key = key_value.substr(0, eq);
    const std::string text = key_value.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw param_error("override value is not a number: " + key_value);
    }
    if (used != text.size()) throw param_error("override value is not a number: " + key_value);

    if (is_scalar_key(key)) {
        set_scalar(p, key, value);
    } else if (key == "epsilon") {
        p.epsilon = value;
    } else if (key == "epsilon0" || key == "epsilon_max" || key == "L_max") {
        if (!std::holds_alternative<EpsilonProfile>(p.epsilon))
            throw param_error("profile override '" + key +
                              "' needs a profile-mode configuration");
        auto prof = std::get<EpsilonProfile>(p.epsilon);
        if (key == "epsilon0") prof.eps0 = value;
        else if (key == "epsilon_max") prof.eps_max = value;
        else prof.L_max_km = value;
        p.epsilon = prof;
    } else {
        throw param_error("unknown override key: " + key);
    }
}

namespace {

struct CommonArgs {
    std::string config;
    std::string output;
    std::vector<std::string> overrides;
    std::string variant = "real";
    unsigned workers = 0;
};

ProtocolParams resolve_params(const CommonArgs& args) {
    if (args.config.empty()) throw param_error("a --config file is required");
    ProtocolParams p = load_params(args.config);
    for (const auto& ov : args.overrides) apply_override(p, ov);
    ensure_valid(p);
    return p;
}

Variant resolve_variant(const std::string& tag) {
    const auto v = variant_from_string(tag);
    if (!v) throw param_error("unknown variant: " + tag +
                              " (expected loss, loss_rand, real, real_aopp, rand, rand_aopp)");
    return *v;
}

std::pair<double, double> parse_pair(const std::string& text, char sep,
                                     const std::string& what) {
    const auto pos = text.find(sep);
    if (pos == std::string::npos)
        throw param_error(what + " must look like a" + sep + "b: " + text);
    try {
        return {std::stod(text.substr(0, pos)), std::stod(text.substr(pos + 1))};
    } catch (const std::exception&) {
        throw param_error(what + " has non-numeric parts: " + text);
    }
}

LGrid parse_grid(const std::string& text) {
    std::istringstream in(text);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c))
        throw param_error("grid must look like start:stop:step: " + text);
    try {
        return {std::stod(a), std::stod(b), std::stod(c)};
    } catch (const std::exception&) {
        throw param_error("grid has non-numeric parts: " + text);
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw param_error("cannot write output file: " + path);
    out << content;
}

void print_rate_point(std::ostream& out, const RatePoint& pt) {
    char buf[256];
    if (pt.degenerate) {
        std::snprintf(buf, sizeof(buf),
                      "L=%.6g km  variant=%s  rate=0 (degenerate: no conclusive events, "
                      "error rate undefined)\n",
                      pt.L_km, to_string(pt.variant).c_str());
        out << buf;
        return;
    }
    std::snprintf(buf, sizeof(buf),
                  "L=%.6g km  variant=%s  rate=%.8e  e_signal=%.6e  chi=%.6f  "
                  "p_conclusive=%.6e\n",
                  pt.L_km, to_string(pt.variant).c_str(), pt.rate, pt.e_signal, pt.chi,
                  pt.p_conclusive);
    out << buf;
    std::snprintf(buf, sizeof(buf), "  P_sns=%.6e  P_ss=%.6e  P_nn=%.6e\n",
                  pt.components.p_sns, pt.components.p_ss, pt.components.p_nn);
    out << buf;
}

int run_reproduce(const std::string& preset_name, std::string output, unsigned workers,
                  std::ostream& out) {
    const auto preset = find_preset(preset_name);
    if (!preset) {
        std::string names;
        for (const auto& p : presets()) names += p.name + " ";
        throw param_error("unknown preset '" + preset_name + "'; available: " + names);
    }
    if (output.empty()) output = preset->name + ".csv";

    if (preset->kind == PresetKind::rate) {
        const SweepResult result = sweep(preset->params, preset->variant, preset->grid, workers);
        write_file(output, rate_csv(result.points));
        out << "preset=" << preset->name << " variant=" << to_string(preset->variant)
            << " points=" << result.points.size() << " -> " << output << "\n";
        for (const auto& e : result.point_errors) out << "  point error: " << e << "\n";
        if (preset->expected_max_km > 0.0) {
            const double L = max_distance(preset->params, preset->variant,
                                          std::max(preset->grid.start_km, 1.0),
                                          preset->grid.stop_km);
            const bool pass = L >= preset->band_lo_km && L <= preset->band_hi_km;
            char buf[192];
            std::snprintf(buf, sizeof(buf),
                          "max_distance_km=%.2f expected=%.0f band=[%.2f,%.2f] check=%s\n",
                          L, preset->expected_max_km, preset->band_lo_km,
                          preset->band_hi_km, pass ? "PASS" : "FAIL");
            out << buf;
            std::snprintf(buf, sizeof(buf),
                          "total_loss_db=%.1f (reference endpoints: %.0f dB, %.0f dB, %.0f km)\n",
                          preset->params.alpha_db_per_km * L,
                          reference::kSnsTfQkdMaxTotalLossDb,
                          reference::kSnsTfQkdPostselectionMaxTotalLossDb,
                          reference::kExperimentalSnsTfQkdMaxKm);
            out << buf;
        }
        return 0;
    }

    const Regime regime =
        preset->kind == PresetKind::attack_loss ? Regime::ideal : Regime::realistic;
    const auto reports = attack_sweep(preset->params, preset->grid, regime);
    write_file(output, attack_csv(reports));
    out << "preset=" << preset->name << " regime=" << to_string(regime)
        << " points=" << reports.size() << " -> " << output << "\n";
    if (regime == Regime::ideal) {
        bool all_positive = true;
        for (const auto& r : reports) all_positive = all_positive && r.e_distinguish > 0.0;
        out << "e_distinguish>0 at all grid points: " << (all_positive ? "PASS" : "FAIL")
            << "\n";
    } else {
        double min_ratio = std::numeric_limits<double>::infinity();
        double min_L = 0.0;
        bool all_detectable = true;
        for (const auto& r : reports) {
            if (r.ratio < min_ratio) {
                min_ratio = r.ratio;
                min_L = r.L_km;
            }
            all_detectable = all_detectable && r.detectable;
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "ratio>1 at all grid points: %s (min ratio %.4f at L=%.0f km)\n",
                      all_detectable ? "PASS" : "FAIL", min_ratio, min_L);
        out << buf;
    }
    return 0;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Asymptotic key rates and attack detectability for a send-or-not-send "
                 "phase-matching QKD model"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string grid_text, bracket_text = "1:2000", regime_text = "realistic";
    std::string preset_name;
    double fixed_L = 0.0;
    std::uint64_t seed = 42;
    std::uint64_t rounds = 1000000;
    unsigned shards = 1;
    std::string trace_path;
    std::size_t trace_cap = 1000;
    double mc_mu = 0.1, mc_eps = 0.05, mc_eta = 1.0;

    const auto add_common = [&](CLI::App* sub, bool with_variant) {
        sub->add_option("--config", common.config, "JSON parameter file");
        sub->add_option("--output", common.output, "CSV output path");
        sub->add_option("--override", common.overrides,
                        "key=value applied after the config loads (repeatable)");
        if (with_variant)
            sub->add_option("--variant", common.variant,
                            "loss | loss_rand | real | real_aopp | rand | rand_aopp");
        sub->add_option("--workers", common.workers, "sweep worker threads (0 = auto)");
    };

    auto* rate_cmd = app.add_subcommand("rate", "evaluate one rate point");
    add_common(rate_cmd, true);

    auto* sweep_cmd = app.add_subcommand("sweep", "rate-distance curve to CSV");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--grid", grid_text, "start:stop:step in km")->required();

    auto* max_cmd = app.add_subcommand("max-distance", "largest distance with a positive rate");
    add_common(max_cmd, true);
    max_cmd->add_option("--bracket", bracket_text, "lo:hi search bracket in km");

    auto* attack_cmd = app.add_subcommand("attack", "intercept-attack detectability to CSV");
    add_common(attack_cmd, false);
    attack_cmd->add_option("--grid", grid_text, "start:stop:step in km")->required();
    attack_cmd->add_option("--regime", regime_text, "loss | realistic");

    auto* mc_cmd = app.add_subcommand("mc-validate",
                                      "seeded round simulation vs analytic probabilities");
    mc_cmd->add_option("--config", common.config, "JSON parameter file (uses its L)");
    mc_cmd->add_option("--override", common.overrides, "key=value (repeatable)");
    mc_cmd->add_option("--output", common.output, "CSV output path");
    mc_cmd->add_option("--seed", seed, "master RNG seed");
    mc_cmd->add_option("--N", rounds, "number of rounds");
    mc_cmd->add_option("--shards", shards, "deterministic sub-streams");
    mc_cmd->add_option("--trace", trace_path, "per-round trace file");
    mc_cmd->add_option("--trace-cap", trace_cap, "max traced rounds");
    mc_cmd->add_option("--mu", mc_mu, "mean photon number (no config)");
    mc_cmd->add_option("--epsilon", mc_eps, "sending probability (no config)");
    mc_cmd->add_option("--eta", mc_eta, "overall transmittance (no config)");

    auto* repro_cmd = app.add_subcommand("reproduce", "run a named preset");
    repro_cmd->add_option("preset", preset_name, "preset name, e.g. fig4, fig7a, fig8c")
        ->required();
    repro_cmd->add_option("--output", common.output, "CSV output path");
    repro_cmd->add_option("--workers", common.workers, "sweep worker threads");

    auto* opt_cmd = app.add_subcommand("optimize", "sending probability maximizing the rate");
    add_common(opt_cmd, true);
    opt_cmd->add_option("--L", fixed_L, "distance in km")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend()); // CLI11 convention
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "argument error: " << e.what() << "\n";
        return 2;
    }

    if (rate_cmd->parsed()) {
        const ProtocolParams p = resolve_params(common);
        const RatePoint pt = evaluate_rate(p, resolve_variant(common.variant));
        print_rate_point(out, pt);
        if (!common.output.empty()) write_file(common.output, rate_csv({pt}));
        return 0;
    }
    if (sweep_cmd->parsed()) {
        const ProtocolParams p = resolve_params(common);
        const SweepResult result =
            sweep(p, resolve_variant(common.variant), parse_grid(grid_text), common.workers);
        const std::string path = common.output.empty() ? "sweep.csv" : common.output;
        write_file(path, rate_csv(result.points));
        out << "points=" << result.points.size() << " -> " << path << "\n";
        for (const auto& e : result.point_errors) out << "  point error: " << e << "\n";
        return 0;
    }
    if (max_cmd->parsed()) {
        const ProtocolParams p = resolve_params(common);
        const auto [lo, hi] = parse_pair(bracket_text, ':', "bracket");
        const double L = max_distance(p, resolve_variant(common.variant), lo, hi);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "max_distance_km=%.3f\n", L);
        out << buf;
        return 0;
    }
    if (attack_cmd->parsed()) {
        const ProtocolParams p = resolve_params(common);
        Regime regime;
        if (regime_text == "loss") regime = Regime::ideal;
        else if (regime_text == "realistic") regime = Regime::realistic;
        else throw param_error("unknown regime: " + regime_text);
        const auto reports = attack_sweep(p, parse_grid(grid_text), regime);
        const std::string path = common.output.empty() ? "attack.csv" : common.output;
        write_file(path, attack_csv(reports));
        std::size_t detectable = 0;
        for (const auto& r : reports) detectable += r.detectable ? 1 : 0;
        out << "points=" << reports.size() << " detectable=" << detectable << " -> "
            << path << "\n";
        return 0;
    }
    if (mc_cmd->parsed()) {
        double mu = mc_mu, eps = mc_eps, eta = mc_eta;
        if (!common.config.empty()) {
            ProtocolParams p = load_params(common.config);
            for (const auto& ov : common.overrides) apply_override(p, ov);
            ensure_valid(p);
            mu = p.mu;
            eps = sending_probability_at(p, p.L_km);
            eta = overall_transmittance(p.eta_det, p.alpha_db_per_km, p.L_km);
        }
        mc::Options opts;
        opts.shards = shards;
        opts.trace_path = trace_path;
        opts.trace_cap = trace_cap;
        const mc::Summary s = mc::simulate(mu, eps, eta, rounds, seed, opts);
        const mc::AnalyticTargets t = mc::analytic_targets(mu, eps, eta);
        const mc::ZScores z = mc::empirical_vs_analytic(s, t);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "rng=%s seed=%llu N=%llu shards=%u\n",
                      mc::Summary::rng_name(), static_cast<unsigned long long>(seed),
                      static_cast<unsigned long long>(rounds), shards);
        out << buf;
        std::snprintf(buf, sizeof(buf), "%-14s %14s %14s %8s\n", "statistic", "empirical",
                      "analytic", "z");
        out << buf;
        const auto row = [&](const char* name, double hat, double target, double zv) {
            std::snprintf(buf, sizeof(buf), "%-14s %14.8f %14.8f %8.3f\n", name, hat,
                          target, zv);
            out << buf;
        };
        const double n = static_cast<double>(s.rounds);
        row("p_conclusive", s.p_conclusive_hat, t.p_conclusive, z.z_p_conclusive);
        row("f_sns", static_cast<double>(s.sns_count) / n, t.f_sns, z.z_f_sns);
        row("f_ss", static_cast<double>(s.ss_count) / n, t.f_ss, z.z_f_ss);
        row("f_nn", static_cast<double>(s.nn_count) / n, t.f_nn, z.z_f_nn);
        for (const auto& note : z.notes) out << "  note: " << note << "\n";
        std::snprintf(buf, sizeof(buf), "kept_correlation=%.6f kept_errors=%llu\n",
                      s.correlation, static_cast<unsigned long long>(s.kept_errors));
        out << buf;
        const std::string path = common.output.empty() ? "mc.csv" : common.output;
        write_file(path, mc::summary_csv_header() + "\n" + mc::summary_csv_row(s, t, z) + "\n");
        const bool ok = z.max_abs() < 4.0;
        out << (ok ? "all |z| < 4: PASS\n" : "all |z| < 4: FAIL\n");
        return ok ? 0 : 1;
    }
    if (repro_cmd->parsed())
        return run_reproduce(preset_name, common.output, common.workers, out);
    if (opt_cmd->parsed()) {
        const ProtocolParams p = resolve_params(common);
        const EpsilonOptimum best =
            optimize_epsilon(p, resolve_variant(common.variant), fixed_L);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "epsilon_star=%.6f rate=%.8e at L=%.3f km\n",
                      best.epsilon, best.rate, fixed_L);
        out << buf;
        return 0;
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const param_error& e) {
        err << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const degenerate_error& e) {
        err << "degenerate configuration: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace snspm
