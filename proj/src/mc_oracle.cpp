#include "snspm/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "snspm/errors.hpp"

namespace snspm::mc {
namespace {

// splitmix64 step, used to derive independent per-shard seeds from the master.
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct ShardCounts {
    std::uint64_t sns = 0, ss = 0, nn = 0, minus = 0, errors = 0;
};

struct TraceRow {
    std::uint64_t round;
    bool alice_sends, bob_sends, click;
    int key_a, key_b; // -1 when absent
};

ShardCounts run_shard(double eps, double p_click, std::uint64_t rounds,
                      std::uint64_t shard_seed, std::vector<TraceRow>* trace,
                      std::size_t trace_cap) {
    std::mt19937_64 rng(shard_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ShardCounts c;
    for (std::uint64_t i = 0; i < rounds; ++i) {
        const bool alice_sends = unit(rng) < eps;
        const bool bob_sends = unit(rng) < eps;
        bool click = false;
        int key_a = -1, key_b = -1;
        if (alice_sends != bob_sends) {
            ++c.sns;
            click = unit(rng) < p_click; // only lone senders can fire the port
            if (click) {
                ++c.minus;
                key_a = alice_sends ? 0 : 1;
                const int key_b_raw = bob_sends ? 0 : 1;
                key_b = 1 - key_b_raw; // announced click flips the receiver bit
                if (key_a != key_b) ++c.errors;
            }
        } else if (alice_sends) {
            ++c.ss;
        } else {
            ++c.nn;
        }
        if (trace && trace->size() < trace_cap)
            trace->push_back({i, alice_sends, bob_sends, click, key_a, key_b});
    }
    return c;
}

} // namespace

const char* Summary::rng_name() { return "mt19937_64/splitmix64"; }

Summary simulate(double mu, double eps, double eta, std::uint64_t rounds,
                 std::uint64_t seed, const Options& opts) {
    if (rounds < 1) throw param_error("rounds must be at least 1");
    if (!(mu > 0.0)) throw param_error("mu must be positive");
    if (!(eps >= 0.0 && eps <= 1.0)) throw param_error("epsilon must lie in [0, 1]");
    if (!(eta > 0.0 && eta <= 1.0)) throw param_error("eta must lie in (0, 1]");
    if (opts.shards < 1) throw param_error("shards must be at least 1");

    const double p_click = -std::expm1(-2.0 * mu * std::sqrt(eta));

    const unsigned shards = opts.shards;
    std::uint64_t seed_state = seed;
    std::vector<std::uint64_t> shard_seeds(shards);
    for (auto& s : shard_seeds) s = splitmix64(seed_state);

    const std::uint64_t base = rounds / shards;
    std::vector<ShardCounts> counts(shards);
    std::vector<TraceRow> trace;
    const bool tracing = !opts.trace_path.empty();

    if (shards == 1) {
        counts[0] = run_shard(eps, p_click, rounds, shard_seeds[0],
                              tracing ? &trace : nullptr, opts.trace_cap);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(shards);
        for (unsigned s = 0; s < shards; ++s) {
            const std::uint64_t n = (s == shards - 1) ? rounds - base * s : base;
            pool.emplace_back([&, s, n] {
                // traces stay single-shard to keep row order meaningful
                counts[s] = run_shard(eps, p_click, n, shard_seeds[s],
                                      (tracing && s == 0) ? &trace : nullptr,
                                      opts.trace_cap);
            });
        }
        for (auto& t : pool) t.join();
    }

    Summary sum;
    sum.rounds = rounds;
    sum.seed = seed;
    sum.shards = shards;
    for (const auto& c : counts) { // associative merge in shard order
        sum.sns_count += c.sns;
        sum.ss_count += c.ss;
        sum.nn_count += c.nn;
        sum.minus_count += c.minus;
        sum.kept_errors += c.errors;
    }
    sum.p_conclusive_hat = static_cast<double>(sum.minus_count) / static_cast<double>(rounds);
    sum.correlation =
        sum.minus_count == 0
            ? 0.0
            : static_cast<double>(sum.minus_count - sum.kept_errors) /
                  static_cast<double>(sum.minus_count);

    if (tracing) {
        std::ofstream out(opts.trace_path);
        if (!out) throw param_error("cannot open trace file: " + opts.trace_path);
        out << "round,alice_sends,bob_sends,outcome,key_a,key_b\n";
        for (const auto& row : trace) {
            out << row.round << ',' << (row.alice_sends ? 1 : 0) << ','
                << (row.bob_sends ? 1 : 0) << ',' << (row.click ? "minus" : "none") << ',';
            if (row.key_a >= 0)
                out << row.key_a << ',' << row.key_b << '\n';
            else
                out << ",\n";
        }
    }
    return sum;
}

AnalyticTargets analytic_targets(double mu, double eps, double eta) {
    if (!(mu > 0.0)) throw param_error("mu must be positive");
    if (!(eps >= 0.0 && eps <= 1.0)) throw param_error("epsilon must lie in [0, 1]");
    if (!(eta > 0.0 && eta <= 1.0)) throw param_error("eta must lie in (0, 1]");
    AnalyticTargets t;
    t.f_sns = 2.0 * eps * (1.0 - eps);
    t.f_ss = eps * eps;
    t.f_nn = (1.0 - eps) * (1.0 - eps);
    t.p_conclusive = t.f_sns * -std::expm1(-2.0 * mu * std::sqrt(eta));
    return t;
}

double ZScores::max_abs() const {
    return std::max({std::abs(z_p_conclusive), std::abs(z_f_sns), std::abs(z_f_ss),
                     std::abs(z_f_nn)});
}

ZScores empirical_vs_analytic(const Summary& summary, const AnalyticTargets& targets) {
    if (summary.rounds == 0) throw param_error("summary has zero rounds");
    const double n = static_cast<double>(summary.rounds);
    ZScores z;
    const auto score = [&](double hat, double p, const char* name) {
        const double var = p * (1.0 - p);
        if (!(var > 0.0)) {
            z.notes.push_back(std::string(name) + ": zero variance, skipped");
            return 0.0;
        }
        return (hat - p) / std::sqrt(var / n);
    };
    z.z_p_conclusive =
        score(summary.p_conclusive_hat, targets.p_conclusive, "p_conclusive");
    z.z_f_sns = score(static_cast<double>(summary.sns_count) / n, targets.f_sns, "f_sns");
    z.z_f_ss = score(static_cast<double>(summary.ss_count) / n, targets.f_ss, "f_ss");
    z.z_f_nn = score(static_cast<double>(summary.nn_count) / n, targets.f_nn, "f_nn");
    return z;
}

std::string summary_csv_header() {
    return "rounds,seed,shards,rng,p_hat,p_analytic,z_p,f_sns,z_sns,f_ss,z_ss,f_nn,z_nn,"
           "correlation,kept_errors";
}

std::string summary_csv_row(const Summary& s, const AnalyticTargets& t, const ZScores& z) {
    const double n = static_cast<double>(s.rounds);
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "%llu,%llu,%u,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%llu",
                  static_cast<unsigned long long>(s.rounds),
                  static_cast<unsigned long long>(s.seed), s.shards, Summary::rng_name(),
                  s.p_conclusive_hat, t.p_conclusive, z.z_p_conclusive,
                  static_cast<double>(s.sns_count) / n, z.z_f_sns,
                  static_cast<double>(s.ss_count) / n, z.z_f_ss,
                  static_cast<double>(s.nn_count) / n, z.z_f_nn, s.correlation,
                  static_cast<unsigned long long>(s.kept_errors));
    return buf;
}

} // namespace snspm::mc
