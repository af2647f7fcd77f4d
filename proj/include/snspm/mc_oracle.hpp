#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace snspm::mc {

/// Aggregate of a seeded loss-only round simulation. Counts merge
/// associatively, so shards can be summed in shard order.
struct Summary {
    std::uint64_t rounds = 0;
    std::uint64_t seed   = 0;
    unsigned shards      = 1;
    std::uint64_t sns_count = 0;   // exactly one party sent
    std::uint64_t ss_count  = 0;
    std::uint64_t nn_count  = 0;
    std::uint64_t minus_count = 0; // destructive-port clicks (kept rounds)
    std::uint64_t kept_errors = 0; // kept rounds whose bits disagree after inversion
    double p_conclusive_hat = 0.0; // minus_count / rounds
    double correlation      = 0.0; // matching fraction of kept rounds (1.0 when any kept)

    static const char* rng_name(); // "mt19937_64/splitmix64"
};

struct Options {
    unsigned shards = 1;
    std::string trace_path;        // optional per-round trace, empty = off
    std::size_t trace_cap = 1000;  // max traced rounds
};

/// Simulates `rounds` loss-only protocol rounds: each party sends with
/// probability eps; a round with exactly one sender clicks the destructive
/// port with probability 1 - e^{-2 mu sqrt(eta)}; send-send and none-none
/// rounds never click. Key bits are 0 for sending, 1 for not sending, and the
/// receiving side inverts on a click. Deterministic for a fixed (seed, shards).
Summary simulate(double mu, double eps, double eta, std::uint64_t rounds,
                 std::uint64_t seed, const Options& opts = {});

struct AnalyticTargets {
    double p_conclusive = 0.0; // 2 eps (1-eps) (1 - e^{-2 mu sqrt(eta)})
    double f_sns = 0.0;        // 2 eps (1-eps)
    double f_ss  = 0.0;        // eps^2
    double f_nn  = 0.0;        // (1-eps)^2
};

AnalyticTargets analytic_targets(double mu, double eps, double eta);

/// Binomial z-scores of the empirical frequencies against the analytic
/// targets. Zero-variance statistics are skipped with a note and their z set
/// to zero. Rejects summaries with zero rounds.
struct ZScores {
    double z_p_conclusive = 0.0;
    double z_f_sns = 0.0;
    double z_f_ss  = 0.0;
    double z_f_nn  = 0.0;
    std::vector<std::string> notes;

    double max_abs() const;
};

ZScores empirical_vs_analytic(const Summary& summary, const AnalyticTargets& targets);

/// One-row CSV emission of a summary next to its targets and z-scores.
std::string summary_csv_header();
std::string summary_csv_row(const Summary& s, const AnalyticTargets& t, const ZScores& z);

} // namespace snspm::mc
