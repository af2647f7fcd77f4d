#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snspm/attack.hpp"
#include "snspm/params.hpp"
#include "snspm/rates.hpp"

namespace snspm {

/// Published reach of the protocols this model is compared against. Used for
/// annotation only; their curves are not recomputed here.
namespace reference {
inline constexpr double kSnsTfQkdMaxTotalLossDb = 176.0;
inline constexpr double kSnsTfQkdPostselectionMaxTotalLossDb = 181.0;
inline constexpr double kExperimentalSnsTfQkdMaxKm = 1002.0;
} // namespace reference

struct LGrid {
    double start_km = 0.0;
    double stop_km  = 0.0;
    double step_km  = 1.0;

    std::vector<double> points() const; // start, start+step, ..., <= stop
};

enum class PresetKind { rate, attack_realistic, attack_loss };

/// A named figure-reproduction configuration. Expected distances carry the
/// tolerance the reproduction is judged at (absolute band for fig4, fractional
/// elsewhere); presets without a pinned distance are qualitative.
struct Preset {
    std::string name;
    std::string note;
    ProtocolParams params;
    Variant variant = Variant::real;
    LGrid grid;
    PresetKind kind = PresetKind::rate;
    double expected_max_km = 0.0; // 0 = no pinned distance
    double band_lo_km = 0.0;
    double band_hi_km = 0.0;
};

const std::vector<Preset>& presets();
std::optional<Preset> find_preset(const std::string& name);

struct SweepResult {
    std::vector<RatePoint> points;            // one per grid point, monotone L
    std::vector<std::string> point_errors;    // per-point failures, recorded inline
};

/// Evaluates the variant over the grid. workers = 0 picks the hardware
/// concurrency; output is identical for any worker count.
SweepResult sweep(const ProtocolParams& p, Variant variant, const LGrid& grid,
                  unsigned workers = 0, const RateOptions& opts = {});

std::vector<AttackReport> attack_sweep(const ProtocolParams& p, const LGrid& grid,
                                       Regime regime);

/// Largest distance with a positive rate, found by a 1 km scan of the bracket
/// followed by bisection of the sign change (resolved well below 0.5 km).
/// Throws degenerate_error when the rate is not positive at the bracket start
/// or never changes sign inside the bracket.
double max_distance(const ProtocolParams& p, Variant variant, double lo_km,
                    double hi_km, const RateOptions& opts = {});

struct EpsilonOptimum {
    double epsilon = 0.0;
    double rate    = 0.0;
};

/// Golden-section maximum of the rate over the sending probability at fixed
/// distance, resolved to 1e-4 in epsilon. Never returns a point worse than
/// the configured eps(L). Throws degenerate_error on a flat objective.
EpsilonOptimum optimize_epsilon(const ProtocolParams& p, Variant variant, double L_km);

/// CSV emission. Headers are mandatory, '.' is the decimal separator and
/// scientific notation is allowed. Byte-identical for identical inputs.
std::string rate_csv(const std::vector<RatePoint>& points);
std::string attack_csv(const std::vector<AttackReport>& reports);

} // namespace snspm
