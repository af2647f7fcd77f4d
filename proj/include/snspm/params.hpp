#pragma once

#include <string>
#include <variant>
#include <vector>

namespace snspm {

/// Distance-dependent sending probability eps(L) = eps0 + (eps_max - eps0) * (L / L_max)^3,
/// clamped to eps_max beyond L_max so the value stays below 1 on long sweeps.
struct EpsilonProfile {
    double eps0     = 0.0;
    double eps_max  = 0.0;
    double L_max_km = 0.0;
};

/// Either a constant sending probability or a cubic profile of the distance.
using EpsilonSpec = std::variant<double, EpsilonProfile>;

/// All scalar protocol and imperfection parameters. Angles are radians,
/// distances km, attenuation dB/km. Treat instances as immutable once built;
/// they are safe to share across threads.
struct ProtocolParams {
    double mu       = 0.1;   // mean photon number per pulse, > 0
    EpsilonSpec epsilon = 0.05;
    double delta    = 0.0;   // phase mismatch at the couplers/beamsplitter, [0, pi)
    double V        = 1.0;   // mode (intensity) mismatch, (0, 1]
    double eta_det  = 1.0;   // per-detector efficiency, (0, 1]
    double p_dark   = 0.0;   // dark-count probability per detector per round, [0, 1)
    double f_ec     = 1.0;   // error-correction efficiency, >= 1
    double alpha_db_per_km = 0.2;
    double L_km     = 0.0;   // total Alice-Bob distance; each arm carries sqrt(eta)
};

/// Checks every field range. Returns one message per violation; empty means ok.
std::vector<std::string> validate(const ProtocolParams& p);

/// Throws param_error listing all violations if the parameters are invalid.
void ensure_valid(const ProtocolParams& p);

/// Overall transmittance eta = eta_det^2 * 10^(-alpha L / 10). The per-arm
/// amplitude transmittance used in the closed forms is sqrt(eta).
double overall_transmittance(double eta_det, double alpha_db_per_km, double L_km);

/// Profile value at distance L, clamped to eps_max for L > L_max.
double sending_probability(double L_km, const EpsilonProfile& profile);

/// Sending probability of `p` evaluated at distance L (constant or profile).
double sending_probability_at(const ProtocolParams& p, double L_km);

/// Copy of `p` with the distance replaced.
ProtocolParams with_distance(const ProtocolParams& p, double L_km);

} // namespace snspm
