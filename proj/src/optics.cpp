#include "snspm/optics.hpp"

#include <cmath>

#include "snspm/errors.hpp"

namespace snspm {

double TwoModeState::norm_sq() const {
    double n = 0.0;
    for (const auto& a : amp) n += std::norm(a);
    return n;
}

CanonicalCoeffs canonical_coeffs(double intensity) {
    if (!(intensity >= 0.0)) throw param_error("intensity must be non-negative");
    const double damp = std::exp(-0.5 * intensity);
    return {damp * std::sqrt(std::cosh(intensity)),
            damp * std::sqrt(std::sinh(intensity))};
}

TwoModeState signal_pair_state(Sign sign_q, Sign sign_t, double mu) {
    if (!(mu > 0.0)) throw param_error("mu must be positive");
    const auto [c0, c1] = canonical_coeffs(mu);
    const double sq = static_cast<double>(static_cast<int>(sign_q));
    const double st = static_cast<double>(static_cast<int>(sign_t));
    TwoModeState s;
    s.amp = {c0 * c0, sq * st * c1 * c1, st * c0 * c1, sq * c0 * c1};
    s.intensity = mu;
    return s;
}

double coupler_output_intensity(double mu, double Delta, double delta, double V) {
    if (!(mu > 0.0)) throw param_error("mu must be positive");
    if (!(V > 0.0 && V <= 1.0)) throw param_error("V must lie in (0, 1]");
    const double g = (1.0 + V - 2.0 * std::sqrt(V) * std::cos(Delta - delta)) * mu;
    return g < 0.0 ? 0.0 : g; // (1 - sqrt(V))^2 mu >= 0, guard roundoff
}

double worst_case_ss_intensity(double mu, double V) {
    if (!(mu > 0.0)) throw param_error("mu must be positive");
    if (!(V > 0.0 && V <= 1.0)) throw param_error("V must lie in (0, 1]");
    return (1.0 + V + 2.0 * std::sqrt(V)) * mu;
}

TwoModeState ss_output_state(double intensity) {
    const auto [c0, c1] = canonical_coeffs(intensity);
    TwoModeState s;
    s.amp = {c0 * c0, c1 * c1, -c0 * c1, -c0 * c1};
    s.intensity = intensity;
    return s;
}

} // namespace snspm
