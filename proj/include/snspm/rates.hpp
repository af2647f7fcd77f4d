#pragma once

#include <optional>
#include <string>

#include "snspm/params.hpp"

namespace snspm {

enum class Variant { loss, loss_rand, real, real_aopp, rand, rand_aopp };

std::string to_string(Variant v);
std::optional<Variant> variant_from_string(const std::string& tag);
bool is_randomized(Variant v);
bool is_aopp(Variant v);

/// Destructive-click probabilities per sending configuration.
struct SignalProbs {
    double p_sns = 0.0; // sum over both send/not-send orderings at intensity mu
    double p_ss  = 0.0; // on the coupler output (gamma, or psi when randomized)
    double p_nn  = 0.0; // p_dark (1 - p_dark)
};

struct ErrorSplit {
    double e1 = 0.0; // send-send contribution
    double e2 = 0.0; // dark-count contribution
    double e  = 0.0; // e1 + e2
};

struct AoppFactors {
    double s       = 0.0; // pairing sifting factor, [(1-e)^2 + e^2] / 2
    double e_tilde = 0.0; // paired error rate, e^2 / [(1-e)^2 + e^2]
};

/// One evaluated point of a rate-distance curve.
struct RatePoint {
    double L_km         = 0.0;
    double rate         = 0.0; // bits per round, reported raw (may be <= 0)
    double e_signal     = 0.0; // (eps^2 p_ss + (1-eps)^2 p_nn) / p_conclusive
    double chi          = 0.0; // Holevo bound on the eavesdropper information
    double p_conclusive = 0.0; // 2 eps (1-eps) p_sns + eps^2 p_ss + (1-eps)^2 p_nn
    SignalProbs components;
    Variant variant = Variant::real;
    bool degenerate = false;   // no conclusive events; e_signal is NaN
};

/// Test hook: forces the randomized send-send term to zero so the 1/2
/// phase-interval factor can be checked in isolation.
struct RateOptions {
    bool force_zero_ss = false;
};

/// Loss-only closed forms. eps may sit on the closed interval [0,1]; the rate
/// vanishes at the endpoints.
double rate_loss_only(double mu, double eps, double eta);
double rate_loss_only_randomized(double mu, double eps, double eta);

/// Phase-interval sifting factor of the randomized protocol.
inline constexpr double kPhaseIntervalSifting = 0.5;

/// Destructive-click probability on a symmetric coupler output |sqrt(I), sqrt(I)>.
/// Handles the vacuum (I = 0) analytically: only a lone dark count can fire,
/// so the value is p_dark (1 - p_dark).
double ss_click_probability(double intensity, double eta, double delta, double V,
                            double p_dark);

/// Click probabilities at distance p.L_km. Randomized variants evaluate the
/// send-send term on the worst-case intensity psi instead of gamma.
SignalProbs signal_probs(const ProtocolParams& p, Variant variant,
                         const RateOptions& opts = {});

/// Error decomposition over conclusive events. Throws degenerate_error when
/// no configuration produces a click (D = 0).
ErrorSplit signal_error_rate(const SignalProbs& probs, double eps);

/// AOPP sifting factor and paired error rate.
AoppFactors aopp_transform(double e);

/// Evaluates one variant at p.L_km. The leakage and AOPP factors are driven
/// by the error rate of the non-randomized component set; the randomized
/// variants use their worst-case send-send term only in the conclusive-event
/// prefactor, which keeps their rate zero-crossings aligned with the plain
/// variants. The reported e_signal always refers to the variant's own
/// components.
RatePoint evaluate_rate(const ProtocolParams& p, Variant variant,
                        const RateOptions& opts = {});

RatePoint rate_realistic(const ProtocolParams& p);
RatePoint rate_realistic_aopp(const ProtocolParams& p);
RatePoint rate_randomized(const ProtocolParams& p, const RateOptions& opts = {});
RatePoint rate_randomized_aopp(const ProtocolParams& p, const RateOptions& opts = {});

} // namespace snspm
