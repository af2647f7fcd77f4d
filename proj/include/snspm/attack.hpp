#pragma once

#include <span>
#include <vector>

#include "snspm/params.hpp"
#include "snspm/povm.hpp"

namespace snspm {

/// Detectability record of the intercept-and-announce attack in which the
/// eavesdropper measures each party's pulse pair separately and fabricates
/// the announcement from the two outcomes.
struct AttackReport {
    double L_km          = 0.0;
    double e_distinguish = 0.0; // her error confusing sns with ss (or nn)
    double e_baseline    = 0.0; // the protocol's own conclusive error rate
    double ratio         = 0.0; // e_distinguish / e_baseline (inf when baseline is 0)
    Regime regime        = Regime::realistic;
    bool detectable      = false;
};

/// Raw joint probabilities of the observation [kappa' = +, kappa'' = ?] per
/// sending configuration, and their normalized posteriors.
struct DistinguishBreakdown {
    double p_sns = 0.0;
    double p_ss  = 0.0;
    double p_nn  = 0.0;          // zero in the loss-only model
    double posterior_sns   = 0.0;
    double posterior_other = 0.0; // ss (loss-only) or ss+nn (realistic)
};

/// Loss-only: the common sending-side factor cancels between the two
/// posteriors, leaving min{1-eps, eps xi^2} / ((1-eps) + eps xi^2) with
/// xi^2 = e^{-2 mu sqrt(eta)}. Value in [0, 1/2].
double distinguish_error_loss_only(double mu, double eps, double eta);

/// Realistic observation probabilities at raw scalars. eps may sit on [0,1].
/// Throws degenerate_error when the joint probability is identically zero.
DistinguishBreakdown distinguish_breakdown_realistic(double mu, double eps, double eta,
                                                     double delta, double V, double p_dark);
double distinguish_error_realistic_scalar(double mu, double eps, double eta,
                                          double delta, double V, double p_dark);

/// Realistic error at distance L (or p.L_km), with eps and eta from p.
double distinguish_error_realistic(const ProtocolParams& p);
double distinguish_error_realistic_at(const ProtocolParams& p, double L_km);

/// One report per grid distance. In the loss-only regime the protocol error
/// is exactly zero, so any nonzero attack error is flagged detectable and the
/// ratio reported as infinity.
std::vector<AttackReport> detectability(const ProtocolParams& p,
                                        std::span<const double> L_grid_km,
                                        Regime regime);

} // namespace snspm
