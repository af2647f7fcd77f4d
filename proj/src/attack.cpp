#include "snspm/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snspm/errors.hpp"
#include "snspm/rates.hpp"

namespace snspm {

double distinguish_error_loss_only(double mu, double eps, double eta) {
    if (!(mu > 0.0)) throw param_error("mu must be positive");
    if (!(eps >= 0.0 && eps <= 1.0)) throw param_error("epsilon must lie in [0, 1]");
    if (!(eta > 0.0 && eta <= 1.0)) throw param_error("eta must lie in (0, 1]");
    // Both joint probabilities share the factor eps <++|F+|++>, which drops
    // out of the posteriors. xi^2 is the no-click probability <++|F?|++>.
    const double xi2 = std::exp(-2.0 * mu * std::sqrt(eta));
    const double w_sns = 1.0 - eps;
    const double w_ss = eps * xi2;
    const double total = w_sns + w_ss;
    if (!(total > 0.0)) throw degenerate_error("all-zero joint probability");
    return std::min(w_sns, w_ss) / total;
}

DistinguishBreakdown distinguish_breakdown_realistic(double mu, double eps, double eta,
                                                     double delta, double V,
                                                     double p_dark) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw param_error("epsilon must lie in [0, 1]");
    const TwoModeState both_plus = signal_pair_state(Sign::plus, Sign::plus, mu);
    const double f_plus =
        expectation(both_plus, build_realistic(Outcome::plus, mu, eta, delta, V, p_dark));
    const double f_quiet =
        expectation(both_plus, build_realistic(Outcome::noclick, mu, eta, delta, V, p_dark));
    const double quiet_idle = (1.0 - p_dark) * (1.0 - p_dark); // silent POVM with no input

    DistinguishBreakdown b;
    b.p_sns = eps * f_plus * (1.0 - eps) * quiet_idle;
    b.p_ss = eps * f_plus * eps * f_quiet;
    b.p_nn = (1.0 - eps) * (1.0 - p_dark) * p_dark * (1.0 - eps) * quiet_idle;
    const double total = b.p_sns + b.p_ss + b.p_nn;
    if (!(total > 0.0)) throw degenerate_error("all-zero joint probability");
    b.posterior_sns = b.p_sns / total;
    b.posterior_other = (b.p_ss + b.p_nn) / total;
    return b;
}

double distinguish_error_realistic_scalar(double mu, double eps, double eta, double delta,
                                          double V, double p_dark) {
    const DistinguishBreakdown b =
        distinguish_breakdown_realistic(mu, eps, eta, delta, V, p_dark);
    return std::min(b.posterior_sns, b.posterior_other);
}

double distinguish_error_realistic(const ProtocolParams& p) {
    return distinguish_error_realistic_at(p, p.L_km);
}

double distinguish_error_realistic_at(const ProtocolParams& p, double L_km) {
    ensure_valid(p);
    const double eps = sending_probability_at(p, L_km);
    const double eta = overall_transmittance(p.eta_det, p.alpha_db_per_km, L_km);
    return distinguish_error_realistic_scalar(p.mu, eps, eta, p.delta, p.V, p.p_dark);
}

std::vector<AttackReport> detectability(const ProtocolParams& p,
                                        std::span<const double> L_grid_km, Regime regime) {
    ensure_valid(p);
    if (L_grid_km.empty()) throw param_error("distance grid must not be empty");
    std::vector<AttackReport> reports;
    reports.reserve(L_grid_km.size());
    for (const double L : L_grid_km) {
        const ProtocolParams here = with_distance(p, L);
        const double eps = sending_probability_at(here, L);
        const double eta = overall_transmittance(p.eta_det, p.alpha_db_per_km, L);
        AttackReport r;
        r.L_km = L;
        r.regime = regime;
        if (regime == Regime::ideal) {
            r.e_distinguish = distinguish_error_loss_only(p.mu, eps, eta);
            r.e_baseline = 0.0; // loss-only rounds are error-free
            r.ratio = std::numeric_limits<double>::infinity();
            r.detectable = r.e_distinguish > 0.0; // any observed error exposes her
        } else {
            r.e_distinguish =
                distinguish_error_realistic_scalar(p.mu, eps, eta, p.delta, p.V, p.p_dark);
            r.e_baseline = signal_error_rate(signal_probs(here, Variant::real), eps).e;
            r.ratio = r.e_baseline > 0.0 ? r.e_distinguish / r.e_baseline
                                         : std::numeric_limits<double>::infinity();
            r.detectable = r.e_baseline > 0.0 ? r.ratio > 1.0 : r.e_distinguish > 0.0;
        }
        reports.push_back(r);
    }
    return reports;
}

} // namespace snspm
