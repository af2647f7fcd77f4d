#include "snspm/rates.hpp"

#include <cmath>
#include <limits>

#include "snspm/entropy.hpp"
#include "snspm/errors.hpp"
#include "snspm/povm.hpp"

namespace snspm {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::loss: return "loss";
        case Variant::loss_rand: return "loss_rand";
        case Variant::real: return "real";
        case Variant::real_aopp: return "real_aopp";
        case Variant::rand: return "rand";
        case Variant::rand_aopp: return "rand_aopp";
    }
    return "real";
}

std::optional<Variant> variant_from_string(const std::string& tag) {
    for (const Variant v : {Variant::loss, Variant::loss_rand, Variant::real,
                            Variant::real_aopp, Variant::rand, Variant::rand_aopp})
        if (to_string(v) == tag) return v;
    return std::nullopt;
}

bool is_randomized(Variant v) {
    return v == Variant::loss_rand || v == Variant::rand || v == Variant::rand_aopp;
}

bool is_aopp(Variant v) {
    return v == Variant::real_aopp || v == Variant::rand_aopp;
}

double rate_loss_only(double mu, double eps, double eta) {
    if (!(mu > 0.0)) throw param_error("mu must be positive");
    if (!(eps >= 0.0 && eps <= 1.0)) throw param_error("epsilon must lie in [0, 1]");
    if (!(eta > 0.0 && eta <= 1.0)) throw param_error("eta must lie in (0, 1]");
    const double sq = std::sqrt(eta);
    const double p_click = -std::expm1(-2.0 * mu * sq); // exact for tiny arguments
    const double overlap = std::exp(-4.0 * mu * (1.0 - sq)) * std::exp(-2.0 * mu * sq);
    return 2.0 * eps * (1.0 - eps) * p_click * (1.0 - entropy::holevo_from_overlap(overlap));
}

double rate_loss_only_randomized(double mu, double eps, double eta) {
    return kPhaseIntervalSifting * rate_loss_only(mu, eps, eta);
}

double ss_click_probability(double intensity, double eta, double delta, double V,
                            double p_dark) {
    if (intensity == 0.0) return p_dark * (1.0 - p_dark);
    return expectation(ss_output_state(intensity),
                       build_realistic(Outcome::minus, intensity, eta, delta, V, p_dark));
}

SignalProbs signal_probs(const ProtocolParams& p, Variant variant, const RateOptions& opts) {
    ensure_valid(p);
    const double eta = overall_transmittance(p.eta_det, p.alpha_db_per_km, p.L_km);
    const PovmOperator f_minus =
        build_realistic(Outcome::minus, p.mu, eta, p.delta, p.V, p.p_dark);
    SignalProbs probs;
    probs.p_sns = expectation(signal_pair_state(Sign::plus, Sign::minus, p.mu), f_minus) +
                  expectation(signal_pair_state(Sign::minus, Sign::plus, p.mu), f_minus);
    const double ss_intensity = is_randomized(variant)
                                    ? worst_case_ss_intensity(p.mu, p.V)
                                    : coupler_output_intensity(p.mu, 0.0, p.delta, p.V);
    if (is_randomized(variant) && opts.force_zero_ss) {
        probs.p_ss = 0.0;
    } else {
        probs.p_ss = ss_click_probability(ss_intensity, eta, p.delta, p.V, p.p_dark);
    }
    probs.p_nn = p.p_dark * (1.0 - p.p_dark);
    return probs;
}

ErrorSplit signal_error_rate(const SignalProbs& probs, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw param_error("epsilon must lie in [0, 1]");
    const double d = 2.0 * eps * (1.0 - eps) * probs.p_sns + eps * eps * probs.p_ss +
                     (1.0 - eps) * (1.0 - eps) * probs.p_nn;
    if (!(d > 0.0)) throw degenerate_error("no conclusive events: D = 0");
    ErrorSplit e;
    e.e1 = eps * eps * probs.p_ss / d;
    e.e2 = (1.0 - eps) * (1.0 - eps) * probs.p_nn / d;
    e.e = e.e1 + e.e2;
    return e;
}

AoppFactors aopp_transform(double e) {
    e = entropy::clamp_probability(e);
    const double keep = (1.0 - e) * (1.0 - e) + e * e;
    return {0.5 * keep, e * e / keep};
}

namespace {

double conclusive_probability(const SignalProbs& probs, double eps) {
    return 2.0 * eps * (1.0 - eps) * probs.p_sns + eps * eps * probs.p_ss +
           (1.0 - eps) * (1.0 - eps) * probs.p_nn;
}

RatePoint degenerate_point(const ProtocolParams& p, Variant variant) {
    RatePoint pt;
    pt.L_km = p.L_km;
    pt.variant = variant;
    pt.degenerate = true;
    pt.e_signal = std::numeric_limits<double>::quiet_NaN();
    return pt;
}

RatePoint loss_only_point(const ProtocolParams& p, Variant variant, double eps, double eta) {
    const double sq = std::sqrt(eta);
    const double p_click = -std::expm1(-2.0 * p.mu * sq);
    const double overlap = std::exp(-4.0 * p.mu * (1.0 - sq)) * std::exp(-2.0 * p.mu * sq);
    RatePoint pt;
    pt.L_km = p.L_km;
    pt.variant = variant;
    pt.chi = entropy::holevo_from_overlap(overlap);
    pt.components = {p_click, 0.0, 0.0}; // per-configuration click probability
    pt.p_conclusive = 2.0 * eps * (1.0 - eps) * p_click;
    pt.e_signal = 0.0;
    pt.rate = pt.p_conclusive * (1.0 - pt.chi);
    if (variant == Variant::loss_rand) pt.rate *= kPhaseIntervalSifting;
    return pt;
}

} // namespace

RatePoint evaluate_rate(const ProtocolParams& p, Variant variant, const RateOptions& opts) {
    ensure_valid(p);
    const double eps = sending_probability_at(p, p.L_km);
    const double eta = overall_transmittance(p.eta_det, p.alpha_db_per_km, p.L_km);
    if (!(eps > 0.0 && eps < 1.0)) return degenerate_point(p, variant); // no sns events

    if (variant == Variant::loss || variant == Variant::loss_rand)
        return loss_only_point(p, variant, eps, eta);

    const SignalProbs plain = signal_probs(p, Variant::real);
    const SignalProbs own =
        is_randomized(variant) ? signal_probs(p, variant, opts) : plain;
    const double d_own = conclusive_probability(own, eps);
    const double d_plain = conclusive_probability(plain, eps);
    if (!(d_own > 0.0) || !(d_plain > 0.0)) return degenerate_point(p, variant);

    // The error rate feeding leakage and pairing is defined on the
    // non-randomized component set; the worst-case send-send term of the
    // randomized variants only scales the conclusive-event prefactor.
    const double e_bracket =
        (eps * eps * plain.p_ss + (1.0 - eps) * (1.0 - eps) * plain.p_nn) / d_plain;
    const double chi = entropy::holevo_from_overlap(
        eve_overlap_realistic(p.mu, eta, p.delta, p.V, p.p_dark));

    double bracket = 0.0;
    double prefactor = d_own;
    if (is_aopp(variant)) {
        const AoppFactors aopp = aopp_transform(e_bracket);
        bracket = 1.0 - chi - entropy::ec_leakage(aopp.e_tilde, p.f_ec);
        prefactor *= aopp.s;
    } else {
        bracket = 1.0 - chi - entropy::ec_leakage(e_bracket, p.f_ec);
    }
    if (is_randomized(variant)) prefactor *= kPhaseIntervalSifting;

    RatePoint pt;
    pt.L_km = p.L_km;
    pt.variant = variant;
    pt.chi = chi;
    pt.components = own;
    pt.p_conclusive = d_own;
    pt.e_signal =
        (eps * eps * own.p_ss + (1.0 - eps) * (1.0 - eps) * own.p_nn) / d_own;
    pt.rate = prefactor * bracket;
    return pt;
}

RatePoint rate_realistic(const ProtocolParams& p) {
    return evaluate_rate(p, Variant::real);
}

RatePoint rate_realistic_aopp(const ProtocolParams& p) {
    return evaluate_rate(p, Variant::real_aopp);
}

RatePoint rate_randomized(const ProtocolParams& p, const RateOptions& opts) {
    return evaluate_rate(p, Variant::rand, opts);
}

RatePoint rate_randomized_aopp(const ProtocolParams& p, const RateOptions& opts) {
    return evaluate_rate(p, Variant::rand_aopp, opts);
}

} // namespace snspm
