#include "snspm/params.hpp"

#include <cmath>
#include <sstream>

#include "snspm/errors.hpp"

namespace snspm {

std::vector<std::string> validate(const ProtocolParams& p) {
    std::vector<std::string> v;
    if (!(p.mu > 0.0)) v.push_back("mu must be positive");
    if (!(p.delta >= 0.0 && p.delta < M_PI)) v.push_back("delta must lie in [0, pi)");
    if (!(p.V > 0.0 && p.V <= 1.0)) v.push_back("V must lie in (0, 1]");
    if (!(p.eta_det > 0.0 && p.eta_det <= 1.0)) v.push_back("eta_det must lie in (0, 1]");
    if (!(p.p_dark >= 0.0 && p.p_dark < 1.0)) v.push_back("p_dark must lie in [0, 1)");
    if (!(p.f_ec >= 1.0)) v.push_back("f_EC must be >= 1");
    if (!(p.alpha_db_per_km >= 0.0)) v.push_back("alpha must be non-negative");
    if (!(p.L_km >= 0.0)) v.push_back("L must be non-negative");
    if (std::holds_alternative<double>(p.epsilon)) {
        const double eps = std::get<double>(p.epsilon);
        if (!(eps > 0.0 && eps < 1.0)) v.push_back("epsilon must lie in (0, 1)");
    } else {
        const auto& prof = std::get<EpsilonProfile>(p.epsilon);
        if (!(prof.eps0 > 0.0 && prof.eps0 <= prof.eps_max && prof.eps_max < 1.0))
            v.push_back("epsilon profile requires 0 < epsilon0 <= epsilon_max < 1");
        if (!(prof.L_max_km > 0.0)) v.push_back("L_max must be positive");
    }
    return v;
}

void ensure_valid(const ProtocolParams& p) {
    const auto violations = validate(p);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid parameters:";
    for (const auto& s : violations) msg << " [" << s << "]";
    throw param_error(msg.str());
}

double overall_transmittance(double eta_det, double alpha_db_per_km, double L_km) {
    if (!(eta_det > 0.0 && eta_det <= 1.0)) throw param_error("eta_det must lie in (0, 1]");
    if (!(alpha_db_per_km >= 0.0)) throw param_error("alpha must be non-negative");
    if (!(L_km >= 0.0)) throw param_error("L must be non-negative");
    return eta_det * eta_det * std::pow(10.0, -alpha_db_per_km * L_km / 10.0);
}

double sending_probability(double L_km, const EpsilonProfile& profile) {
    if (!(profile.eps0 > 0.0 && profile.eps0 <= profile.eps_max && profile.eps_max < 1.0))
        throw param_error("epsilon profile requires 0 < epsilon0 <= epsilon_max < 1");
    if (!(profile.L_max_km > 0.0)) throw param_error("L_max must be positive");
    if (!(L_km >= 0.0)) throw param_error("L must be non-negative");
    if (L_km >= profile.L_max_km) return profile.eps_max;
    const double x = L_km / profile.L_max_km;
    return profile.eps0 + (profile.eps_max - profile.eps0) * x * x * x;
}

double sending_probability_at(const ProtocolParams& p, double L_km) {
    if (std::holds_alternative<double>(p.epsilon)) return std::get<double>(p.epsilon);
    return sending_probability(L_km, std::get<EpsilonProfile>(p.epsilon));
}

ProtocolParams with_distance(const ProtocolParams& p, double L_km) {
    ProtocolParams q = p;
    q.L_km = L_km;
    return q;
}

} // namespace snspm
