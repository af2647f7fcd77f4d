#include "snspm/povm.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "snspm/entropy.hpp"
#include "snspm/errors.hpp"

namespace snspm {
namespace {

using cx = std::complex<double>;

struct Scalars {
    double xi, omega, c0, c1;
};

Scalars scalars_at(double intensity, double eta) {
    if (!(intensity > 0.0)) throw param_error("operator intensity must be positive");
    if (!(eta > 0.0 && eta <= 1.0)) throw param_error("eta must lie in (0, 1]");
    const double sq = std::sqrt(eta);
    const auto [c0, c1] = canonical_coeffs(intensity);
    return {std::exp(-sq * intensity), std::exp(-2.0 * (1.0 - sq) * intensity), c0, c1};
}

Eigen::Matrix4cd noclick_matrix(const Scalars& s) {
    const double xi2 = s.xi * s.xi;
    const double c02 = s.c0 * s.c0, c12 = s.c1 * s.c1;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = xi2 * (1.0 + s.omega) * (1.0 + s.omega) / (4.0 * c02 * c02);
    m(1, 1) = xi2 * (1.0 - s.omega) * (1.0 - s.omega) / (4.0 * c12 * c12);
    m(2, 2) = m(3, 3) = xi2 * (1.0 - s.omega * s.omega) / (4.0 * c02 * c12);
    return m;
}

Eigen::Matrix4cd ideal_click_matrix(const Scalars& s, double sign) {
    const double xi2 = s.xi * s.xi;
    const double om2 = s.omega * s.omega;
    const double c02 = s.c0 * s.c0, c12 = s.c1 * s.c1;
    const double even = 1.0 - xi2 * om2; // parity-preserving block weight
    const double odd = 1.0 + xi2 * om2;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = even / (8.0 * c02 * c02);
    m(1, 1) = even / (8.0 * c12 * c12);
    m(0, 1) = m(1, 0) = sign * even / (8.0 * c02 * c12);
    m(2, 2) = m(3, 3) = odd / (8.0 * c02 * c12);
    m(2, 3) = m(3, 2) = sign * odd / (8.0 * c02 * c12);
    return (1.0 - xi2) * m;
}

Eigen::Matrix4cd misaligned_click_matrix(const Scalars& s, double sign, double delta,
                                         double V) {
    const double sv = std::sqrt(V);
    const double cosw = sv * std::cos(delta);
    // xi^(1 +- i y) = xi e^{+- i y ln xi}; d is the conjugate of c by construction.
    const double lnxi = std::log(s.xi);
    const double a = (1.0 - std::pow(s.xi, 1.0 + cosw)) * std::pow(s.xi, 1.0 - cosw);
    const double b = (std::pow(s.xi, 2.0 * (1.0 + cosw)) - std::pow(s.xi, 1.0 + cosw)) *
                     std::pow(s.xi, 1.0 - cosw) * s.omega * s.omega;
    const cx c = (s.xi * std::exp(cx(0.0, sv * std::sin(delta) * lnxi)) - s.xi) * s.xi * s.omega;
    const double o = (1.0 - std::pow(s.xi, 1.0 - cosw)) * std::pow(s.xi, 1.0 + cosw);
    const double p = (std::pow(s.xi, 2.0 * (1.0 - cosw)) - std::pow(s.xi, 1.0 - cosw)) *
                     std::pow(s.xi, 1.0 + cosw) * s.omega * s.omega;
    const double c_plus_d = 2.0 * c.real();
    const cx c_minus_d(0.0, 2.0 * c.imag());
    const double c02 = s.c0 * s.c0, c12 = s.c1 * s.c1;

    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = (a + b + 2.0 * c_plus_d + o + p) / (8.0 * c02 * c02);
    m(1, 1) = (a + b - 2.0 * c_plus_d + o + p) / (8.0 * c12 * c12);
    m(0, 1) = m(1, 0) = sign * (a + b - o - p) / (8.0 * c02 * c12);
    m(2, 2) = m(3, 3) = (a - b + o - p) / (8.0 * c02 * c12);
    m(2, 3) = sign * ((a - b - o + p) + 2.0 * c_minus_d) / (8.0 * c02 * c12);
    m(3, 2) = std::conj(m(2, 3));
    return m;
}

double click_sign(Outcome outcome) {
    return outcome == Outcome::minus ? -1.0 : 1.0;
}

void require_matching_intensity(const TwoModeState& state, const PovmOperator& op) {
    const double tol = 1e-12 * std::max(1.0, std::abs(op.build_intensity));
    if (std::abs(state.intensity - op.build_intensity) > tol)
        throw param_error("state intensity does not match the operator's build intensity");
}

} // namespace

PovmOperator build_ideal(Outcome outcome, double intensity, double eta) {
    const Scalars s = scalars_at(intensity, eta);
    PovmOperator op;
    op.outcome = outcome;
    op.regime = Regime::ideal;
    op.build_intensity = intensity;
    op.matrix = (outcome == Outcome::noclick) ? noclick_matrix(s)
                                              : ideal_click_matrix(s, click_sign(outcome));
    return op;
}

PovmOperator build_realistic(Outcome outcome, double intensity, double eta, double delta,
                             double V, double p_dark) {
    if (!(delta >= 0.0 && delta < M_PI)) throw param_error("delta must lie in [0, pi)");
    if (!(V > 0.0 && V <= 1.0)) throw param_error("V must lie in (0, 1]");
    if (!(p_dark >= 0.0 && p_dark < 1.0)) throw param_error("p_dark must lie in [0, 1)");
    const Scalars s = scalars_at(intensity, eta);
    const Eigen::Matrix4cd quiet = noclick_matrix(s); // misalignment leaves F? unchanged
    PovmOperator op;
    op.outcome = outcome;
    op.regime = Regime::realistic;
    op.build_intensity = intensity;
    if (outcome == Outcome::noclick) {
        op.matrix = (1.0 - p_dark) * (1.0 - p_dark) * quiet;
    } else {
        const Eigen::Matrix4cd mis = misaligned_click_matrix(s, click_sign(outcome), delta, V);
        op.matrix = (1.0 - p_dark) * mis + (1.0 - p_dark) * p_dark * quiet;
    }
    return op;
}

double expectation(const TwoModeState& state, const PovmOperator& op) {
    require_matching_intensity(state, op);
    const Eigen::Map<const Eigen::Vector4cd> v(state.amp.data());
    const cx val = v.dot(op.matrix * v);
    if (std::abs(val.imag()) > 1e-10)
        throw degenerate_error("expectation has a non-negligible imaginary part");
    const double re = val.real();
    if (re < -1e-10 || re > 1.0 + 1e-10)
        throw degenerate_error("expectation outside [0, 1]");
    return std::min(std::max(re, 0.0), 1.0);
}

std::complex<double> cross_term(const TwoModeState& a, const TwoModeState& b,
                                const PovmOperator& op) {
    require_matching_intensity(a, op);
    require_matching_intensity(b, op);
    const Eigen::Map<const Eigen::Vector4cd> va(a.amp.data());
    const Eigen::Map<const Eigen::Vector4cd> vb(b.amp.data());
    return va.dot(op.matrix * vb);
}

namespace {

double overlap_from_operator(double mu, const PovmOperator& f_minus) {
    const TwoModeState send_not = signal_pair_state(Sign::plus, Sign::minus, mu);
    const TwoModeState not_send = signal_pair_state(Sign::minus, Sign::plus, mu);
    const double ea = expectation(send_not, f_minus);
    const double eb = expectation(not_send, f_minus);
    const double den = std::sqrt(ea * eb);
    if (!(den > 0.0))
        throw degenerate_error("singular configuration: destructive-port click probability vanishes");
    const double m = std::abs(cross_term(send_not, not_send, f_minus)) / den;
    return entropy::clamp_probability(m, 1e-10);
}

} // namespace

double eve_overlap_ideal(double mu, double eta) {
    return overlap_from_operator(mu, build_ideal(Outcome::minus, mu, eta));
}

double eve_overlap_realistic(double mu, double eta, double delta, double V, double p_dark) {
    return overlap_from_operator(mu, build_realistic(Outcome::minus, mu, eta, delta, V, p_dark));
}

double eve_overlap(const ProtocolParams& p, Regime regime) {
    ensure_valid(p);
    const double eta = overall_transmittance(p.eta_det, p.alpha_db_per_km, p.L_km);
    return regime == Regime::ideal
               ? eve_overlap_ideal(p.mu, eta)
               : eve_overlap_realistic(p.mu, eta, p.delta, p.V, p.p_dark);
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::minus: return "-";
        case Outcome::plus: return "+";
        case Outcome::noclick: return "?";
    }
    return "?";
}

std::string to_string(Regime r) {
    return r == Regime::ideal ? "loss-only" : "realistic";
}

std::string format_matrix(const PovmOperator& op) {
    std::ostringstream out;
    out << "F" << to_string(op.outcome) << " (" << to_string(op.regime)
        << ", I=" << op.build_intensity << ")\n";
    char buf[64];
    for (int r = 0; r < 4; ++r) {
        out << "  [";
        for (int c = 0; c < 4; ++c) {
            const cx v = op.matrix(r, c);
            std::snprintf(buf, sizeof(buf), " %+.6e%+.6ei", v.real(), v.imag());
            out << buf;
        }
        out << " ]\n";
    }
    return out.str();
}

} // namespace snspm
