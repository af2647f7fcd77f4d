#pragma once

#include <cmath>
#include <string>

#include "snspm/errors.hpp"

namespace snspm::entropy {

/// Floating slop accepted around [0,1] before a probability is rejected.
inline constexpr double kProbabilitySlop = 1e-12;

/// Clamps a probability-like value into [0,1]. Values within `slop` outside
/// the interval are snapped to the nearest endpoint; anything farther out is
/// rejected.
inline double clamp_probability(double p, double slop = kProbabilitySlop) {
    if (p >= 0.0 && p <= 1.0) return p;
    if (p < 0.0 && p >= -slop) return 0.0;
    if (p > 1.0 && p <= 1.0 + slop) return 1.0;
    throw param_error("probability out of range: " + std::to_string(p));
}

/// Shannon entropy of a bit with bias p, in bits. H(0) = H(1) = 0.
inline double binary_entropy(double p) {
    p = clamp_probability(p);
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

/// Holevo bound for a balanced mixture of two pure states with overlap
/// magnitude m: H((1 - m) / 2). Monotone decreasing in m.
inline double holevo_from_overlap(double overlap_magnitude) {
    const double m = clamp_probability(overlap_magnitude);
    return binary_entropy(0.5 * (1.0 - m));
}

/// Error-correction leakage f_EC * H(e) in bits per sifted bit.
inline double ec_leakage(double error_rate, double f_ec) {
    if (f_ec < 1.0) throw param_error("f_EC must be >= 1");
    return f_ec * binary_entropy(error_rate);
}

} // namespace snspm::entropy
