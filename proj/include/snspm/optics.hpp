#pragma once

#include <array>
#include <complex>

namespace snspm {

/// Two-mode coherent state truncated to the even/odd photon-parity basis.
/// Amplitude order is fixed as (|e0 e0>, |e1 e1>, |e0 e1>, |e1 e0>); the
/// 2x2 block structure of the measurement operators is contiguous in it.
struct TwoModeState {
    std::array<std::complex<double>, 4> amp{};
    double intensity = 0.0; // per-mode mean photon number

    double norm_sq() const;
};

struct CanonicalCoeffs {
    double c0 = 0.0;
    double c1 = 0.0;
};

/// Even/odd basis coefficients of a coherent state with intensity I:
/// c0 = e^{-I/2} sqrt(cosh I), c1 = e^{-I/2} sqrt(sinh I).
/// c0^2 + c1^2 == 1 for every I >= 0.
CanonicalCoeffs canonical_coeffs(double intensity);

enum class Sign : int { plus = +1, minus = -1 };

/// Product state |s_q sqrt(mu)> x |s_t sqrt(mu)> with |+-sqrt(mu)> = c0|e0> +- c1|e1>.
TwoModeState signal_pair_state(Sign sign_q, Sign sign_t, double mu);

/// Residual intensity behind a coupler fed with two intensity-mu states at
/// relative phase Delta, phase mismatch delta and mode mismatch V:
/// gamma = (1 + V - 2 sqrt(V) cos(Delta - delta)) * mu.
double coupler_output_intensity(double mu, double Delta, double delta, double V);

/// Worst-case coupler output over the input phase difference,
/// psi = (1 + V + 2 sqrt(V)) * mu, reached at Delta = delta - pi.
double worst_case_ss_intensity(double mu, double V);

/// Coupler output after a send-send round: two copies of
/// c0(I)|e0'> - c1(I)|e1'>, the global phase absorbed into the basis.
TwoModeState ss_output_state(double intensity);

} // namespace snspm
