#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "snspm/optics.hpp"
#include "snspm/params.hpp"

namespace snspm {

enum class Outcome { minus, plus, noclick };
enum class Regime { ideal, realistic };

/// 4x4 Hermitian PSD measurement operator in the fixed two-mode parity basis.
///
/// All scalar ingredients (xi, Omega, c0, c1) are evaluated at the per-mode
/// intensity of the state the operator is meant to act on; expectations are
/// meaningless if the basis intensities disagree, so evaluation rejects
/// mismatched pairs.
struct PovmOperator {
    Eigen::Matrix4cd matrix;
    Outcome outcome = Outcome::minus;
    Regime regime = Regime::ideal;
    double build_intensity = 0.0;
};

/// Loss-only operator for one beamsplitter outcome at per-mode intensity I and
/// overall transmittance eta. Entries are real.
PovmOperator build_ideal(Outcome outcome, double intensity, double eta);

/// Imperfection-aware operator: misalignment (delta, V) folded into the click
/// operators, dark counts mixed in as
///   F-_imp = (1-p_dark) F-_mis + (1-p_dark) p_dark F?_mis
/// (analogously for +), and F?_imp = (1-p_dark)^2 F?_mis for the no-click
/// outcome (both detectors silent including their dark counts).
PovmOperator build_realistic(Outcome outcome, double intensity, double eta,
                             double delta, double V, double p_dark);

/// <state| F |state>. Real in [0,1]; rejects intensity mismatch.
double expectation(const TwoModeState& state, const PovmOperator& op);

/// Bilinear form <a| F |b>. Complex in general for realistic operators.
std::complex<double> cross_term(const TwoModeState& a, const TwoModeState& b,
                                const PovmOperator& op);

/// Overlap magnitude of the two post-measurement eavesdropper states behind
/// the destructive-port click,
///   |<01|F-|10>| / sqrt(<01|F-|01> <10|F-|10>),
/// with F- of the requested regime. In [0,1]; loss-only closed form is
/// e^{-4 mu (1 - sqrt(eta))} e^{-2 mu sqrt(eta)}.
double eve_overlap_ideal(double mu, double eta);
double eve_overlap_realistic(double mu, double eta, double delta, double V, double p_dark);
double eve_overlap(const ProtocolParams& p, Regime regime);

/// Plain-text dump of the matrix for inspection.
std::string format_matrix(const PovmOperator& op);

std::string to_string(Outcome o);
std::string to_string(Regime r);

} // namespace snspm
