#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "snspm/errors.hpp"
#include "snspm/povm.hpp"

using namespace snspm;

namespace {

// independent bilinear form, plain loops over the amplitude arrays
std::complex<double> form_oracle(const TwoModeState& a, const Eigen::Matrix4cd& m,
                                 const TwoModeState& b) {
    std::complex<double> acc = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) acc += std::conj(a.amp[r]) * m(r, c) * b.amp[c];
    return acc;
}

double herm_residual(const Eigen::Matrix4cd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Eigen::Matrix4cd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m);
    return es.eigenvalues().minCoeff();
}

} // namespace

TEST_SUITE("povm") {

TEST_CASE("destructive and no-click expectations match the closed forms") {
    for (const double mu : {0.01, 0.1, 0.5, 1.0}) {
        for (const double eta : {1e-6, 1e-3, 0.1, 1.0}) {
            const double xi2 = std::exp(-2.0 * mu * std::sqrt(eta));
            const auto pm = signal_pair_state(Sign::plus, Sign::minus, mu);
            CHECK(expectation(pm, build_ideal(Outcome::minus, mu, eta)) ==
                  doctest::Approx(1.0 - xi2).epsilon(1e-13));
            CHECK(expectation(pm, build_ideal(Outcome::noclick, mu, eta)) ==
                  doctest::Approx(xi2).epsilon(1e-13));
        }
    }
}

TEST_CASE("constructive port fires for in-phase pairs, destructive stays silent") {
    const double mu = 0.1, eta = 0.37;
    const double xi2 = std::exp(-2.0 * mu * std::sqrt(eta));
    const auto pp = signal_pair_state(Sign::plus, Sign::plus, mu);
    const auto f_plus = build_ideal(Outcome::plus, mu, eta);
    const auto f_minus = build_ideal(Outcome::minus, mu, eta);

    CHECK(expectation(pp, f_plus) == doctest::Approx(1.0 - xi2).epsilon(1e-13));
    CHECK(std::abs(expectation(pp, f_minus)) < 1e-14);
    CHECK(form_oracle(pp, f_plus.matrix, pp).real() ==
          doctest::Approx(1.0 - xi2).epsilon(1e-13));

    // F? picks up xi^2 on every sign pattern
    const auto f_q = build_ideal(Outcome::noclick, mu, eta);
    for (const Sign a : {Sign::plus, Sign::minus})
        for (const Sign b : {Sign::plus, Sign::minus})
            CHECK(expectation(signal_pair_state(a, b, mu), f_q) ==
                  doctest::Approx(xi2).epsilon(1e-13));
}

TEST_CASE("the three outcomes exhaust the signal states") {
    const double mu = 0.23, eta = 0.11;
    const auto pm = signal_pair_state(Sign::plus, Sign::minus, mu);
    const double total = expectation(pm, build_ideal(Outcome::minus, mu, eta)) +
                         expectation(pm, build_ideal(Outcome::plus, mu, eta)) +
                         expectation(pm, build_ideal(Outcome::noclick, mu, eta));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

    // the remainder operator (double clicks) is Hermitian and vanishes on all
    // four sign patterns
    const Eigen::Matrix4cd rest = Eigen::Matrix4cd::Identity() -
                                  build_ideal(Outcome::minus, mu, eta).matrix -
                                  build_ideal(Outcome::plus, mu, eta).matrix -
                                  build_ideal(Outcome::noclick, mu, eta).matrix;
    CHECK(herm_residual(rest) < 1e-12);
    for (const Sign a : {Sign::plus, Sign::minus})
        for (const Sign b : {Sign::plus, Sign::minus}) {
            const auto s = signal_pair_state(a, b, mu);
            CHECK(std::abs(form_oracle(s, rest, s)) < 1e-12);
        }
}

TEST_CASE("symmetric coupler output never fires the destructive port") {
    for (const double I : {1e-6, 3.31265961898e-4, 0.389935886896, 1.0})
        for (const double eta : {1e-6, 0.37, 1.0})
            CHECK(std::abs(expectation(ss_output_state(I), build_ideal(Outcome::minus, I, eta))) <
                  1e-12);
}

TEST_CASE("realistic operators collapse to ideal without imperfections") {
    for (const Outcome o : {Outcome::minus, Outcome::plus, Outcome::noclick}) {
        const auto real = build_realistic(o, 0.1, 0.3, 0.0, 1.0, 0.0);
        const auto ideal = build_ideal(o, 0.1, 0.3);
        CHECK((real.matrix - ideal.matrix).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("realistic destructive expectation fixture") {
    const auto pm = signal_pair_state(Sign::plus, Sign::minus, 0.1);
    const auto f = build_realistic(Outcome::minus, 0.1, 1.0, M_PI / 60.0, 0.95, 8e-8);
    const std::complex<double> raw = form_oracle(pm, f.matrix, pm);
    CHECK(std::abs(raw.imag()) < 1e-12);
    const double v = expectation(pm, f);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(v == doctest::Approx(0.17860721479583).epsilon(1e-10));
}

TEST_CASE("built operators are Hermitian and positive semidefinite") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uI(0.001, 1.5), ueta(1e-6, 1.0),
        ud(0.0, M_PI * 0.999), uV(0.05, 1.0), up(0.0, 0.2);
    double worst_h = 0.0, worst_eig = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double I = uI(rng), eta = ueta(rng);
        const double d = ud(rng), V = uV(rng), pd = up(rng);
        for (const Outcome o : {Outcome::minus, Outcome::plus, Outcome::noclick}) {
            for (const auto& op :
                 {build_ideal(o, I, eta), build_realistic(o, I, eta, d, V, pd)}) {
                worst_h = std::max(worst_h, herm_residual(op.matrix));
                worst_eig = std::min(worst_eig, min_eigenvalue(op.matrix));
            }
        }
    }
    CHECK(worst_h < 1e-12);
    CHECK(worst_eig > -1e-10);
}

TEST_CASE("ideal-regime entries are real") {
    for (const Outcome o : {Outcome::minus, Outcome::plus, Outcome::noclick}) {
        const auto op = build_ideal(o, 0.4, 0.2);
        CHECK(op.matrix.imag().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("expectation rejects a state built at another intensity") {
    const auto op = build_ideal(Outcome::minus, 0.1, 0.5);
    CHECK_THROWS_AS(expectation(signal_pair_state(Sign::plus, Sign::minus, 0.2), op),
                    param_error);
    CHECK_THROWS_AS(cross_term(signal_pair_state(Sign::plus, Sign::minus, 0.2),
                               signal_pair_state(Sign::minus, Sign::plus, 0.1), op),
                    param_error);
}

TEST_CASE("cross term reduces to the expectation on the diagonal") {
    const auto op = build_realistic(Outcome::minus, 0.1, 0.4, 0.1, 0.9, 1e-6);
    const auto s = signal_pair_state(Sign::plus, Sign::minus, 0.1);
    const auto c = cross_term(s, s, op);
    CHECK(c.real() == doctest::Approx(expectation(s, op)).epsilon(1e-13));
    CHECK(std::abs(c.imag()) < 1e-14);
}

TEST_CASE("normalized cross term reproduces the overlap closed form") {
    for (const double mu : {0.05, 0.1, 0.6}) {
        for (const double eta : {1e-5, 0.01, 0.5, 1.0}) {
            const double sq = std::sqrt(eta);
            const double target = std::exp(-4.0 * mu * (1.0 - sq) - 2.0 * mu * sq);
            CHECK(eve_overlap_ideal(mu, eta) == doctest::Approx(target).epsilon(1e-11));
        }
    }
    CHECK(eve_overlap_ideal(0.1, 1.0) == doctest::Approx(std::exp(-0.2)).epsilon(1e-12));
    CHECK(eve_overlap_ideal(0.1, 0.01) == doctest::Approx(std::exp(-0.38)).epsilon(1e-12));
    CHECK(eve_overlap_realistic(0.1, 0.25, 0.0, 1.0, 0.0) ==
          doctest::Approx(eve_overlap_ideal(0.1, 0.25)).epsilon(1e-11));
}

TEST_CASE("matrix dump is readable") {
    const auto text = format_matrix(build_ideal(Outcome::minus, 0.1, 0.5));
    CHECK(text.find("F-") != std::string::npos);
    CHECK(text.find("loss-only") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(build_ideal(Outcome::minus, 0.0, 0.5), param_error);
    CHECK_THROWS_AS(build_ideal(Outcome::minus, 0.1, 0.0), param_error);
    CHECK_THROWS_AS(build_ideal(Outcome::minus, 0.1, 1.5), param_error);
    CHECK_THROWS_AS(build_realistic(Outcome::minus, 0.1, 0.5, -0.1, 1.0, 0.0), param_error);
    CHECK_THROWS_AS(build_realistic(Outcome::minus, 0.1, 0.5, 0.0, 0.0, 0.0), param_error);
    CHECK_THROWS_AS(build_realistic(Outcome::minus, 0.1, 0.5, 0.0, 1.0, 1.0), param_error);
}

} // TEST_SUITE
