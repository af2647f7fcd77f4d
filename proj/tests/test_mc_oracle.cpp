#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "snspm/errors.hpp"
#include "snspm/mc_oracle.hpp"

using namespace snspm;

TEST_SUITE("mc-oracle") {

TEST_CASE("nobody sends, nothing clicks") {
    const auto s = mc::simulate(0.1, 0.0, 1.0, 20000, 7);
    CHECK(s.minus_count == 0);
    CHECK(s.p_conclusive_hat == 0.0);
    CHECK(s.sns_count == 0);
    CHECK(s.nn_count == 20000);
}

TEST_CASE("conclusive fraction lands within four sigma of the closed form") {
    const std::uint64_t n = 1000000;
    const auto s = mc::simulate(0.1, 0.05, 1.0, n, 42);
    const auto t = mc::analytic_targets(0.1, 0.05, 1.0);
    CHECK(t.p_conclusive == doctest::Approx(0.017221).epsilon(1e-4));
    const auto z = mc::empirical_vs_analytic(s, t);
    CHECK(std::abs(z.z_p_conclusive) < 4.0);
    CHECK(std::abs(z.z_f_sns) < 4.0);
    CHECK(std::abs(z.z_f_ss) < 4.0);
    CHECK(std::abs(z.z_f_nn) < 4.0);
}

TEST_CASE("kept key bits agree exactly after the inversion") {
    for (const std::uint64_t seed : {1ULL, 9ULL, 123456ULL}) {
        const auto s = mc::simulate(0.2, 0.3, 0.8, 200000, seed);
        REQUIRE(s.minus_count > 0);
        CHECK(s.kept_errors == 0);
        CHECK(s.correlation == 1.0);
    }
}

TEST_CASE("same seed gives a bit-identical summary") {
    const auto a = mc::simulate(0.1, 0.05, 0.5, 250000, 77);
    const auto b = mc::simulate(0.1, 0.05, 0.5, 250000, 77);
    CHECK(a.minus_count == b.minus_count);
    CHECK(a.sns_count == b.sns_count);
    CHECK(a.ss_count == b.ss_count);
    CHECK(a.nn_count == b.nn_count);
    CHECK(a.p_conclusive_hat == b.p_conclusive_hat);

    const auto t = mc::analytic_targets(0.1, 0.05, 0.5);
    CHECK(mc::summary_csv_row(a, t, mc::empirical_vs_analytic(a, t)) ==
          mc::summary_csv_row(b, t, mc::empirical_vs_analytic(b, t)));
}

TEST_CASE("a planted transmittance bug is caught loudly") {
    const std::uint64_t n = 1000000;
    const auto s = mc::simulate(0.1, 0.05, 0.5, n, 3); // channel actually halved
    const auto wrong = mc::analytic_targets(0.1, 0.05, 1.0);
    const auto z = mc::empirical_vs_analytic(s, wrong);
    CHECK(std::abs(z.z_p_conclusive) > 10.0);
}

TEST_CASE("sharded runs merge to the full round count") {
    mc::Options opts;
    opts.shards = 3;
    const auto s = mc::simulate(0.1, 0.1, 0.9, 300001, 11, opts);
    CHECK(s.sns_count + s.ss_count + s.nn_count == 300001);
    CHECK(s.kept_errors == 0);
    CHECK(s.correlation == 1.0);
    // deterministic for the fixed (seed, shards) pair
    const auto again = mc::simulate(0.1, 0.1, 0.9, 300001, 11, opts);
    CHECK(s.minus_count == again.minus_count);
}

TEST_CASE("zero-variance statistics are skipped with a note") {
    const auto s = mc::simulate(0.1, 0.0, 1.0, 1000, 5);
    const auto z = mc::empirical_vs_analytic(s, mc::analytic_targets(0.1, 0.0, 1.0));
    CHECK_FALSE(z.notes.empty());
    CHECK(z.z_f_nn == 0.0);
}

TEST_CASE("inputs are checked") {
    CHECK_THROWS_AS(mc::simulate(0.1, 0.05, 1.0, 0, 1), param_error);
    CHECK_THROWS_AS(mc::simulate(0.1, 1.5, 1.0, 10, 1), param_error);
    CHECK_THROWS_AS(mc::simulate(0.1, 0.05, 0.0, 10, 1), param_error);
    mc::Summary empty;
    CHECK_THROWS_AS(mc::empirical_vs_analytic(empty, mc::analytic_targets(0.1, 0.05, 1.0)),
                    param_error);
}

TEST_CASE("trace file is capped and well-formed") {
    const std::string path = "mc_trace_test.csv";
    mc::Options opts;
    opts.trace_path = path;
    opts.trace_cap = 50;
    mc::simulate(0.3, 0.5, 1.0, 5000, 21, opts);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "round,alice_sends,bob_sends,outcome,key_a,key_b");
    std::size_t rows = 0;
    bool saw_minus = false;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find("minus") != std::string::npos) saw_minus = true;
    }
    CHECK(rows == 50);
    CHECK(saw_minus);
    std::remove(path.c_str());
}

} // TEST_SUITE
