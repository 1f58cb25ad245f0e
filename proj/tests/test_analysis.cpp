#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rlnc/analysis.hpp"

using namespace rlnc;

TEST_CASE("innovation probability") {
    CHECK(p_prime(2.0, 0.9, 1, 2) == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(p_prime(2.0, 1.0, 0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p_prime(1e30, 0.7, 3, 8) == doctest::Approx(0.7).epsilon(1e-9));  // huge field limit
    CHECK_THROWS_AS(p_prime(2.0, 0.9, 5, 5), InvalidArgs);
}

TEST_CASE("conditional delay pmf") {
    // one remaining stage: plain geometric
    auto one = delay_pmf_conditional(2.0, 0.8, 3, 2, 30);
    double pp = p_prime(2.0, 0.8, 2, 3);
    for (int d = 1; d <= 30; ++d)
        CHECK(one[static_cast<size_t>(d)] ==
              doctest::Approx(std::pow(1 - pp, d - 1) * pp).epsilon(1e-13));
    // all caught: point mass at zero
    auto atP = delay_pmf_conditional(2.0, 0.8, 3, 3, 5);
    CHECK(atP[0] == 1.0);
    for (int d = 1; d <= 5; ++d) CHECK(atP[static_cast<size_t>(d)] == 0.0);

    // three stages at d = 5: explicit sum over the six compositions
    {
        const double q = 2.0, pr = 0.8;
        const int P = 3, u = 0, d = 5;
        std::vector<double> ps;
        for (int j = 1; j <= P - u; ++j) ps.push_back(p_prime(q, pr, u + j - 1, P));
        double want = 0;
        for (int a1 = 1; a1 <= d - 2; ++a1)
            for (int a2 = 1; a2 <= d - a1 - 1; ++a2) {
                int a3 = d - a1 - a2;
                want += std::pow(1 - ps[0], a1 - 1) * ps[0] * std::pow(1 - ps[1], a2 - 1) * ps[1] *
                        std::pow(1 - ps[2], a3 - 1) * ps[2];
            }
        auto dp = delay_pmf_conditional(q, pr, P, u, 8);
        CHECK(dp[5] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("unconditional delay pmf") {
    // single packet: atom p at zero, then the mixture of the miss branch
    const double q = 4.0, p = 0.7;
    auto pmf = delay_pmf(q, p, 1, 200);
    CHECK(pmf[0] == doctest::Approx(p).epsilon(1e-12));
    double pp = p * (1 - 1 / q);
    for (int d = 1; d < 20; ++d)
        CHECK(pmf[static_cast<size_t>(d)] ==
              doctest::Approx((1 - p) * std::pow(1 - pp, d - 1) * pp).epsilon(1e-12));
    double total = 0;
    for (double v : pmf) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    // monotone, bounded CDF
    double cdf = 0;
    for (double v : pmf) {
        CHECK(v >= 0.0);
        cdf += v;
        CHECK(cdf <= 1.0 + 1e-12);
    }
}

TEST_CASE("huge fields meet the idealized scheme") {
    const double p = 0.8;
    const int P = 6;
    auto pmf = delay_pmf(std::pow(2.0, 40), p, P, 400);
    double cdf = 0;
    for (int d = 0; d <= 40; ++d) {
        cdf += pmf[static_cast<size_t>(d)];
        CHECK(cdf == doctest::Approx(perfect_delay_cdf(p, P, d)).epsilon(1e-9));
    }
}

TEST_CASE("expected system delay") {
    // one receiver, one packet, ideal scheme at p = 1/2: expectation 1
    std::vector<double> half{0.5};
    CHECK(expected_system_delay_perfect(half, 1, 1e-13).value ==
          doctest::Approx(1.0).epsilon(1e-9));
    // perfect channels finish in phase one
    std::vector<double> ones{1.0, 1.0, 1.0};
    CHECK(expected_system_delay_gf(2.0, ones, 5, 1e-12).value == 0.0);
    CHECK(expected_system_delay_perfect(ones, 5, 1e-12).value == 0.0);
    // truncation remainder is reported and small
    std::vector<double> ps{0.85, 0.9};
    auto sd = expected_system_delay_gf(2.0, ps, 8, 1e-12);
    CHECK(sd.remainder_bound < 1e-10);
    CHECK(sd.value > 0.0);
}

TEST_CASE("truncation remainder bound is honored") {
    // a coarse cutoff plus its reported remainder must bracket the value a
    // much tighter cutoff converges to
    for (double q : {2.0, 16.0}) {
        for (int P : {4, 10}) {
            std::vector<double> ps{0.7, 0.85};
            auto coarse = expected_system_delay_gf(q, ps, P, 1e-5);
            auto tight = expected_system_delay_gf(q, ps, P, 1e-13);
            CHECK(tight.value >= coarse.value - 1e-12);
            CHECK(tight.value <= coarse.value + coarse.remainder_bound + 1e-12);
        }
    }
    std::vector<double> ps{0.6};
    auto coarse = expected_system_delay_perfect(ps, 8, 1e-4);
    auto tight = expected_system_delay_perfect(ps, 8, 1e-13);
    CHECK(tight.value >= coarse.value - 1e-12);
    CHECK(tight.value <= coarse.value + coarse.remainder_bound + 1e-12);
}

TEST_CASE("idealized delay CDF") {
    CHECK(perfect_delay_cdf(0.85, 15, 100000) == doctest::Approx(1.0).epsilon(1e-12));
    for (int d = 0; d < 25; ++d)
        CHECK(perfect_delay_cdf(0.4, 1, d) ==
              doctest::Approx(1.0 - std::pow(0.6, d + 1)).epsilon(1e-12));
}

TEST_CASE("extra-receptions pmf, pinned cells") {
    CHECK(gf2_extra_receptions_pmf(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(gf2_extra_receptions_pmf(5, 1) - 0.2887) < 5e-5);
    CHECK(std::abs(gf2_extra_receptions_pmf(20, 20) - 9.5367e-7) < 5e-12);
    CHECK_THROWS_AS(gf2_extra_receptions_pmf(0, 0), InvalidArgs);
}

TEST_CASE("decode-cost closed forms") {
    // large-field approximation at the pinned operating point
    CHECK(conv_complexity_approx(64, 10, 10, 0.85) == doctest::Approx(20064.0).epsilon(1e-12));
    // no erasures: nothing to decode in the removal phase
    CHECK(conv_complexity_expected(64, 10, 4, 1.0, 10.0, 0.0) == doctest::Approx(0.0));
    // GF(2) lower bound at the pinned operating point
    CHECK(gf2_complexity_lower_bound(64, 10, 0.85, 2.0) ==
          doctest::Approx(64.0 * 7.7375).epsilon(1e-12));
    // residual of one disables the quadratic terms
    {
        const int M = 64, P = 12, L = 4;
        double v = circ_complexity_expected(M, P, L, {1, 4}, 0.85, 0.85 * P, 1.0);
        const double ms = static_cast<double>(M) / L;
        double iters = P - 0.85 * P - 1.0;
        double sum_jm1 = ((P - 0.85 * P - 1) + 1.0) * iters / 2.0;
        double want = ms * (P * (L - 1) + 5.0 * (P * P * 0.85 * 0.75 * 0.15)) +
                      sum_jm1 * 0.75 * 5.0 * ms;
        CHECK(v == doctest::Approx(want).epsilon(1e-12));
    }
    // p0 near one leaves the parity-extension term plus vanishing residue
    {
        const int M = 40, P = 8, L = 4;
        double v = circ_complexity_expected(M, P, L, {999, 1000}, 0.85, 0.85 * P, 1.0);
        double expansion = (static_cast<double>(M) / L) * P * (L - 1);
        CHECK(v < expansion * 1.05);
        CHECK(v >= expansion);
    }
}

TEST_CASE("rank probability bounds") {
    auto b = full_rank_prob_bounds({1, 2}, 3, 2, 2.0);
    CHECK(b.circ_lower == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(b.gfq_value == doctest::Approx(0.75).epsilon(1e-12));
    auto b2 = full_rank_prob_bounds({1, 4}, 6, 4, 4.0);
    CHECK(b2.circ_lower == doctest::Approx(1.0 - std::pow(0.25, 3)).epsilon(1e-12));
    CHECK_THROWS_AS(full_rank_prob_bounds({1, 4}, 6, 4, 8.0), InvalidArgs);
}

TEST_CASE("delay-CDF comparison on a lossless channel") {
    auto rep = compare_delay_cdfs(4, 4, {1, 4}, 4.0, 1.0, 500, 99);
    CHECK(rep.violations == 0);
    CHECK(rep.circ_mean == 0.0);
    REQUIRE(!rep.points.empty());
    CHECK(rep.points[0].circ_cdf == doctest::Approx(1.0));
    CHECK(rep.points[0].gfq_cdf == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.mixed_method);
}
