#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rlnc/sim.hpp"

using namespace rlnc;

namespace {

ExperimentSpec base_spec() {
    ExperimentSpec spec;
    spec.scheme = SchemeConfig{SchemeKind::Circ, 4, 6, 32, {1, 4}, false};
    spec.channel = ChannelRule::from_range(0.8, 0.9);
    spec.R = 4;
    spec.trials = 50;
    spec.base_seed = 42;
    spec.decode_payloads = true;
    return spec;
}

}  // namespace

TEST_CASE("channel rules") {
    auto fixed = draw_channel(ChannelRule::from_list({0.9}), 5, 1);
    CHECK(fixed == std::vector<double>(5, 0.9));
    auto listed = draw_channel(ChannelRule::from_list({0.5, 0.6, 0.7}), 3, 1);
    CHECK(listed == std::vector<double>{0.5, 0.6, 0.7});
    CHECK_THROWS_AS(draw_channel(ChannelRule::from_list({0.5, 0.6}), 3, 1), InvalidArgs);
    CHECK_THROWS_AS(draw_channel(ChannelRule::from_list({0.0}), 1, 1), InvalidArgs);
    auto r1 = draw_channel(ChannelRule::from_range(0.8, 0.9), 8, 7);
    auto r2 = draw_channel(ChannelRule::from_range(0.8, 0.9), 8, 7);
    CHECK(r1 == r2);
    for (double p : r1) {
        CHECK(p >= 0.8);
        CHECK(p <= 0.9);
    }
}

TEST_CASE("perfect channels finish in phase one") {
    ExperimentSpec spec = base_spec();
    spec.scheme = SchemeConfig{SchemeKind::ConvGF, 2, 5, 16, {0, 1}, false};
    spec.channel = ChannelRule::from_list({1.0});
    spec.decode_payloads = true;
    spec.trials = 10;
    auto st = run_experiment(spec);
    CHECK(st.mean_D == 0.0);
    CHECK(st.mean_Ur == 5.0);
    CHECK(st.mean_absA == 0.0);
}

TEST_CASE("idealized scheme, single packet, p = 1/2") {
    ExperimentSpec spec;
    spec.scheme = SchemeConfig{SchemeKind::Perfect, 1, 1, 8, {0, 1}, false};
    spec.channel = ChannelRule::from_list({0.5});
    spec.R = 1;
    spec.trials = 40000;
    spec.base_seed = 9;
    spec.threads = 4;
    auto st = run_experiment(spec);
    // E[D] = 1; Var(D) = sum of geometric-tail variance, bounded by 6
    CHECK(std::abs(st.mean_D - 1.0) < 3.0 * std::sqrt(6.0 / static_cast<double>(spec.trials)));
}

TEST_CASE("repeatability of a single trial") {
    ExperimentSpec spec = base_spec();
    auto a = run_trial(spec, 7);
    auto b = run_trial(spec, 7);
    CHECK(a.D == b.D);
    CHECK(a.channel == b.channel);
    REQUIRE(a.recv.size() == b.recv.size());
    for (size_t r = 0; r < a.recv.size(); ++r) {
        CHECK(a.recv[r].D_r == b.recv[r].D_r);
        CHECK(a.recv[r].U_r == b.recv[r].U_r);
        CHECK(a.recv[r].N_r == b.recv[r].N_r);
        CHECK(a.recv[r].absA == b.recv[r].absA);
        CHECK(a.recv[r].ops == b.recv[r].ops);
    }
    // basic invariants
    long mx = 0;
    for (const auto& r : a.recv) {
        CHECK(r.U_r <= 6);
        CHECK(r.N_r >= 6);
        mx = std::max(mx, static_cast<long>(r.D_r));
    }
    CHECK(a.D == mx);
}

TEST_CASE("single-trial experiment reports that trial") {
    ExperimentSpec spec = base_spec();
    spec.trials = 1;
    auto tr = run_trial(spec, 0);
    auto st = run_experiment(spec);
    CHECK(st.mean_D == static_cast<double>(tr.D));
    CHECK(st.ci95_D == 0.0);
    long sum_U = 0, sum_A = 0;
    unsigned long long sum_ops = 0;
    for (const auto& r : tr.recv) {
        sum_U += r.U_r;
        sum_A += r.absA;
        sum_ops += r.ops;
    }
    CHECK(st.mean_Ur == static_cast<double>(sum_U) / spec.R);
    CHECK(st.mean_absA == static_cast<double>(sum_A) / spec.R);
    CHECK(st.mean_ops == static_cast<double>(sum_ops) / spec.R);
    CHECK(tr.trial_index == 0);
    CHECK(tr.base_seed == spec.base_seed);
}

TEST_CASE("worker count cannot change anything") {
    ExperimentSpec spec = base_spec();
    spec.threads = 1;
    auto d1 = run_delays(spec);
    auto s1 = run_experiment(spec);
    spec.threads = 3;
    auto d3 = run_delays(spec);
    auto s3 = run_experiment(spec);
    CHECK(d1 == d3);
    CHECK(s1.mean_D == s3.mean_D);
    CHECK(s1.ci95_D == s3.ci95_D);
    CHECK(s1.mean_ops == s3.mean_ops);
    CHECK(s1.mean_Ur == s3.mean_Ur);
    CHECK(s1.mean_absA == s3.mean_absA);
}

TEST_CASE("doubling the trial count preserves the prefix") {
    ExperimentSpec spec = base_spec();
    spec.decode_payloads = false;
    auto d50 = run_delays(spec);
    spec.trials = 100;
    auto d100 = run_delays(spec);
    CHECK(std::equal(d50.begin(), d50.end(), d100.begin()));
}

TEST_CASE("decode toggle does not disturb delay statistics") {
    ExperimentSpec spec = base_spec();
    spec.decode_payloads = false;
    auto off = run_delays(spec);
    spec.decode_payloads = true;
    auto on = run_delays(spec);
    CHECK(off == on);
}

TEST_CASE("per-scheme smoke: every kind simulates and decodes") {
    for (auto kind : {SchemeKind::ConvGF, SchemeKind::Circ, SchemeKind::CircRed}) {
        ExperimentSpec spec = base_spec();
        spec.scheme.kind = kind;
        if (kind == SchemeKind::ConvGF) spec.scheme.p0 = {0, 1};
        spec.trials = 25;
        auto st = run_experiment(spec);
        CHECK(st.mean_ops > 0.0);
        CHECK(st.mean_Ur > 0.0);
    }
    ExperimentSpec perf = base_spec();
    perf.scheme = SchemeConfig{SchemeKind::Perfect, 1, 6, 32, {0, 1}, false};
    perf.decode_payloads = false;
    auto st = run_experiment(perf);
    CHECK(st.mean_ops == 0.0);
}

TEST_CASE("per-packet delay closes on the idealized scheme as P grows") {
    auto mean_per_P = [](SchemeKind kind, int L, Rational p0, int P) {
        ExperimentSpec spec;
        spec.scheme = SchemeConfig{kind, L, P, L * 8, p0, false};
        spec.channel = ChannelRule::from_range(0.8, 0.9);
        spec.R = 8;
        spec.trials = 800;
        spec.base_seed = 31;
        spec.threads = 4;
        return run_experiment(spec).mean_D_per_P;
    };
    for (int P : {6, 18}) {
        double perf = mean_per_P(SchemeKind::Perfect, 1, {0, 1}, P);
        double gf2 = mean_per_P(SchemeKind::ConvGF, 1, {0, 1}, P);
        double circ = mean_per_P(SchemeKind::Circ, 4, {1, 4}, P);
        CHECK(perf <= gf2);
        CHECK(circ <= gf2);
        if (P == 6) continue;
        // gaps to the ideal shrink with the generation size
        double perf6 = mean_per_P(SchemeKind::Perfect, 1, {0, 1}, 6);
        double gf2_6 = mean_per_P(SchemeKind::ConvGF, 1, {0, 1}, 6);
        double circ6 = mean_per_P(SchemeKind::Circ, 4, {1, 4}, 6);
        CHECK(gf2 - perf < gf2_6 - perf6);
        CHECK(circ - perf < circ6 - perf6);
    }
}

TEST_CASE("fixed channel draws once per experiment") {
    ExperimentSpec spec = base_spec();
    spec.decode_payloads = false;
    spec.channel = ChannelRule::from_range(0.8, 0.9, true);
    auto a = run_trial(spec, 0);
    auto b = run_trial(spec, 123);
    CHECK(a.channel == b.channel);
    spec.channel = ChannelRule::from_range(0.8, 0.9, false);
    auto c = run_trial(spec, 0);
    auto d = run_trial(spec, 123);
    CHECK(c.channel != d.channel);
}
