#include "rlnc/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "rlnc/linalg.hpp"
#include "rlnc/rng.hpp"

namespace rlnc {

double p_prime(double q, double p_r, int rank, int P) {
    if (rank < 0 || rank >= P) throw InvalidArgs("p_prime: rank must be in [0, P)");
    return p_r * (1.0 - std::pow(q, static_cast<double>(rank - P)));
}

std::vector<double> delay_pmf_conditional(double q, double p_r, int P, int u, int d_max) {
    if (u < 0 || u > P) throw InvalidArgs("delay_pmf_conditional: u out of range");
    std::vector<double> cur(static_cast<size_t>(d_max) + 1, 0.0);
    cur[0] = 1.0;  // zero remaining stages: point mass at 0
    for (int j = 1; j <= P - u; ++j) {
        double pj = p_prime(q, p_r, u + j - 1, P);
        std::vector<double> nxt(static_cast<size_t>(d_max) + 1, 0.0);
        // geometric convolution: f_j(d) = (1-pj) f_j(d-1) + pj f_{j-1}(d-1)
        for (int d = 1; d <= d_max; ++d)
            nxt[static_cast<size_t>(d)] =
                (1.0 - pj) * nxt[static_cast<size_t>(d) - 1] + pj * cur[static_cast<size_t>(d) - 1];
        cur = std::move(nxt);
    }
    return cur;
}

namespace {

// binomial(P, p) weights over the caught count u
std::vector<double> binom_weights(int P, double p) {
    std::vector<double> w(static_cast<size_t>(P) + 1, 0.0);
    if (p >= 1.0) {
        w[static_cast<size_t>(P)] = 1.0;
        return w;
    }
    double cur = std::pow(1.0 - p, P);
    for (int u = 0; u <= P; ++u) {
        w[static_cast<size_t>(u)] = cur;
        if (u < P) cur *= (static_cast<double>(P - u) / (u + 1)) * (p / (1.0 - p));
    }
    return w;
}

}  // namespace

std::vector<double> delay_pmf(double q, double p_r, int P, int d_max) {
    std::vector<double> out(static_cast<size_t>(d_max) + 1, 0.0);
    auto w = binom_weights(P, p_r);
    for (int u = 0; u <= P; ++u) {
        if (w[static_cast<size_t>(u)] <= 0) continue;
        auto cond = delay_pmf_conditional(q, p_r, P, u, d_max);
        for (int d = 0; d <= d_max; ++d)
            out[static_cast<size_t>(d)] += w[static_cast<size_t>(u)] * cond[static_cast<size_t>(d)];
    }
    return out;
}

double perfect_delay_cdf(double p_r, int P, long d) {
    if (p_r >= 1.0) return 1.0;
    // term_j = C(P+j-1, P-1) p^P (1-p)^j accumulated with the stable ratio
    double term = std::exp(P * std::log(p_r));
    double acc = term;
    for (long j = 1; j <= d; ++j) {
        term *= (static_cast<double>(P) + j - 1) / j * (1.0 - p_r);
        acc += term;
    }
    return std::min(acc, 1.0);
}

namespace {

struct TailComponent {
    double weight;              // mixture weight (binomial in u)
    std::vector<double> pmf;    // conditional pmf
    double tail = 0, tail_prev = 0;
};

SystemDelay system_delay_from_components(std::vector<std::vector<TailComponent>>& per_receiver,
                                         int P, double tail_eps) {
    // linear in P, with a floor so that tiny generations at low success
    // probability still reach the tolerance
    const long d_hard = std::max(64L * std::max(P, 1), 1024L);
    for (auto& comps : per_receiver)
        for (auto& c : comps) {
            c.tail = 1.0;
            c.tail_prev = 1.0;
        }

    SystemDelay out;
    long d = 0;
    for (;; ++d) {
        if (d > d_hard)
            throw NonConvergence("expected delay: summand not below tolerance at 64*P terms");
        double prod = 1.0;
        for (auto& comps : per_receiver) {
            double cdf = 0.0, total_w = 0.0;
            for (auto& c : comps) {
                c.tail_prev = c.tail;
                double pd = d < static_cast<long>(c.pmf.size()) ? c.pmf[static_cast<size_t>(d)] : 0.0;
                c.tail = std::max(c.tail - pd, 0.0);
                cdf += c.weight * (1.0 - c.tail);
                total_w += c.weight;
            }
            cdf += 1.0 - total_w;  // numerically lost weight counts as converged
            prod *= std::min(cdf, 1.0);
        }
        double summand = 1.0 - prod;
        if (summand < tail_eps) break;
        out.value += summand;
    }
    out.d_stop = d;

    // each conditional tail is log-concave, so its ratio tail(d+1)/tail(d)
    // never rises after d; the worst component ratio majorizes the rest.
    // The cut starts at d_stop itself (its summand was never added), hence
    // the series 1 + rho + rho^2 + ...
    double remainder = 0.0;
    for (auto& comps : per_receiver) {
        double tail_r = 0.0, rho = 0.0;
        for (auto& c : comps) {
            tail_r += c.weight * c.tail;
            if (c.tail_prev > 0 && c.tail > 0) rho = std::max(rho, c.tail / c.tail_prev);
        }
        rho = std::min(rho, 1.0 - 1e-9);
        remainder += tail_r / (1.0 - rho);
    }
    out.remainder_bound = remainder;
    return out;
}

}  // namespace

SystemDelay expected_system_delay_gf(double q, std::span<const double> p, int P, double tail_eps) {
    const int d_max = std::max(64 * std::max(P, 1), 1024);
    std::vector<std::vector<TailComponent>> comps(p.size());
    for (size_t r = 0; r < p.size(); ++r) {
        double pr = p[r];
        if (!(pr > 0.0 && pr <= 1.0)) throw InvalidArgs("expected delay: p_r must be in (0, 1]");
        auto w = binom_weights(P, pr);
        for (int u = 0; u <= P; ++u)
            if (w[static_cast<size_t>(u)] > 0)
                comps[r].push_back(
                    {w[static_cast<size_t>(u)], delay_pmf_conditional(q, pr, P, u, d_max), 0, 0});
    }
    return system_delay_from_components(comps, P, tail_eps);
}

SystemDelay expected_system_delay_perfect(std::span<const double> p, int P, double tail_eps) {
    const int d_max = std::max(64 * std::max(P, 1), 1024);
    std::vector<std::vector<TailComponent>> comps(p.size());
    for (size_t r = 0; r < p.size(); ++r) {
        double pr = p[r];
        if (!(pr > 0.0 && pr <= 1.0)) throw InvalidArgs("expected delay: p_r must be in (0, 1]");
        // negative-binomial pmf over extra transmissions
        std::vector<double> pmf(static_cast<size_t>(d_max) + 1, 0.0);
        double term = std::exp(P * std::log(pr));
        pmf[0] = term;
        for (int j = 1; j <= d_max; ++j) {
            term *= (static_cast<double>(P) + j - 1) / j * (1.0 - pr);
            pmf[static_cast<size_t>(j)] = term;
        }
        comps[r].push_back({1.0, std::move(pmf), 0, 0});
    }
    return system_delay_from_components(comps, P, tail_eps);
}

double gf2_extra_receptions_pmf(int gap, int n) {
    if (gap < 1 || n < 0) throw InvalidArgs("gf2_extra_receptions_pmf: gap >= 1, n >= 0");
    // A_gap = prod_{j=1..gap} (1 - 2^-j)
    double a = 1.0;
    for (int j = 1; j <= gap; ++j) a *= 1.0 - std::pow(2.0, -j);
    if (n == 0) return a;
    // A'_{j,1} = 1, A'_{j,k} = 2^-j A'_{j,k-1} + A'_{j-1,k}; the pmf needs
    // the first-column-weighted sum, which is A'_{gap, n+1}
    std::vector<double> col(static_cast<size_t>(gap) + 1, 1.0);
    col[0] = 0.0;
    for (int k = 2; k <= n + 1; ++k) {
        std::vector<double> nxt(static_cast<size_t>(gap) + 1, 0.0);
        for (int j = 1; j <= gap; ++j)
            nxt[static_cast<size_t>(j)] =
                std::pow(2.0, -j) * col[static_cast<size_t>(j)] + nxt[static_cast<size_t>(j) - 1];
        col = std::move(nxt);
    }
    return a * col[static_cast<size_t>(gap)];
}

double conv_complexity_approx(int M, int P, int L, double p_r) {
    return static_cast<double>(M) * P * ((2.0 * L + 1) * P - 1) * (1.0 - p_r);
}

double conv_complexity_expected(int M, int P, int L, double p_r, double mean_Ur, double mean_A,
                                double phi_D) {
    const double q = std::pow(2.0, L);
    const double nz = (q - 1.0) / q;
    const double ms = static_cast<double>(M) / L;  // symbols per packet
    // removing caught originals: E[U(P-U)] pairs, each nonzero with (q-1)/q
    double phase1 = (static_cast<double>(P) * P - P) * p_r * (1.0 - p_r) * nz * ms * (2.0 * L * L + L);
    // singleton peeling: one normalization multiply per iteration plus the
    // growing subtraction sweep
    double iters = std::max(static_cast<double>(P) - mean_Ur - mean_A, 0.0);
    double hi = std::max(static_cast<double>(P) - mean_Ur, mean_A);
    double sum_jm1 = (hi - 1.0 + mean_A) * iters / 2.0;  // sum of (j-1), j = A+1..P-U
    double step1 = iters * ms * (2.0 * L * L) + sum_jm1 * nz * ms * (2.0 * L * L + L);
    // residual inverse application
    if (phi_D < 0) phi_D = mean_A * mean_A * nz;
    double step2 = phi_D * ms * (2.0 * L * L) + std::max(phi_D - mean_A, 0.0) * ms * L;
    return phase1 + step1 + step2;
}

double gf2_complexity_lower_bound(int M, int P, double p_r, double mean_A) {
    return 0.5 * M * ((static_cast<double>(P) * P - P) * p_r * (1.0 - p_r) + 3.0 * mean_A - 2.0);
}

double circ_complexity_expected(int M, int P, int L, Rational p0, double p_r, double mean_Ur,
                                double mean_A) {
    const double ms = static_cast<double>(M) / L;
    const double z = p0.value();
    const double n = L + 1.0;
    double bracket = static_cast<double>(P) * (L - 1) +
                     n * (static_cast<double>(P) * P * p_r * (1.0 - z) * (1.0 - p_r) +
                          (mean_A - 1.0) * (mean_A - 1.0) * (L / 2.0 - 1.0) +
                          (mean_A - 1.0) * (mean_A - z));
    double iters = std::max(static_cast<double>(P) - mean_Ur - mean_A, 0.0);
    double hi = std::max(static_cast<double>(P) - mean_Ur, mean_A);
    double sum_jm1 = (hi - 1.0 + mean_A) * iters / 2.0;
    return ms * bracket + sum_jm1 * (1.0 - z) * n * ms;
}

RankProbBounds full_rank_prob_bounds(Rational p0, int P, int J, double q) {
    if (q > 1.0 / p0.value() + 1e-12) throw InvalidArgs("rank bounds: q must satisfy q <= 1/p0");
    if (J < 1 || J > P) throw InvalidArgs("rank bounds: need 1 <= J <= P");
    int e = P - J + 1;
    return {1.0 - std::pow(p0.value(), e), 1.0 - std::pow(1.0 / q, e)};
}

CdfDominanceReport compare_delay_cdfs(int P, int L, Rational p0, double q, double p_r,
                                      long trials, uint64_t seed, double alpha) {
    if (q > 1.0 / p0.value() + 1e-12)
        throw InvalidArgs("compare_delay_cdfs: q must satisfy q <= 1/p0");
    ShiftParams sp = ShiftParams::make(L);
    FieldCtx f = FieldCtx::make(L);
    SchemeConfig cfg{SchemeKind::Circ, L, P, L, p0, false};

    // Monte Carlo of the circular-shift per-receiver delay at one receiver
    long d_cap = 64L * P;
    std::vector<long> hist(static_cast<size_t>(d_cap) + 1, 0);
    std::vector<long> samples;
    samples.reserve(static_cast<size_t>(trials));
    double sum = 0, sum_sq = 0;
    for (long t = 0; t < trials; ++t) {
        SplitMix64 erasure(derive_seed(seed, {1, static_cast<uint64_t>(t)}));
        SplitMix64 sender(derive_seed(seed, {2, static_cast<uint64_t>(t)}));
        GfqRankTracker tracker(f, P);
        int rank = 0;
        for (int j = 0; j < P; ++j) {
            bool got = erasure.bernoulli(p_r);
            if (got) {
                std::vector<uint32_t> unit(static_cast<size_t>(P), 0);
                unit[static_cast<size_t>(j)] = 1;
                if (tracker.absorb(std::move(unit))) ++rank;
            }
        }
        long d = 0;
        while (rank < P) {
            ++d;
            auto header = draw_circ_header(cfg, sender);
            if (erasure.bernoulli(p_r)) {
                if (tracker.absorb(coeff_to_field_column(sp, f, header))) ++rank;
            }
            if (d > d_cap * 16) throw NonConvergence("compare_delay_cdfs: runaway trial");
        }
        sum += static_cast<double>(d);
        sum_sq += static_cast<double>(d) * d;
        hist[static_cast<size_t>(std::min(d, d_cap))]++;
        samples.push_back(d);
    }

    CdfDominanceReport rep;
    rep.eps = std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(trials)));
    rep.circ_mean = sum / static_cast<double>(trials);
    double var = (sum_sq - sum * sum / static_cast<double>(trials)) /
                 std::max<double>(static_cast<double>(trials) - 1, 1);
    rep.circ_mean_ci = 3.0 * std::sqrt(var / static_cast<double>(trials));

    auto gfq_pmf = delay_pmf(q, p_r, P, static_cast<int>(d_cap));
    std::vector<double> p_single{p_r};
    rep.gfq_mean = expected_system_delay_gf(q, p_single, P, 1e-12).value;

    double emp = 0, ana = 0;
    long running = 0;
    for (long d = 0; d <= d_cap; ++d) {
        running += hist[static_cast<size_t>(d)];
        emp = static_cast<double>(running) / static_cast<double>(trials);
        ana += gfq_pmf[static_cast<size_t>(d)];
        rep.points.push_back({d, emp, ana});
        if (emp < ana - rep.eps) ++rep.violations;
        if (emp >= 1.0 && ana > 1.0 - 1e-12) break;
    }
    return rep;
}

}  // namespace rlnc
