#ifndef RLNC_ANALYSIS_HPP
#define RLNC_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rlnc/errors.hpp"
#include "rlnc/schemes.hpp"

namespace rlnc {

/// Probability that the next successfully received coded packet is
/// innovative at a receiver with current rank `rank`: p_r * (1 - q^(rank-P)).
double p_prime(double q, double p_r, int rank, int P);

/// Conditional pmf of the per-receiver delay given u caught originals:
/// distribution of a sum of P-u independent geometrics with success
/// probabilities p_prime(q, p_r, u..P-1). Computed by convolution DP
/// (identical to the sum over compositions, without the exponential scan).
/// Index d of the result is Pr(D_r = d | U_r = u), d in [0, d_max].
std::vector<double> delay_pmf_conditional(double q, double p_r, int P, int u, int d_max);

/// Unconditional per-receiver delay pmf: binomial mixture over the caught
/// count u (the d = 0 entry carries the p_r^P all-caught atom).
std::vector<double> delay_pmf(double q, double p_r, int P, int d_max);

/// Per-receiver delay CDF of the idealized scheme (any P received packets
/// decode): the negative-binomial CDF sum_{j<=d} C(P+j-1, P-1) p^P (1-p)^j,
/// i.e. the regularized incomplete beta function I_p(P, d+1).
double perfect_delay_cdf(double p_r, int P, long d);

struct SystemDelay {
    double value = 0;             // truncated sum of Pr(D > d)
    double remainder_bound = 0;   // geometric-tail majorant for the cut part
    long d_stop = 0;
};

/// Expected system completion delay sum_{d>=0} (1 - prod_r Pr(D_r <= d)),
/// truncated once the summand stays below tail_eps; the remainder is bounded
/// by a geometric majorant taken from the component tail ratios (valid
/// because each conditional tail is log-concave). Throws NonConvergence if
/// the summand is still above tail_eps at d = 64*P.
SystemDelay expected_system_delay_gf(double q, std::span<const double> p, int P, double tail_eps);
SystemDelay expected_system_delay_perfect(std::span<const double> p, int P, double tail_eps);

/// Pr(N_r = P + n | U = u) for the GF(2) scheme, as a function of the gap
/// P - u: probability that exactly n non-innovative successful receptions
/// happen before the receiver reaches full rank.
double gf2_extra_receptions_pmf(int gap, int n);

/// Large-field approximation of the expected decode cost:
/// M * P * [(2L+1)P - 1] * (1 - p_r).
double conv_complexity_approx(int M, int P, int L, double p_r);

/// Same cost assembled from the per-phase expectations, evaluated at the
/// supplied mean U_r / mean |A| (and optionally a measured nonzero count of
/// the residual inverse; defaults to |A|^2 (q-1)/q).
double conv_complexity_expected(int M, int P, int L, double p_r, double mean_Ur, double mean_A,
                                double phi_D = -1);

/// GF(2) lower bound (M/2) * [(P^2-P) p_r (1-p_r) + 3|A| - 2].
double gf2_complexity_lower_bound(int M, int P, double p_r, double mean_A);

/// Expected decode cost of the circular-shift scheme, evaluated at the
/// supplied means.
double circ_complexity_expected(int M, int P, int L, Rational p0, double p_r, double mean_Ur,
                                double mean_A);

struct RankProbBounds {
    double circ_lower;  // 1 - p0^(P-J+1)
    double gfq_value;   // 1 - (1/q)^(P-J+1)
};

/// Lower bound on the full-rank probability of J circular-shift coding
/// vectors vs. the exact GF(q) value, for q <= 1/p0.
RankProbBounds full_rank_prob_bounds(Rational p0, int P, int J, double q);

struct CdfDominancePoint {
    long d;
    double circ_cdf;      // empirical
    double gfq_cdf;       // analytic
};

struct CdfDominanceReport {
    std::vector<CdfDominancePoint> points;
    double eps;            // one-sided empirical-CDF slack (DKW band)
    long violations = 0;   // points with circ_cdf < gfq_cdf - eps
    double circ_mean = 0;  // empirical mean per-receiver delay
    double circ_mean_ci = 0;
    double gfq_mean = 0;   // analytic per-receiver expectation
    bool mixed_method = true;  // circ side is Monte Carlo; GF(q) side analytic
};

/// Pointwise comparison Pr(D_r^circ <= d) >= Pr(D_r^gfq <= d): the
/// circular-shift CDF has no closed form here, so that side is estimated by
/// seeded Monte Carlo while the GF(q) side is exact. `q` must be a prime
/// power <= 1/p0.
CdfDominanceReport compare_delay_cdfs(int P, int L, Rational p0, double q, double p_r,
                                      long trials, uint64_t seed, double alpha = 1e-6);

}  // namespace rlnc

#endif
