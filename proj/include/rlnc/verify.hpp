#ifndef RLNC_VERIFY_HPP
#define RLNC_VERIFY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rlnc/decoders.hpp"
#include "rlnc/schemes.hpp"

namespace rlnc::verify {

enum class Budget { Quick, Full };

struct CheckResult {
    std::string id;      // canonical check name
    std::string detail;  // the property being checked, in math terms
    bool pass = false;
    std::string stats;   // deterministic one-line evidence
};

struct Options {
    Budget budget = Budget::Quick;
    uint64_t seed = 1;
    int threads = 1;
};

// Algebra and symbol-level checks
CheckResult check_field_axioms(Budget b, uint64_t seed);
CheckResult check_shift_identities();
CheckResult check_ring_det_oracle(uint64_t seed);
CheckResult check_sigma_properties(uint64_t seed);
CheckResult check_block_inverse_golden();
CheckResult check_block_inverse_random(Budget b, uint64_t seed);
CheckResult check_symbol_ops_oracle(uint64_t seed);

// Rank machinery
CheckResult check_tracker_oracle(uint64_t seed);
CheckResult check_field_embedding_rank(Budget b, uint64_t seed);

// Schemes
CheckResult check_scheme_self_description(uint64_t seed);
CheckResult check_header_roundtrip(uint64_t seed);
CheckResult check_p0_distribution(Budget b, uint64_t seed);
CheckResult check_wire_roundtrip(uint64_t seed);

// Decoders
CheckResult check_decoder_roundtrips(Budget b, uint64_t seed);
CheckResult check_redundant_variant_savings(uint64_t seed);
CheckResult check_opcount_script(uint64_t seed);

// Analytics
CheckResult check_delay_dp_enumeration();
CheckResult check_extra_receptions_table();
CheckResult check_negbin_cdf_mc(Budget b, uint64_t seed);
CheckResult check_delay_gap_trend();

// Simulation-backed statistics
CheckResult check_delay_analytic_vs_sim(Budget b, uint64_t seed, int threads);
CheckResult check_rank_bound_mc(Budget b, uint64_t seed);
CheckResult check_cdf_dominance(Budget b, uint64_t seed);
CheckResult check_headline_tradeoff(Budget b, uint64_t seed, int threads);
CheckResult check_opcount_reconciliation(Budget b, uint64_t seed, int threads);
CheckResult check_empirical_cdf_band(Budget b, uint64_t seed, int threads);
CheckResult check_sim_determinism(uint64_t seed);

/// Runs the whole suite in canonical order. Failures become report entries,
/// never exceptions.
std::vector<CheckResult> run_all(const Options& opt);

std::string render_text(std::span<const CheckResult> results);
std::string render_jsonl(std::span<const CheckResult> results);

/// Builds a random full-rank decode session (any scheme kind except
/// Perfect): originals are random payloads, the caught set is Bernoulli(p_r)
/// per original, coded packets are drawn from the scheme until innovative.
DecodeInput random_session(const SchemeConfig& cfg, double p_r, uint64_t seed,
                           std::vector<Packet>& originals_out);

}  // namespace rlnc::verify

#endif
