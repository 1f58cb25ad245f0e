#ifndef RLNC_SIM_HPP
#define RLNC_SIM_HPP

#include <cstdint>
#include <vector>

#include "rlnc/decoders.hpp"
#include "rlnc/schemes.hpp"

namespace rlnc {

/// Per-receiver success probabilities: an explicit list, or a uniform draw
/// from [lo, hi] per receiver. Ranges are redrawn from the trial's own
/// stream each trial by default; fixed_per_experiment pins one draw for the
/// whole experiment.
struct ChannelRule {
    enum class Kind { List, Range } kind = Kind::List;
    std::vector<double> list;  // length R, or length 1 to broadcast
    double lo = 0, hi = 0;
    bool fixed_per_experiment = false;

    static ChannelRule from_list(std::vector<double> p);
    static ChannelRule from_range(double lo, double hi, bool fixed = false);
};

std::vector<double> draw_channel(const ChannelRule& rule, int R, uint64_t seed);

struct ExperimentSpec {
    SchemeConfig scheme;
    ChannelRule channel;
    int R = 1;
    long trials = 1;
    uint64_t base_seed = 1;
    bool decode_payloads = false;  // decode + verify + count ops per receiver

    /// Broadcast receivers share the sender's coding draws, which correlates
    /// their delays at small fields. This switch gives every receiver its
    /// own draw stream instead, realizing the independence assumed by the
    /// product-form delay expectation. Delay statistics only (no payloads).
    bool independent_receivers = false;

    int threads = 1;  // worker count; never changes the results
};

struct ReceiverTrial {
    int D_r = 0;   // coded transmissions until this receiver could decode
    int U_r = 0;   // originals caught in phase one
    int N_r = 0;   // successful receptions until decodable
    int absA = 0;  // residual system size entering the dense/ring inverse
    uint64_t ops = 0;
};

struct TrialResult {
    long D = 0;  // max over receivers
    std::vector<ReceiverTrial> recv;
    std::vector<double> channel;  // p_r used in this trial
    uint64_t base_seed = 0;       // seed material this trial was derived from
    long trial_index = 0;
};

TrialResult run_trial(const ExperimentSpec& spec, long trial_index);

struct ExperimentStats {
    long trials = 0;
    double mean_D = 0, mean_D_per_P = 0, ci95_D = 0;
    double mean_ops = 0, mean_ops_per_bit = 0;
    double mean_Ur = 0, mean_absA = 0;
    double mean_Nr = 0;
};

/// Runs `trials` independent trials (optionally across threads) and merges
/// them in trial order. Identical results for any thread count.
ExperimentStats run_experiment(const ExperimentSpec& spec);

/// Per-trial D values, in trial order (for empirical CDFs and paired runs).
std::vector<long> run_delays(const ExperimentSpec& spec);

}  // namespace rlnc

#endif
