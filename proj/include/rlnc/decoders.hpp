#ifndef RLNC_DECODERS_HPP
#define RLNC_DECODERS_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "rlnc/linalg.hpp"
#include "rlnc/schemes.hpp"

namespace rlnc {

/// Everything a receiver holds when it becomes able to decode: the caught
/// originals (any subset, by index) plus enough innovative coded packets to
/// reach joint full rank.
struct DecodeInput {
    SchemeConfig cfg;
    std::vector<int> caught;              // sorted original indices received uncoded
    std::vector<Packet> caught_payloads;  // same order as `caught`
    std::vector<CodedPacket> coded;       // cfg.P - caught.size() packets
};

struct DecodeStats {
    OpCounter counted;  // total binary operations, sum of the phase fields below

    uint64_t expand_ops = 0;       // parity extension of all packets (circ only)
    uint64_t phase1_ops = 0;       // removing caught originals from coded packets
    uint64_t step1_ops = 0;        // recursive singleton eliminations
    uint64_t step2_pivot_ops = 0;  // pivot-row packet updates before inversion
    uint64_t step2_apply_ops = 0;  // applying the inverse to the residual packets
    uint64_t backsub_ops = 0;      // recovery of the pivot original (circ only)

    /// Cost of computing the residual inverse matrix itself. Reported
    /// separately and NOT included in `counted` (the per-symbol work
    /// dominates it at realistic M; keeping it visible avoids hiding it).
    uint64_t inverse_diag_ops = 0;

    int residual_A = 0;  // |A| when the singleton pass stalls (0 if it finishes)
};

/// Lowest-index row of A with exactly one nonzero among the columns in Ap.
std::optional<std::pair<int, int>> singleton_scan(
    const std::vector<int>& A, const std::vector<int>& Ap,
    const std::function<bool(int, int)>& nonzero);

/// Two-phase decoder for the conventional GF(2^L) scheme. Returns the P
/// originals, bit exact; throws SingularMatrix if the session is not full
/// rank (caller bug).
std::vector<Packet> decode_conv(const FieldCtx& f, const DecodeInput& in, DecodeStats& st);

/// Refined decoder for the circular-shift scheme: parity-extend, eliminate
/// caught originals with free rotations, singleton-eliminate, then one pivot
/// normalization plus a ring block inverse for whatever remains.
std::vector<Packet> decode_circ(const ShiftParams& p, const DecodeInput& in, DecodeStats& st);

/// Same pipeline for the 1-bit-redundancy variant: payloads arrive already
/// parity-extended, so the expansion pass (and its P*(M/L)*(L-1) operations)
/// disappears.
std::vector<Packet> decode_circ_red(const ShiftParams& p, const DecodeInput& in, DecodeStats& st);

/// Residual system size |A| after the singleton pass, computed from the
/// coding coefficients alone (used when payload decoding is switched off).
int residual_after_singletons(int P, const std::vector<int>& caught,
                              const std::function<bool(int, int)>& coded_nonzero, int num_coded);

}  // namespace rlnc

#endif
