#ifndef RLNC_BITS_HPP
#define RLNC_BITS_HPP

#include <cstdint>
#include <vector>

#include "rlnc/circring.hpp"
#include "rlnc/errors.hpp"
#include "rlnc/rng.hpp"

namespace rlnc {

/// Binary-operation tally for a decode session. The cost model: XOR of two
/// b-bit symbols = b operations, GF(2^L) multiply = 2L^2, circular shifts and
/// bit drops are free.
struct OpCounter {
    uint64_t binary_ops = 0;
    void add(uint64_t n) { binary_ops += n; }
};

/// Packet payload as M/L symbols, one symbol per word. symbol_bits is L for
/// wire-format packets and L+1 once a decoder has parity-extended them.
struct Packet {
    int symbol_bits = 0;
    std::vector<uint32_t> w;

    Packet() = default;
    Packet(int bits, int nsym) : symbol_bits(bits), w(static_cast<size_t>(nsym), 0) {}

    int num_symbols() const { return static_cast<int>(w.size()); }
    bool operator==(const Packet&) const = default;
};

Packet random_packet(int symbol_bits, int nsym, SplitMix64& rng);

/// dst ^= src; counts num_symbols * symbol_bits operations.
void xor_into(Packet& dst, const Packet& src, OpCounter& ctr);

/// Rotates every (L+1)-bit symbol l positions toward higher bit index.
/// Free in the operation model.
Packet apply_shift(const ShiftParams& p, const Packet& pkt, int l);
void shift_in_place(const ShiftParams& p, Packet& pkt, int l);

/// Parity extension [I | 1]: appends the XOR of the L payload bits as bit L
/// of every symbol. Costs L-1 operations per symbol.
Packet expand_G(const ShiftParams& p, const Packet& pkt, OpCounter& ctr);

/// Truncation [I | 0]^T: drops bit L of every symbol. Free.
Packet project_H(const ShiftParams& p, const Packet& pkt);

/// Applies a ring element (XOR of rotations over its mask) to an
/// (L+1)-state packet. Costs (weight-1)*(L+1) per symbol for weight >= 1.
Packet apply_ring(const ShiftParams& p, RingElem e, const Packet& pkt, OpCounter& ctr);

}  // namespace rlnc

#endif
