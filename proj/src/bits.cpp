#include "rlnc/bits.hpp"

#include <bit>

namespace rlnc {

Packet random_packet(int symbol_bits, int nsym, SplitMix64& rng) {
    Packet p(symbol_bits, nsym);
    uint32_t mask = (symbol_bits >= 32) ? ~0u : ((1u << symbol_bits) - 1);
    for (auto& s : p.w) s = static_cast<uint32_t>(rng.next()) & mask;
    return p;
}

void xor_into(Packet& dst, const Packet& src, OpCounter& ctr) {
    if (dst.symbol_bits != src.symbol_bits || dst.w.size() != src.w.size())
        throw ShapeMismatch("xor_into: packet shapes differ");
    for (size_t i = 0; i < dst.w.size(); ++i) dst.w[i] ^= src.w[i];
    ctr.add(static_cast<uint64_t>(dst.w.size()) * dst.symbol_bits);
}

void shift_in_place(const ShiftParams& p, Packet& pkt, int l) {
    if (pkt.symbol_bits != p.n())
        throw WrongState("apply_shift: packet symbols are not in the (L+1)-bit state");
    int n = p.n();
    l %= n;
    if (l == 0) return;
    uint32_t mask = (1u << n) - 1;
    for (auto& s : pkt.w) s = ((s << l) | (s >> (n - l))) & mask;
}

Packet apply_shift(const ShiftParams& p, const Packet& pkt, int l) {
    Packet out = pkt;
    shift_in_place(p, out, l);
    return out;
}

Packet expand_G(const ShiftParams& p, const Packet& pkt, OpCounter& ctr) {
    if (pkt.symbol_bits != p.L)
        throw WrongState("expand_G: packet symbols are not in the L-bit state");
    Packet out(p.n(), pkt.num_symbols());
    for (size_t i = 0; i < pkt.w.size(); ++i) {
        uint32_t s = pkt.w[i];
        uint32_t parity = static_cast<uint32_t>(std::popcount(s)) & 1u;
        out.w[i] = s | (parity << p.L);
    }
    ctr.add(static_cast<uint64_t>(pkt.w.size()) * (p.L - 1));
    return out;
}

Packet project_H(const ShiftParams& p, const Packet& pkt) {
    if (pkt.symbol_bits != p.n())
        throw WrongState("project_H: packet symbols are not in the (L+1)-bit state");
    Packet out(p.L, pkt.num_symbols());
    uint32_t mask = (1u << p.L) - 1;
    for (size_t i = 0; i < pkt.w.size(); ++i) out.w[i] = pkt.w[i] & mask;
    return out;
}

Packet apply_ring(const ShiftParams& p, RingElem e, const Packet& pkt, OpCounter& ctr) {
    if (pkt.symbol_bits != p.n())
        throw WrongState("apply_ring: packet symbols are not in the (L+1)-bit state");
    Packet out(p.n(), pkt.num_symbols());
    int w = ring_weight(e);
    RingElem rest = e;
    while (rest) {
        int l = std::countr_zero(rest);
        rest &= rest - 1;
        if (l == 0) {
            for (size_t i = 0; i < pkt.w.size(); ++i) out.w[i] ^= pkt.w[i];
        } else {
            int n = p.n();
            uint32_t mask = (1u << n) - 1;
            for (size_t i = 0; i < pkt.w.size(); ++i)
                out.w[i] ^= ((pkt.w[i] << l) | (pkt.w[i] >> (n - l))) & mask;
        }
    }
    if (w >= 1) ctr.add(static_cast<uint64_t>(pkt.w.size()) * (w - 1) * p.n());
    return out;
}

}  // namespace rlnc
