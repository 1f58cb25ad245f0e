#include "rlnc/schemes.hpp"

namespace rlnc {

std::string scheme_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::ConvGF: return "gf";
        case SchemeKind::Perfect: return "perfect";
        case SchemeKind::Circ: return "circ";
        case SchemeKind::CircRed: return "circ-red";
    }
    return "?";
}

void validate_p0(Rational p0, int L) {
    if (p0.den == 0 || p0.num == 0 || p0.num >= p0.den)
        throw InvalidP0("p0 must be a rational in (0, 1)");
    // p0 >= 1/(L+2)  <=>  num*(L+2) >= den
    if (static_cast<uint64_t>(p0.num) * (L + 2) < p0.den)
        throw InvalidP0("p0 must be at least 1/(L+2)");
}

void SchemeConfig::validate() const {
    if (P < 1) throw InvalidArgs("config: P must be positive");
    if (kind == SchemeKind::Perfect) {
        if (M % std::max(L, 1) != 0) throw InvalidArgs("config: L must divide M");
        return;
    }
    if (M <= 0 || M % L != 0) throw InvalidArgs("config: L must divide M and M > 0");
    if (kind == SchemeKind::ConvGF) {
        if (L < 1 || L > FieldCtx::kMaxTableL)
            throw InvalidArgs("config: conventional scheme supports 1 <= L <= 16");
    } else {
        if (!is_admissible_L(L))
            throw InvalidArgs("config: circular-shift scheme needs admissible L (2, 4, 10, 12, 18, 28, ...)");
        if (L > FieldCtx::kMaxL)
            throw InvalidArgs("config: circular-shift L above supported cap 18");
        validate_p0(p0, L);
    }
}

Coeff draw_p0_coeff(Rational p0, int L, SplitMix64& rng) {
    validate_p0(p0, L);
    uint64_t a = p0.num, b = p0.den;
    uint64_t range = b * static_cast<uint64_t>(L + 1);
    uint64_t zeros = a * static_cast<uint64_t>(L + 1);
    uint64_t u = rng.below(range);
    if (u < zeros) return Coeff::zero();
    return Coeff::shift(static_cast<int>((u - zeros) / (b - a)) + 1);
}

std::vector<Coeff> draw_circ_header(const SchemeConfig& cfg, SplitMix64& rng) {
    std::vector<Coeff> h(static_cast<size_t>(cfg.P));
    for (auto& c : h) c = draw_p0_coeff(cfg.p0, cfg.L, rng);
    return h;
}

std::vector<uint32_t> draw_conv_header(const SchemeConfig& cfg, SplitMix64& rng) {
    std::vector<uint32_t> h(static_cast<size_t>(cfg.P));
    uint64_t q = uint64_t{1} << cfg.L;
    for (auto& g : h)
        g = cfg.forced_nonzero ? static_cast<uint32_t>(rng.below(q - 1) + 1)
                               : static_cast<uint32_t>(rng.below(q));
    return h;
}

std::vector<CodedPacket> encode_systematic(const SchemeConfig& cfg,
                                           std::span<const Packet> originals) {
    if (static_cast<int>(originals.size()) != cfg.P)
        throw ShapeMismatch("encode_systematic: expected P originals");
    std::vector<CodedPacket> out;
    out.reserve(originals.size());
    for (int j = 0; j < cfg.P; ++j) {
        CodedPacket pkt;
        pkt.systematic = true;
        pkt.sys_index = j;
        if (cfg.kind == SchemeKind::ConvGF) {
            pkt.gamma.assign(static_cast<size_t>(cfg.P), 0);
            pkt.gamma[static_cast<size_t>(j)] = 1;
        } else if (cfg.kind == SchemeKind::Circ || cfg.kind == SchemeKind::CircRed) {
            pkt.shifts.assign(static_cast<size_t>(cfg.P), Coeff::zero());
            pkt.shifts[static_cast<size_t>(j)] = Coeff::shift(cfg.L + 1);  // identity coefficient
        }
        if (cfg.kind == SchemeKind::CircRed) {
            ShiftParams p = ShiftParams::make(cfg.L);
            OpCounter scratch;
            pkt.payload = expand_G(p, originals[static_cast<size_t>(j)], scratch);
        } else {
            pkt.payload = originals[static_cast<size_t>(j)];
        }
        pkt.has_payload = true;
        out.push_back(std::move(pkt));
    }
    return out;
}

Packet combine_conv(const SchemeConfig& cfg, const FieldCtx& f, std::span<const uint32_t> gamma,
                    std::span<const Packet> originals) {
    Packet acc(cfg.L, cfg.symbols());
    for (size_t j = 0; j < gamma.size(); ++j) {
        uint32_t g = gamma[j];
        if (g == 0) continue;
        const Packet& m = originals[j];
        for (int s = 0; s < acc.num_symbols(); ++s)
            acc.w[static_cast<size_t>(s)] ^= f.mul(g, m.w[static_cast<size_t>(s)]);
    }
    return acc;
}

Packet combine_circ(const SchemeConfig& cfg, const ShiftParams& p, std::span<const Coeff> shifts,
                    std::span<const Packet> originals) {
    const bool red = cfg.kind == SchemeKind::CircRed;
    Packet acc(red ? p.n() : p.L, cfg.symbols());
    OpCounter scratch;
    for (size_t j = 0; j < shifts.size(); ++j) {
        if (shifts[j].is_zero()) continue;
        Packet t = expand_G(p, originals[j], scratch);
        shift_in_place(p, t, shifts[j].exponent());
        if (!red) t = project_H(p, t);
        for (size_t s = 0; s < acc.w.size(); ++s) acc.w[s] ^= t.w[s];
    }
    return acc;
}

CodedPacket encode_coded_conv(const SchemeConfig& cfg, const FieldCtx& f,
                              std::span<const Packet> originals, SplitMix64& rng) {
    if (cfg.kind != SchemeKind::ConvGF) throw InvalidArgs("encode_coded_conv: wrong scheme kind");
    CodedPacket pkt;
    pkt.gamma = draw_conv_header(cfg, rng);
    pkt.payload = combine_conv(cfg, f, pkt.gamma, originals);
    pkt.has_payload = true;
    return pkt;
}

CodedPacket encode_coded_circ(const SchemeConfig& cfg, const ShiftParams& p,
                              std::span<const Packet> originals, SplitMix64& rng) {
    if (cfg.kind != SchemeKind::Circ && cfg.kind != SchemeKind::CircRed)
        throw InvalidArgs("encode_coded_circ: wrong scheme kind");
    CodedPacket pkt;
    pkt.shifts = draw_circ_header(cfg, rng);
    pkt.payload = combine_circ(cfg, p, pkt.shifts, originals);
    pkt.has_payload = true;
    return pkt;
}

// ---- mixed-radix header packing ----

namespace {

// minimal little-endian bignum, just enough for base-(L+2) packing
struct BigNum {
    std::vector<uint64_t> limb;  // little-endian

    bool is_zero() const { return limb.empty(); }

    void mul_add_small(uint64_t m, uint64_t add) {
        unsigned __int128 carry = add;
        for (auto& l : limb) {
            unsigned __int128 v = static_cast<unsigned __int128>(l) * m + carry;
            l = static_cast<uint64_t>(v);
            carry = v >> 64;
        }
        while (carry) {
            limb.push_back(static_cast<uint64_t>(carry));
            carry >>= 64;
        }
    }

    uint64_t divmod_small(uint64_t d) {
        unsigned __int128 rem = 0;
        for (size_t i = limb.size(); i-- > 0;) {
            unsigned __int128 cur = (rem << 64) | limb[i];
            limb[i] = static_cast<uint64_t>(cur / d);
            rem = cur % d;
        }
        while (!limb.empty() && limb.back() == 0) limb.pop_back();
        return static_cast<uint64_t>(rem);
    }

    size_t bit_length() const {
        if (limb.empty()) return 0;
        size_t top = limb.size() - 1;
        size_t b = 64;
        uint64_t v = limb[top];
        while (b > 0 && !(v >> (b - 1))) --b;
        return top * 64 + b;
    }

    bool get_bit(size_t i) const {
        size_t k = i / 64;
        if (k >= limb.size()) return false;
        return (limb[k] >> (i % 64)) & 1u;
    }

    void set_bit(size_t i) {
        size_t k = i / 64;
        if (k >= limb.size()) limb.resize(k + 1, 0);
        limb[k] |= uint64_t{1} << (i % 64);
    }

    // three-way compare against (base)^P
    int compare_pow(uint64_t base, int P) const {
        BigNum pw;
        pw.limb = {1};
        for (int i = 0; i < P; ++i) pw.mul_add_small(base, 0);
        if (limb.size() != pw.limb.size()) return limb.size() < pw.limb.size() ? -1 : 1;
        for (size_t i = limb.size(); i-- > 0;)
            if (limb[i] != pw.limb[i]) return limb[i] < pw.limb[i] ? -1 : 1;
        return 0;
    }
};

}  // namespace

size_t circ_header_bits(int P, int L) {
    // width of the largest codeword (L+2)^P - 1, i.e. ceil(P * log2(L+2))
    BigNum maxv;
    maxv.limb = {1};
    for (int i = 0; i < P; ++i) maxv.mul_add_small(static_cast<uint64_t>(L + 2), 0);
    size_t k = 0;
    while (k < maxv.limb.size() && maxv.limb[k] == 0) {
        maxv.limb[k] = ~uint64_t{0};
        ++k;
    }
    maxv.limb[k] -= 1;
    while (!maxv.limb.empty() && maxv.limb.back() == 0) maxv.limb.pop_back();
    return maxv.bit_length();
}

std::vector<uint8_t> header_pack(const SchemeConfig& cfg, std::span<const Coeff> coeffs) {
    if (static_cast<int>(coeffs.size()) != cfg.P)
        throw MalformedHeader("header_pack: expected P coefficients");
    uint64_t base = static_cast<uint64_t>(cfg.L + 2);
    BigNum v;
    for (size_t j = coeffs.size(); j-- > 0;) {
        uint64_t digit = static_cast<uint64_t>(coeffs[j].v);
        if (digit >= base) throw MalformedHeader("header_pack: shift exponent out of range");
        v.mul_add_small(base, digit);
    }
    size_t bits = circ_header_bits(cfg.P, cfg.L);
    std::vector<uint8_t> out((bits + 7) / 8, 0);
    for (size_t i = 0; i < bits; ++i)
        if (v.get_bit(i)) out[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    return out;
}

std::vector<Coeff> header_unpack(const SchemeConfig& cfg, std::span<const uint8_t> bytes) {
    size_t bits = circ_header_bits(cfg.P, cfg.L);
    if (bytes.size() != (bits + 7) / 8) throw MalformedHeader("header_unpack: wrong byte count");
    BigNum v;
    for (size_t i = 0; i < bits; ++i)
        if ((bytes[i / 8] >> (i % 8)) & 1u) v.set_bit(i);
    // trailing pad bits must be zero
    for (size_t i = bits; i < bytes.size() * 8; ++i)
        if ((bytes[i / 8] >> (i % 8)) & 1u) throw MalformedHeader("header_unpack: nonzero pad bits");
    uint64_t base = static_cast<uint64_t>(cfg.L + 2);
    if (v.compare_pow(base, cfg.P) >= 0)
        throw MalformedHeader("header_unpack: codeword exceeds digit range");
    std::vector<Coeff> out(static_cast<size_t>(cfg.P));
    for (int j = 0; j < cfg.P; ++j) {
        uint64_t d = v.divmod_small(base);
        out[static_cast<size_t>(j)] = d == 0 ? Coeff::zero() : Coeff::shift(static_cast<int>(d));
    }
    return out;
}

// ---- fixture wire image ----

namespace {

struct BitWriter {
    std::vector<uint8_t> bytes;
    size_t pos = 0;
    void put(uint32_t v, int n) {
        for (int i = 0; i < n; ++i, ++pos) {
            if (pos / 8 >= bytes.size()) bytes.push_back(0);
            if ((v >> i) & 1u) bytes[pos / 8] |= static_cast<uint8_t>(1u << (pos % 8));
        }
    }
};

struct BitReader {
    std::span<const uint8_t> bytes;
    size_t pos = 0;
    uint32_t get(int n) {
        uint32_t v = 0;
        for (int i = 0; i < n; ++i, ++pos) {
            if (pos / 8 >= bytes.size()) throw MalformedHeader("wire: truncated stream");
            v |= static_cast<uint32_t>((bytes[pos / 8] >> (pos % 8)) & 1u) << i;
        }
        return v;
    }
};

}  // namespace

std::vector<uint8_t> packet_to_wire(const SchemeConfig& cfg, const CodedPacket& pkt) {
    std::vector<uint8_t> out;
    auto put_u16 = [&out](uint16_t v) {
        out.push_back(static_cast<uint8_t>(v & 0xff));
        out.push_back(static_cast<uint8_t>(v >> 8));
    };
    put_u16(static_cast<uint16_t>(cfg.kind));
    put_u16(static_cast<uint16_t>(cfg.P));
    put_u16(static_cast<uint16_t>(cfg.L));

    BitWriter w;
    if (cfg.kind == SchemeKind::ConvGF) {
        if (static_cast<int>(pkt.gamma.size()) != cfg.P)
            throw MalformedHeader("wire: conventional header must have P coefficients");
        for (uint32_t g : pkt.gamma) w.put(g, cfg.L);
    } else if (cfg.kind == SchemeKind::Circ || cfg.kind == SchemeKind::CircRed) {
        auto packed = header_pack(cfg, pkt.shifts);
        out.insert(out.end(), packed.begin(), packed.end());
    } else {
        throw InvalidArgs("wire: perfect scheme packets are abstract");
    }
    if (cfg.kind == SchemeKind::ConvGF) out.insert(out.end(), w.bytes.begin(), w.bytes.end());

    BitWriter pw;
    for (uint32_t s : pkt.payload.w) pw.put(s, pkt.payload.symbol_bits);
    out.insert(out.end(), pw.bytes.begin(), pw.bytes.end());
    return out;
}

CodedPacket packet_from_wire(const SchemeConfig& cfg, std::span<const uint8_t> bytes) {
    if (bytes.size() < 6) throw MalformedHeader("wire: truncated preamble");
    auto get_u16 = [&bytes](size_t at) {
        return static_cast<uint16_t>(bytes[at] | (static_cast<uint16_t>(bytes[at + 1]) << 8));
    };
    if (get_u16(0) != static_cast<uint16_t>(cfg.kind) || get_u16(2) != cfg.P || get_u16(4) != cfg.L)
        throw MalformedHeader("wire: preamble does not match expected configuration");

    CodedPacket pkt;
    size_t off = 6;
    if (cfg.kind == SchemeKind::ConvGF) {
        size_t hbits = static_cast<size_t>(cfg.P) * cfg.L;
        size_t hbytes = (hbits + 7) / 8;
        BitReader r{bytes.subspan(off, hbytes)};
        pkt.gamma.resize(static_cast<size_t>(cfg.P));
        for (auto& g : pkt.gamma) g = r.get(cfg.L);
        off += hbytes;
    } else {
        size_t hbytes = (circ_header_bits(cfg.P, cfg.L) + 7) / 8;
        pkt.shifts = header_unpack(cfg, bytes.subspan(off, hbytes));
        off += hbytes;
    }

    int sym_bits = cfg.kind == SchemeKind::CircRed ? cfg.L + 1 : cfg.L;
    int nsym = cfg.symbols();
    size_t pbytes = (static_cast<size_t>(nsym) * sym_bits + 7) / 8;
    if (bytes.size() != off + pbytes) throw MalformedHeader("wire: payload length mismatch");
    BitReader r{bytes.subspan(off, pbytes)};
    pkt.payload = Packet(sym_bits, nsym);
    for (auto& s : pkt.payload.w) s = r.get(sym_bits);
    pkt.has_payload = true;
    return pkt;
}

}  // namespace rlnc
