#ifndef RLNC_SCHEMES_HPP
#define RLNC_SCHEMES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rlnc/bits.hpp"
#include "rlnc/circring.hpp"
#include "rlnc/gf2e.hpp"
#include "rlnc/rng.hpp"

namespace rlnc {

enum class SchemeKind : uint16_t { ConvGF = 0, Perfect = 1, Circ = 2, CircRed = 3 };

std::string scheme_name(SchemeKind k);

/// Exact rational, used for the zero-coefficient probability so sampling can
/// be done with integer draws only.
struct Rational {
    uint32_t num = 0, den = 1;
    double value() const { return static_cast<double>(num) / den; }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

struct SchemeConfig {
    SchemeKind kind = SchemeKind::ConvGF;
    int L = 1;
    int P = 1;
    int M = 0;                    // payload bits; must be a multiple of L
    Rational p0{0, 1};            // Circ / CircRed only
    bool forced_nonzero = false;  // test mode: ConvGF coefficients drawn from GF(q)\{0}

    void validate() const;
    int symbols() const { return M / L; }
    double q() const { return static_cast<double>(uint64_t{1} << L); }
};

/// One transmitted packet: the coding coefficients plus (optionally) the
/// payload. Systematic packets carry a unit coding vector and remember their
/// original index.
struct CodedPacket {
    bool systematic = false;
    int sys_index = -1;
    std::vector<uint32_t> gamma;  // ConvGF coefficients, length P
    std::vector<Coeff> shifts;    // Circ / CircRed coefficients, length P
    Packet payload;
    bool has_payload = false;
};

/// Exact sampling of one circular-shift coefficient: zero with probability
/// p0 = a/b, otherwise uniform over the L+1 shifts. Realized as one integer
/// draw over a multiset of size b(L+1) with a(L+1) zeros and b-a copies of
/// each shift, so the probabilities are exact rationals.
Coeff draw_p0_coeff(Rational p0, int L, SplitMix64& rng);

void validate_p0(Rational p0, int L);

std::vector<Coeff> draw_circ_header(const SchemeConfig& cfg, SplitMix64& rng);
std::vector<uint32_t> draw_conv_header(const SchemeConfig& cfg, SplitMix64& rng);

/// The P systematic packets (verbatim payloads, unit headers). For CircRed
/// the payloads go out parity-extended, matching its (L+1)-bit symbols.
std::vector<CodedPacket> encode_systematic(const SchemeConfig& cfg,
                                           std::span<const Packet> originals);

CodedPacket encode_coded_conv(const SchemeConfig& cfg, const FieldCtx& f,
                              std::span<const Packet> originals, SplitMix64& rng);

CodedPacket encode_coded_circ(const SchemeConfig& cfg, const ShiftParams& p,
                              std::span<const Packet> originals, SplitMix64& rng);

/// Payload recomputation from a header (shared by encoders and the
/// self-description tests).
Packet combine_conv(const SchemeConfig& cfg, const FieldCtx& f, std::span<const uint32_t> gamma,
                    std::span<const Packet> originals);
Packet combine_circ(const SchemeConfig& cfg, const ShiftParams& p, std::span<const Coeff> shifts,
                    std::span<const Packet> originals);

/// Number of header bits for a circular-shift coding vector:
/// ceil(P * log2(L+2)), realized by base-(L+2) mixed-radix packing with
/// coefficient j as digit j (least significant first, zero = digit 0).
size_t circ_header_bits(int P, int L);

std::vector<uint8_t> header_pack(const SchemeConfig& cfg, std::span<const Coeff> coeffs);
std::vector<Coeff> header_unpack(const SchemeConfig& cfg, std::span<const uint8_t> bytes);

/// Fixture wire image: [u16 kind][u16 P][u16 L][packed header][payload bits],
/// little-endian, bits packed LSB-first. The payload length M travels out of
/// band (fixtures carry it in their manifest).
std::vector<uint8_t> packet_to_wire(const SchemeConfig& cfg, const CodedPacket& pkt);
CodedPacket packet_from_wire(const SchemeConfig& cfg, std::span<const uint8_t> bytes);

}  // namespace rlnc

#endif
