#ifndef RLNC_CIRCRING_HPP
#define RLNC_CIRCRING_HPP

#include <cstdint>
#include <vector>

#include "rlnc/bitmat.hpp"
#include "rlnc/errors.hpp"

namespace rlnc {

/// Element of the commutative ring of (L+1)x(L+1) binary circulants,
/// isomorphic to GF(2)[x]/(x^(L+1)+1). Bit l of the mask marks the cyclic
/// permutation with shift l; bit 0 is the identity.
using RingElem = uint64_t;

/// Parameters of a circular-shift coding instance. L must be even with L+1
/// prime and 2 a primitive root modulo L+1 (so that the degree-L cyclotomic
/// factor of x^(L+1)+1 stays irreducible over GF(2)).
struct ShiftParams {
    int L = 0;

    static ShiftParams make(int L);
    int n() const { return L + 1; }                      // circulant size
    RingElem full_mask() const { return ((RingElem{1} << (L + 1)) - 1); }
};

/// True for L in {2, 4, 10, 12, 18, 28, ...}.
bool is_admissible_L(int L);
std::vector<int> admissible_L_values(int count);

/// Coding coefficient: the zero matrix or one of the L+1 shift coefficients.
/// exponent() is in [1, L+1]; shift L+1 acts as the identity coefficient.
struct Coeff {
    uint8_t v = 0;  // 0 = zero, else shift exponent

    static Coeff zero() { return {0}; }
    static Coeff shift(int l) { return {static_cast<uint8_t>(l)}; }
    bool is_zero() const { return v == 0; }
    int exponent() const { return v; }
    bool operator==(const Coeff&) const = default;
};

RingElem ring_add(RingElem a, RingElem b);
RingElem ring_mul(const ShiftParams& p, RingElem a, RingElem b);
RingElem ring_pow(const ShiftParams& p, RingElem a, uint64_t e);

/// Thread-local tally of the bit operations spent inside ring_mul. Decoders
/// snapshot it around inverse computations to report (but not charge) that
/// cost.
uint64_t& ring_mul_op_counter();

/// Weight normalization: whenever more than L/2 shift terms are present,
/// complement the mask (adding the all-ones circulant, which vanishes under
/// the G/H conjugation). Output weight is always <= L/2 for inputs of weight
/// > L/2.
RingElem sigma(const ShiftParams& p, RingElem a);

RingElem coeff_to_ring(const ShiftParams& p, Coeff c);

int ring_weight(RingElem a);

/// Square matrix of ring elements. Row index = received-packet (equation)
/// index, column index = original-packet index, i.e. entry (j, j') is the
/// coefficient of original j' in equation j.
struct RingMatrix {
    int rows = 0, cols = 0;
    std::vector<RingElem> e;

    RingMatrix() = default;
    RingMatrix(int r, int c) : rows(r), cols(c), e(static_cast<size_t>(r) * c, 0) {}
    RingElem& at(int r, int c) { return e[static_cast<size_t>(r) * cols + c]; }
    RingElem at(int r, int c) const { return e[static_cast<size_t>(r) * cols + c]; }
};

/// Determinant over the circulant ring (not over GF(2) of the expanded
/// matrix). Subset-memoized cofactor expansion; supported block size is
/// J <= 12, hard error above 16.
RingElem ring_det(const ShiftParams& p, const RingMatrix& m);

/// Determinant of m with block row `jp` and block column `j` removed
/// (0-based).
RingElem ring_minor(const ShiftParams& p, const RingMatrix& m, int j, int jp);

/// Inverse of the full-rank binary matrix whose (j, j') block is
/// G * m(j,j') * H, returned as ring elements. Block (r, c) of the result is
/// sigma(det^(2^L-2) * minor(r, c)); the recovered original c is the sum over
/// received packets r of result(r, c) applied to packet r. The output is
/// verified by one binary multiply and SingularMatrix is thrown on mismatch.
RingMatrix ring_block_inverse(const ShiftParams& p, const RingMatrix& m);

// --- dense GF(2) expansions (oracle side) ---

BitMatrix dense_G(const ShiftParams& p);                   // L x (L+1), [I | 1]
BitMatrix dense_H(const ShiftParams& p);                   // (L+1) x L, [I | 0]^T
BitMatrix dense_cyclic(const ShiftParams& p, int l);       // (L+1) permutation, shift l
BitMatrix dense_ring(const ShiftParams& p, RingElem a);    // sum of cyclics
BitMatrix dense_conj(const ShiftParams& p, RingElem a);    // G * a * H, L x L

/// JL x JL system matrix of y = x * W: block (k, i) is G * m(i, k) * H
/// (k = original index, i = equation index).
BitMatrix expand_system(const ShiftParams& p, const RingMatrix& m);

/// Blockwise expansion in storage order: block (r, c) is G * m(r, c) * H.
BitMatrix expand_blocks(const ShiftParams& p, const RingMatrix& m);

}  // namespace rlnc

#endif
