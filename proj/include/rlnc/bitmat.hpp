#ifndef RLNC_BITMAT_HPP
#define RLNC_BITMAT_HPP

#include <cstdint>
#include <cstddef>
#include <vector>

#include "rlnc/errors.hpp"

namespace rlnc {

/// Dense matrix over GF(2), one row = packed 64-bit words. Small and plain;
/// used for rank tests and as the reference oracle for everything block
/// structured.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), w_(rows * wpr_, 0) {}

    static BitMatrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    bool get(size_t r, size_t c) const { return (w_[r * wpr_ + c / 64] >> (c % 64)) & 1u; }
    void set(size_t r, size_t c, bool v) {
        uint64_t m = 1ull << (c % 64);
        if (v)
            w_[r * wpr_ + c / 64] |= m;
        else
            w_[r * wpr_ + c / 64] &= ~m;
    }

    void xor_row(size_t dst, size_t src) {
        for (size_t k = 0; k < wpr_; ++k) w_[dst * wpr_ + k] ^= w_[src * wpr_ + k];
    }

    BitMatrix operator*(const BitMatrix& rhs) const;
    bool operator==(const BitMatrix& rhs) const = default;

    bool is_identity() const;
    size_t rank() const;                 // leaves *this untouched
    BitMatrix inverse() const;           // throws SingularMatrix

    /// Writes `block` into the submatrix at (r0, c0).
    void place(size_t r0, size_t c0, const BitMatrix& block);

  private:
    size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> w_;
};

size_t rank_gf2(BitMatrix m);  // convenience: rank of a copy

}  // namespace rlnc

#endif
