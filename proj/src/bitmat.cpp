#include "rlnc/bitmat.hpp"

namespace rlnc {

BitMatrix BitMatrix::identity(size_t n) {
    BitMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionMismatch("BitMatrix multiply: inner dimensions differ");
    BitMatrix out(rows_, rhs.cols_);
    for (size_t i = 0; i < rows_; ++i) {
        for (size_t k = 0; k < cols_; ++k) {
            if (get(i, k)) {
                for (size_t w = 0; w < rhs.wpr_; ++w)
                    out.w_[i * out.wpr_ + w] ^= rhs.w_[k * rhs.wpr_ + w];
            }
        }
    }
    return out;
}

bool BitMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            if (get(i, j) != (i == j)) return false;
    return true;
}

size_t BitMatrix::rank() const {
    BitMatrix m = *this;
    size_t rank = 0;
    for (size_t c = 0; c < m.cols_ && rank < m.rows_; ++c) {
        size_t pivot = rank;
        while (pivot < m.rows_ && !m.get(pivot, c)) ++pivot;
        if (pivot == m.rows_) continue;
        if (pivot != rank)
            for (size_t k = 0; k < m.wpr_; ++k)
                std::swap(m.w_[pivot * m.wpr_ + k], m.w_[rank * m.wpr_ + k]);
        for (size_t r = 0; r < m.rows_; ++r)
            if (r != rank && m.get(r, c)) m.xor_row(r, rank);
        ++rank;
    }
    return rank;
}

BitMatrix BitMatrix::inverse() const {
    if (rows_ != cols_) throw DimensionMismatch("BitMatrix inverse: not square");
    BitMatrix m = *this;
    BitMatrix inv = identity(rows_);
    for (size_t c = 0; c < cols_; ++c) {
        size_t pivot = c;
        while (pivot < rows_ && !m.get(pivot, c)) ++pivot;
        if (pivot == rows_) throw SingularMatrix("BitMatrix inverse: singular");
        if (pivot != c) {
            for (size_t k = 0; k < wpr_; ++k) std::swap(m.w_[pivot * wpr_ + k], m.w_[c * wpr_ + k]);
            for (size_t k = 0; k < inv.wpr_; ++k)
                std::swap(inv.w_[pivot * inv.wpr_ + k], inv.w_[c * inv.wpr_ + k]);
        }
        for (size_t r = 0; r < rows_; ++r) {
            if (r != c && m.get(r, c)) {
                m.xor_row(r, c);
                inv.xor_row(r, c);
            }
        }
    }
    return inv;
}

void BitMatrix::place(size_t r0, size_t c0, const BitMatrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_)
        throw IndexOutOfRange("BitMatrix place: block exceeds bounds");
    for (size_t r = 0; r < block.rows_; ++r)
        for (size_t c = 0; c < block.cols_; ++c) set(r0 + r, c0 + c, block.get(r, c));
}

size_t rank_gf2(BitMatrix m) { return m.rank(); }

}  // namespace rlnc
