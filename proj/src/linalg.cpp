#include "rlnc/linalg.hpp"

#include <bit>

namespace rlnc {

namespace {

int lowest_set_bit(const std::vector<uint64_t>& v) {
    for (size_t k = 0; k < v.size(); ++k)
        if (v[k]) return static_cast<int>(k * 64 + std::countr_zero(v[k]));
    return -1;
}

bool get_bit(const std::vector<uint64_t>& v, int i) { return (v[i / 64] >> (i % 64)) & 1u; }

void xor_vec(std::vector<uint64_t>& dst, const std::vector<uint64_t>& src) {
    for (size_t k = 0; k < dst.size(); ++k) dst[k] ^= src[k];
}

}  // namespace

Gf2RankTracker::Gf2RankTracker(int ambient_dim) : n_(ambient_dim) {}

bool Gf2RankTracker::absorb_one(std::vector<uint64_t> v) {
    if (static_cast<int>(v.size()) != (n_ + 63) / 64)
        throw DimensionMismatch("rank tracker: vector has wrong ambient dimension");
    for (size_t i = 0; i < rows_.size(); ++i)
        if (get_bit(v, pivots_[i])) xor_vec(v, rows_[i]);
    int piv = lowest_set_bit(v);
    if (piv < 0) return false;
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
}

int Gf2RankTracker::absorb_column(std::span<const std::vector<uint64_t>> cols) {
    int delta = 0;
    for (const auto& c : cols) delta += absorb_one(c) ? 1 : 0;
    return delta;
}

bool GfqRankTracker::absorb(std::vector<uint32_t> v) {
    if (static_cast<int>(v.size()) != n_)
        throw DimensionMismatch("rank tracker: vector has wrong length");
    for (size_t i = 0; i < rows_.size(); ++i) {
        uint32_t c = v[pivots_[i]];
        if (c) {
            // rows are pivot-normalized, so one scaled subtraction clears it
            for (int k = 0; k < n_; ++k) v[k] ^= f_->mul(c, rows_[i][k]);
        }
    }
    int piv = -1;
    for (int k = 0; k < n_; ++k)
        if (v[k]) {
            piv = k;
            break;
        }
    if (piv < 0) return false;
    uint32_t inv = f_->inv(v[piv]);
    for (int k = 0; k < n_; ++k) v[k] = f_->mul(inv, v[k]);
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
}

std::vector<uint32_t> coeff_to_field_column(const ShiftParams& p, const FieldCtx& f,
                                            std::span<const Coeff> header) {
    uint32_t beta = f.element_of_order(static_cast<uint32_t>(p.n()));
    std::vector<uint32_t> out(header.size(), 0);
    for (size_t i = 0; i < header.size(); ++i)
        if (!header[i].is_zero()) out[i] = f.pow(beta, static_cast<uint64_t>(header[i].exponent()));
    return out;
}

bool coeff_full_rank(const ShiftParams& p, const FieldCtx& f,
                     std::span<const std::vector<Coeff>> headers) {
    if (headers.empty()) return true;
    int P = static_cast<int>(headers.front().size());
    GfqRankTracker t(f, P);
    int rank = 0;
    for (const auto& h : headers) {
        if (static_cast<int>(h.size()) != P)
            throw DimensionMismatch("coeff_full_rank: headers of unequal length");
        if (t.absorb(coeff_to_field_column(p, f, h))) ++rank;
    }
    return rank == static_cast<int>(headers.size());
}

BitMatrix expand_coding_vectors(const ShiftParams& p, int P,
                                std::span<const std::vector<Coeff>> headers) {
    const size_t L = static_cast<size_t>(p.L);
    BitMatrix out(static_cast<size_t>(P) * L, headers.size() * L);
    for (size_t j = 0; j < headers.size(); ++j) {
        for (int jp = 0; jp < P; ++jp) {
            Coeff c = headers[j][static_cast<size_t>(jp)];
            if (c.is_zero()) continue;
            out.place(static_cast<size_t>(jp) * L, j * L,
                      dense_conj(p, coeff_to_ring(p, c)));
        }
    }
    return out;
}

std::vector<Packet> solve_dense_gf(const FieldCtx& f, std::vector<std::vector<uint32_t>> a,
                                   std::vector<Packet> rhs) {
    const size_t n = a.size();
    if (rhs.size() != n) throw ShapeMismatch("solve_dense_gf: rhs count differs from rows");
    for (auto& row : a)
        if (row.size() != n) throw ShapeMismatch("solve_dense_gf: matrix not square");

    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) throw SingularMatrix("solve_dense_gf: singular matrix");
        std::swap(a[piv], a[c]);
        std::swap(rhs[piv], rhs[c]);
        uint32_t inv = f.inv(a[c][c]);
        if (inv != 1) {
            for (size_t k = 0; k < n; ++k) a[c][k] = f.mul(inv, a[c][k]);
            for (auto& s : rhs[c].w) s = f.mul(inv, s);
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            uint32_t m = a[r][c];
            if (m == 0) continue;
            for (size_t k = 0; k < n; ++k) a[r][k] ^= f.mul(m, a[c][k]);
            for (size_t s = 0; s < rhs[r].w.size(); ++s) rhs[r].w[s] ^= f.mul(m, rhs[c].w[s]);
        }
    }
    return rhs;
}

}  // namespace rlnc
