#include "rlnc/circring.hpp"

#include <bit>

namespace rlnc {

namespace {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int order_of_2_mod(int n) {
    int v = 2 % n, ord = 1;
    while (v != 1) {
        v = (v * 2) % n;
        ++ord;
        if (ord > n) return -1;
    }
    return ord;
}

RingElem rot(const ShiftParams& p, RingElem a, int l) {
    int n = p.n();
    l %= n;
    if (l == 0) return a;
    return ((a << l) | (a >> (n - l))) & p.full_mask();
}

}  // namespace

bool is_admissible_L(int L) {
    return L >= 2 && L % 2 == 0 && is_prime(L + 1) && order_of_2_mod(L + 1) == L;
}

std::vector<int> admissible_L_values(int count) {
    std::vector<int> out;
    for (int L = 2; static_cast<int>(out.size()) < count && L < 2000; L += 2)
        if (is_admissible_L(L)) out.push_back(L);
    return out;
}

ShiftParams ShiftParams::make(int L) {
    if (!is_admissible_L(L))
        throw InvalidArgs("circular-shift scheme: L must be even with L+1 prime and 2 a primitive root mod L+1");
    return ShiftParams{L};
}

RingElem ring_add(RingElem a, RingElem b) { return a ^ b; }

uint64_t& ring_mul_op_counter() {
    thread_local uint64_t ops = 0;
    return ops;
}

RingElem ring_mul(const ShiftParams& p, RingElem a, RingElem b) {
    RingElem acc = 0;
    RingElem rest = a;
    int terms = 0;
    while (rest) {
        int l = std::countr_zero(rest);
        rest &= rest - 1;
        acc ^= rot(p, b, l);
        ++terms;
    }
    if (terms) ring_mul_op_counter() += static_cast<uint64_t>(terms) * p.n();
    return acc;
}

RingElem ring_pow(const ShiftParams& p, RingElem a, uint64_t e) {
    RingElem acc = 1;  // identity mask {C^0}
    RingElem base = a;
    while (e) {
        if (e & 1) acc = ring_mul(p, acc, base);
        base = ring_mul(p, base, base);
        e >>= 1;
    }
    return acc;
}

int ring_weight(RingElem a) { return std::popcount(a); }

RingElem sigma(const ShiftParams& p, RingElem a) {
    if (2 * ring_weight(a) > p.L) return a ^ p.full_mask();
    return a;
}

RingElem coeff_to_ring(const ShiftParams& p, Coeff c) {
    if (c.is_zero()) return 0;
    int l = c.exponent() % p.n();
    return RingElem{1} << l;
}

namespace {

// det over cols `mask` using rows r..J-1 where r = J - popcount(mask);
// memoized over column subsets (cofactor expansion has no signs in char 2)
struct DetDP {
    const ShiftParams& p;
    const RingMatrix& m;
    std::vector<RingElem> memo;
    std::vector<uint8_t> done;

    DetDP(const ShiftParams& pp, const RingMatrix& mm)
        : p(pp), m(mm), memo(size_t{1} << mm.rows, 0), done(size_t{1} << mm.rows, 0) {}

    RingElem det(uint32_t mask) {
        if (mask == 0) return 1;
        if (done[mask]) return memo[mask];
        int r = m.rows - std::popcount(mask);
        RingElem acc = 0;
        uint32_t rest = mask;
        while (rest) {
            int c = std::countr_zero(rest);
            rest &= rest - 1;
            RingElem coeff = m.at(r, c);
            if (coeff == 0) continue;
            acc ^= ring_mul(p, coeff, det(mask & ~(uint32_t{1} << c)));
        }
        done[mask] = 1;
        memo[mask] = acc;
        return acc;
    }
};

}  // namespace

RingElem ring_det(const ShiftParams& p, const RingMatrix& m) {
    if (m.rows != m.cols) throw DimensionMismatch("ring_det: matrix not square");
    if (m.rows == 0) return 1;
    // contract is J <= 12; the DP tolerates a few more bits so that rare
    // large residual systems in low-rate sessions still decode
    if (m.rows > 20) throw DimensionMismatch("ring_det: block size above supported cap");
    DetDP dp(p, m);
    return dp.det((uint32_t{1} << m.rows) - 1);
}

RingElem ring_minor(const ShiftParams& p, const RingMatrix& m, int j, int jp) {
    if (m.rows != m.cols) throw DimensionMismatch("ring_minor: matrix not square");
    if (j < 0 || j >= m.cols || jp < 0 || jp >= m.rows)
        throw IndexOutOfRange("ring_minor: block index out of range");
    RingMatrix sub(m.rows - 1, m.cols - 1);
    int rr = 0;
    for (int r = 0; r < m.rows; ++r) {
        if (r == jp) continue;
        int cc = 0;
        for (int c = 0; c < m.cols; ++c) {
            if (c == j) continue;
            sub.at(rr, cc) = m.at(r, c);
            ++cc;
        }
        ++rr;
    }
    return ring_det(p, sub);
}

RingMatrix ring_block_inverse(const ShiftParams& p, const RingMatrix& m) {
    if (m.rows != m.cols) throw DimensionMismatch("ring_block_inverse: matrix not square");
    const int J = m.rows;
    RingElem lam = ring_det(p, m);
    RingElem lam_inv = ring_pow(p, lam, (uint64_t{1} << p.L) - 2);
    RingMatrix inv(J, J);
    for (int r = 0; r < J; ++r)
        for (int c = 0; c < J; ++c)
            inv.at(r, c) = sigma(p, ring_mul(p, lam_inv, ring_minor(p, m, c, r)));

    if (!(expand_system(p, m) * expand_blocks(p, inv)).is_identity())
        throw SingularMatrix("ring_block_inverse: input not full rank over GF(2)");
    return inv;
}

BitMatrix dense_G(const ShiftParams& p) {
    BitMatrix g(p.L, p.n());
    for (int i = 0; i < p.L; ++i) {
        g.set(i, i, true);
        g.set(i, p.L, true);
    }
    return g;
}

BitMatrix dense_H(const ShiftParams& p) {
    BitMatrix h(p.n(), p.L);
    for (int i = 0; i < p.L; ++i) h.set(i, i, true);
    return h;
}

BitMatrix dense_cyclic(const ShiftParams& p, int l) {
    int n = p.n();
    l %= n;
    if (l < 0) l += n;
    BitMatrix c(n, n);
    for (int i = 0; i < n; ++i) c.set(i, (i + l) % n, true);
    return c;
}

BitMatrix dense_ring(const ShiftParams& p, RingElem a) {
    int n = p.n();
    BitMatrix out(n, n);
    RingElem rest = a;
    while (rest) {
        int l = std::countr_zero(rest);
        rest &= rest - 1;
        for (int i = 0; i < n; ++i) {
            size_t c = static_cast<size_t>((i + l) % n);
            out.set(i, c, !out.get(i, c));
        }
    }
    return out;
}

BitMatrix dense_conj(const ShiftParams& p, RingElem a) {
    return dense_G(p) * dense_ring(p, a) * dense_H(p);
}

BitMatrix expand_system(const ShiftParams& p, const RingMatrix& m) {
    const size_t L = static_cast<size_t>(p.L);
    BitMatrix out(m.cols * L, m.rows * L);
    for (int k = 0; k < m.cols; ++k)
        for (int i = 0; i < m.rows; ++i)
            out.place(k * L, i * L, dense_conj(p, m.at(i, k)));
    return out;
}

BitMatrix expand_blocks(const ShiftParams& p, const RingMatrix& m) {
    const size_t L = static_cast<size_t>(p.L);
    BitMatrix out(m.rows * L, m.cols * L);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c)
            out.place(r * L, c * L, dense_conj(p, m.at(r, c)));
    return out;
}

}  // namespace rlnc
