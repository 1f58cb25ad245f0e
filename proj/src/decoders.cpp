#include "rlnc/decoders.hpp"

#include <algorithm>

namespace rlnc {

namespace {

void check_input(const DecodeInput& in) {
    if (in.caught.size() != in.caught_payloads.size())
        throw ShapeMismatch("decode: caught index/payload count mismatch");
    if (static_cast<int>(in.caught.size() + in.coded.size()) != in.cfg.P)
        throw ShapeMismatch("decode: packet count does not cover P originals");
    if (!std::is_sorted(in.caught.begin(), in.caught.end()))
        throw ShapeMismatch("decode: caught indices must be sorted");
}

// scale-and-subtract over GF(2^L): dst -= c * src, counting 2L^2 per symbol
// for the multiply (skipped when c is 0 or 1) and L per symbol for the add
void subtract_scaled(const FieldCtx& f, Packet& dst, uint32_t c, const Packet& src,
                     OpCounter& ctr) {
    if (c == 0) return;
    if (c == 1) {
        xor_into(dst, src, ctr);
        return;
    }
    const int L = f.L();
    for (size_t s = 0; s < dst.w.size(); ++s) dst.w[s] ^= f.mul(c, src.w[s]);
    ctr.add(static_cast<uint64_t>(dst.w.size()) * (2 * L * L + L));
}

void scale_in_place(const FieldCtx& f, Packet& pkt, uint32_t c, OpCounter& ctr) {
    if (c == 1) return;
    const int L = f.L();
    for (auto& s : pkt.w) s = f.mul(c, s);
    ctr.add(static_cast<uint64_t>(pkt.w.size()) * (2 * L * L));
}

// dense inverse over GF(2^L) with a tally of the scalar operations
// (mul/inv = 2L^2, add = L) spent on it
std::vector<std::vector<uint32_t>> invert_dense_gf(const FieldCtx& f,
                                                   std::vector<std::vector<uint32_t>> a,
                                                   uint64_t& diag_ops) {
    const size_t n = a.size();
    const uint64_t mul_cost = 2ull * f.L() * f.L();
    const uint64_t add_cost = static_cast<uint64_t>(f.L());
    std::vector<std::vector<uint32_t>> inv(n, std::vector<uint32_t>(n, 0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) throw SingularMatrix("decode: residual matrix singular");
        std::swap(a[piv], a[c]);
        std::swap(inv[piv], inv[c]);
        uint32_t d = f.inv(a[c][c]);
        diag_ops += mul_cost;
        if (d != 1) {
            for (size_t k = 0; k < n; ++k) {
                a[c][k] = f.mul(d, a[c][k]);
                inv[c][k] = f.mul(d, inv[c][k]);
                diag_ops += 2 * mul_cost;
            }
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            uint32_t m = a[r][c];
            for (size_t k = 0; k < n; ++k) {
                a[r][k] ^= f.mul(m, a[c][k]);
                inv[r][k] ^= f.mul(m, inv[c][k]);
                diag_ops += 2 * (mul_cost + add_cost);
            }
        }
    }
    return inv;
}

}  // namespace

std::optional<std::pair<int, int>> singleton_scan(
    const std::vector<int>& A, const std::vector<int>& Ap,
    const std::function<bool(int, int)>& nonzero) {
    for (int r : A) {
        int hits = 0, col = -1;
        for (int c : Ap) {
            if (nonzero(r, c)) {
                ++hits;
                col = c;
                if (hits > 1) break;
            }
        }
        if (hits == 1) return std::make_pair(r, col);
    }
    return std::nullopt;
}

int residual_after_singletons(int P, const std::vector<int>& caught,
                              const std::function<bool(int, int)>& coded_nonzero, int num_coded) {
    std::vector<int> A(static_cast<size_t>(num_coded));
    for (int i = 0; i < num_coded; ++i) A[static_cast<size_t>(i)] = i;
    std::vector<int> Ap;
    std::vector<char> have(static_cast<size_t>(P), 0);
    for (int c : caught) have[static_cast<size_t>(c)] = 1;
    for (int j = 0; j < P; ++j)
        if (!have[static_cast<size_t>(j)]) Ap.push_back(j);

    for (;;) {
        auto hit = singleton_scan(A, Ap, coded_nonzero);
        if (!hit) break;
        std::erase(A, hit->first);
        std::erase(Ap, hit->second);
    }
    return static_cast<int>(A.size());
}

std::vector<Packet> decode_conv(const FieldCtx& f, const DecodeInput& in, DecodeStats& st) {
    if (in.cfg.kind != SchemeKind::ConvGF) throw InvalidArgs("decode_conv: wrong scheme kind");
    check_input(in);
    const int P = in.cfg.P;

    std::vector<Packet> out(static_cast<size_t>(P));
    std::vector<char> have(static_cast<size_t>(P), 0);
    for (size_t i = 0; i < in.caught.size(); ++i) {
        out[static_cast<size_t>(in.caught[i])] = in.caught_payloads[i];
        have[static_cast<size_t>(in.caught[i])] = 1;
    }

    std::vector<std::vector<uint32_t>> g;
    std::vector<Packet> y;
    for (const auto& pkt : in.coded) {
        g.push_back(pkt.gamma);
        y.push_back(pkt.payload);
    }

    // phase I: strip the caught originals out of every coded packet
    OpCounter c1;
    for (size_t r = 0; r < y.size(); ++r) {
        for (int j : in.caught) {
            subtract_scaled(f, y[r], g[r][static_cast<size_t>(j)], out[static_cast<size_t>(j)], c1);
            g[r][static_cast<size_t>(j)] = 0;
        }
    }
    st.phase1_ops = c1.binary_ops;
    st.counted.add(c1.binary_ops);

    std::vector<int> A, Ap;
    for (int r = 0; r < static_cast<int>(y.size()); ++r) A.push_back(r);
    for (int j = 0; j < P; ++j)
        if (!have[static_cast<size_t>(j)]) Ap.push_back(j);

    auto nonzero = [&g](int r, int c) { return g[static_cast<size_t>(r)][static_cast<size_t>(c)] != 0; };

    // phase II step 1: peel rows that reference a single remaining original
    OpCounter cs1;
    for (;;) {
        auto hit = singleton_scan(A, Ap, nonzero);
        if (!hit) break;
        auto [r, jp] = *hit;
        std::erase(A, r);
        std::erase(Ap, jp);
        uint32_t gamma = g[static_cast<size_t>(r)][static_cast<size_t>(jp)];
        scale_in_place(f, y[static_cast<size_t>(r)], f.inv(gamma), cs1);
        out[static_cast<size_t>(jp)] = std::move(y[static_cast<size_t>(r)]);
        have[static_cast<size_t>(jp)] = 1;
        g[static_cast<size_t>(r)][static_cast<size_t>(jp)] = 0;
        for (int r2 : A) {
            subtract_scaled(f, y[static_cast<size_t>(r2)],
                            g[static_cast<size_t>(r2)][static_cast<size_t>(jp)],
                            out[static_cast<size_t>(jp)], cs1);
            g[static_cast<size_t>(r2)][static_cast<size_t>(jp)] = 0;
        }
    }
    st.step1_ops = cs1.binary_ops;
    st.counted.add(cs1.binary_ops);

    st.residual_A = static_cast<int>(A.size());
    if (!A.empty()) {
        // phase II step 2: invert the residual square system and apply it
        const size_t n = A.size();
        std::vector<std::vector<uint32_t>> sub(n, std::vector<uint32_t>(n, 0));
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k)
                sub[i][k] = g[static_cast<size_t>(A[i])][static_cast<size_t>(Ap[k])];
        auto dinv = invert_dense_gf(f, std::move(sub), st.inverse_diag_ops);

        OpCounter cs2;
        for (size_t k = 0; k < n; ++k) {
            Packet acc;
            bool first = true;
            for (size_t i = 0; i < n; ++i) {
                uint32_t beta = dinv[k][i];
                if (beta == 0) continue;
                if (first) {
                    acc = y[static_cast<size_t>(A[i])];
                    scale_in_place(f, acc, beta, cs2);
                    first = false;
                } else {
                    subtract_scaled(f, acc, beta, y[static_cast<size_t>(A[i])], cs2);
                }
            }
            if (first) throw SingularMatrix("decode: inverse produced an all-zero row");
            out[static_cast<size_t>(Ap[k])] = std::move(acc);
            have[static_cast<size_t>(Ap[k])] = 1;
        }
        st.step2_apply_ops = cs2.binary_ops;
        st.counted.add(cs2.binary_ops);
    }
    return out;
}

namespace {

std::vector<Packet> decode_circ_impl(const ShiftParams& p, const DecodeInput& in, DecodeStats& st,
                                     bool expand_first) {
    check_input(in);
    const int P = in.cfg.P;
    const int n = p.n();

    // phase I part one: bring every packet into the (L+1)-bit symbol state
    OpCounter cexp;
    std::vector<Packet> erec(static_cast<size_t>(P));  // expanded originals, as recovered
    std::vector<char> have(static_cast<size_t>(P), 0);
    for (size_t i = 0; i < in.caught.size(); ++i) {
        const Packet& pay = in.caught_payloads[i];
        erec[static_cast<size_t>(in.caught[i])] = expand_first ? expand_G(p, pay, cexp) : pay;
        have[static_cast<size_t>(in.caught[i])] = 1;
    }
    std::vector<std::vector<Coeff>> g;
    std::vector<Packet> y;
    for (const auto& pkt : in.coded) {
        g.push_back(pkt.shifts);
        y.push_back(expand_first ? expand_G(p, pkt.payload, cexp) : pkt.payload);
    }
    st.expand_ops = cexp.binary_ops;
    st.counted.add(cexp.binary_ops);

    // phase I part two: rotations of caught originals XORed out of coded rows
    OpCounter c1;
    for (size_t r = 0; r < y.size(); ++r) {
        for (int j : in.caught) {
            Coeff c = g[r][static_cast<size_t>(j)];
            if (c.is_zero()) continue;
            Packet t = apply_shift(p, erec[static_cast<size_t>(j)], c.exponent());
            xor_into(y[r], t, c1);
            g[r][static_cast<size_t>(j)] = Coeff::zero();
        }
    }
    st.phase1_ops = c1.binary_ops;
    st.counted.add(c1.binary_ops);

    std::vector<int> A, Ap;
    for (int r = 0; r < static_cast<int>(y.size()); ++r) A.push_back(r);
    for (int j = 0; j < P; ++j)
        if (!have[static_cast<size_t>(j)]) Ap.push_back(j);

    auto nonzero = [&g](int r, int c) {
        return !g[static_cast<size_t>(r)][static_cast<size_t>(c)].is_zero();
    };

    // step 1: singleton rows resolve with one inverse rotation each
    OpCounter cs1;
    for (;;) {
        auto hit = singleton_scan(A, Ap, nonzero);
        if (!hit) break;
        auto [r, jp] = *hit;
        std::erase(A, r);
        std::erase(Ap, jp);
        int l = g[static_cast<size_t>(r)][static_cast<size_t>(jp)].exponent();
        shift_in_place(p, y[static_cast<size_t>(r)], (n - l % n) % n);
        erec[static_cast<size_t>(jp)] = std::move(y[static_cast<size_t>(r)]);
        have[static_cast<size_t>(jp)] = 1;
        g[static_cast<size_t>(r)][static_cast<size_t>(jp)] = Coeff::zero();
        for (int r2 : A) {
            Coeff c = g[static_cast<size_t>(r2)][static_cast<size_t>(jp)];
            if (c.is_zero()) continue;
            Packet t = apply_shift(p, erec[static_cast<size_t>(jp)], c.exponent());
            xor_into(y[static_cast<size_t>(r2)], t, cs1);
            g[static_cast<size_t>(r2)][static_cast<size_t>(jp)] = Coeff::zero();
        }
    }
    st.step1_ops = cs1.binary_ops;
    st.counted.add(cs1.binary_ops);

    st.residual_A = static_cast<int>(A.size());
    if (!A.empty()) {
        // step 2: normalize one pivot row, eliminate its column from the
        // remaining rows, then invert the rest over the circulant ring
        const int r1 = A.front();
        int jp1 = -1;
        for (int c : Ap)
            if (nonzero(r1, c)) {
                jp1 = c;
                break;
            }
        if (jp1 < 0) throw SingularMatrix("decode: zero residual row");
        const int l1 = g[static_cast<size_t>(r1)][static_cast<size_t>(jp1)].exponent();
        const int l1inv = (n - l1 % n) % n;
        shift_in_place(p, y[static_cast<size_t>(r1)], l1inv);

        // pivot-row coefficients after normalization, kept for back-substitution
        std::vector<int> pivot_shift(static_cast<size_t>(P), -1);  // -1 = zero
        for (int c : Ap)
            if (c != jp1 && nonzero(r1, c))
                pivot_shift[static_cast<size_t>(c)] =
                    (g[static_cast<size_t>(r1)][static_cast<size_t>(c)].exponent() + l1inv) % n;

        std::erase(A, r1);
        std::erase(Ap, jp1);

        OpCounter cpv;
        for (int r : A) {
            Coeff c = g[static_cast<size_t>(r)][static_cast<size_t>(jp1)];
            if (c.is_zero()) continue;
            Packet t = apply_shift(p, y[static_cast<size_t>(r1)], c.exponent());
            xor_into(y[static_cast<size_t>(r)], t, cpv);
        }
        st.step2_pivot_ops = cpv.binary_ops;
        st.counted.add(cpv.binary_ops);

        // residual coefficients become ring elements:
        // psi = C_{r,c} + C_{r,jp1} * C_{r1,c} * C_{r1,jp1}^{-1}
        const size_t m = A.size();
        RingMatrix psi(static_cast<int>(m), static_cast<int>(m));
        for (size_t i = 0; i < m; ++i) {
            for (size_t k = 0; k < m; ++k) {
                int r = A[i], c = Ap[k];
                RingElem v = coeff_to_ring(p, g[static_cast<size_t>(r)][static_cast<size_t>(c)]);
                Coeff piv = g[static_cast<size_t>(r)][static_cast<size_t>(jp1)];
                if (!piv.is_zero() && pivot_shift[static_cast<size_t>(c)] >= 0) {
                    int e = (piv.exponent() + pivot_shift[static_cast<size_t>(c)]) % n;
                    v ^= RingElem{1} << e;
                }
                psi.at(static_cast<int>(i), static_cast<int>(k)) = v;
            }
        }

        uint64_t ring_ops_before = ring_mul_op_counter();
        RingMatrix phi = ring_block_inverse(p, psi);
        st.inverse_diag_ops += ring_mul_op_counter() - ring_ops_before;

        // apply the inverse: original Ap[k] = sum_i phi(i, k) applied to row A[i]
        OpCounter cap;
        std::vector<Packet> mtil(m);
        for (size_t k = 0; k < m; ++k) {
            Packet acc;
            bool first = true;
            for (size_t i = 0; i < m; ++i) {
                RingElem e = phi.at(static_cast<int>(i), static_cast<int>(k));
                if (e == 0) continue;
                Packet t = apply_ring(p, e, y[static_cast<size_t>(A[i])], cap);
                if (first) {
                    acc = std::move(t);
                    first = false;
                } else {
                    xor_into(acc, t, cap);
                }
            }
            if (first) throw SingularMatrix("decode: ring inverse produced an all-zero column");
            mtil[k] = std::move(acc);
            erec[static_cast<size_t>(Ap[k])] = mtil[k];
            have[static_cast<size_t>(Ap[k])] = 1;
        }
        st.step2_apply_ops = cap.binary_ops;
        st.counted.add(cap.binary_ops);

        // back-substitute the pivot original out of its normalized row
        OpCounter cbs;
        Packet acc = std::move(y[static_cast<size_t>(r1)]);
        for (size_t k = 0; k < m; ++k) {
            int s = pivot_shift[static_cast<size_t>(Ap[k])];
            if (s < 0) continue;
            Packet t = apply_shift(p, mtil[k], s);
            xor_into(acc, t, cbs);
        }
        erec[static_cast<size_t>(jp1)] = std::move(acc);
        have[static_cast<size_t>(jp1)] = 1;
        st.backsub_ops = cbs.binary_ops;
        st.counted.add(cbs.binary_ops);
    }

    std::vector<Packet> out(static_cast<size_t>(P));
    for (int j = 0; j < P; ++j) {
        if (!have[static_cast<size_t>(j)]) throw SingularMatrix("decode: original left unrecovered");
        out[static_cast<size_t>(j)] = project_H(p, erec[static_cast<size_t>(j)]);
    }
    return out;
}

}  // namespace

std::vector<Packet> decode_circ(const ShiftParams& p, const DecodeInput& in, DecodeStats& st) {
    if (in.cfg.kind != SchemeKind::Circ) throw InvalidArgs("decode_circ: wrong scheme kind");
    return decode_circ_impl(p, in, st, true);
}

std::vector<Packet> decode_circ_red(const ShiftParams& p, const DecodeInput& in, DecodeStats& st) {
    if (in.cfg.kind != SchemeKind::CircRed) throw InvalidArgs("decode_circ_red: wrong scheme kind");
    return decode_circ_impl(p, in, st, false);
}

}  // namespace rlnc
