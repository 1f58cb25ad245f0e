#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rlnc/linalg.hpp"
#include "rlnc/rng.hpp"

using namespace rlnc;

namespace {

std::vector<uint64_t> bits_from(std::initializer_list<int> idx, int n) {
    std::vector<uint64_t> v(static_cast<size_t>((n + 63) / 64), 0);
    for (int i : idx) v[static_cast<size_t>(i / 64)] |= uint64_t{1} << (i % 64);
    return v;
}

}  // namespace

TEST_CASE("bit-matrix basics") {
    CHECK(BitMatrix::identity(5).rank() == 5);
    CHECK(BitMatrix(4, 7).rank() == 0);
    BitMatrix a = BitMatrix::identity(3);
    a.set(0, 1, true);
    BitMatrix inv = a.inverse();
    CHECK((a * inv).is_identity());
    BitMatrix sing(2, 2);
    sing.set(0, 0, true);
    sing.set(1, 0, true);
    CHECK_THROWS_AS(sing.inverse(), SingularMatrix);
}

TEST_CASE("incremental tracker over GF(2)") {
    Gf2RankTracker t(8);
    std::vector<std::vector<uint64_t>> block;
    for (int i = 0; i < 4; ++i) block.push_back(bits_from({i}, 8));
    CHECK(t.absorb_column(block) == 4);  // identity block: full step
    CHECK(t.absorb_column(block) == 0);  // absorbed again: nothing new
    CHECK(t.rank() == 4);

    // random full-rank stream reaches full ambient rank
    SplitMix64 rng(5);
    const int P = 4, L = 4, n = P * L;
    BitMatrix dense(0, 0);
    for (int rep = 0; rep < 20; ++rep) {
        Gf2RankTracker tr(n);
        std::vector<std::vector<uint64_t>> all;
        while (tr.rank() < n) {
            std::vector<uint64_t> v(1, rng.next() & 0xFFFF);
            if (v[0] == 0) continue;
            all.push_back(v);
            tr.absorb_one(v);
        }
        BitMatrix m(all.size(), n);
        for (size_t r = 0; r < all.size(); ++r)
            for (int i = 0; i < n; ++i)
                if ((all[r][0] >> i) & 1u) m.set(r, static_cast<size_t>(i), true);
        CHECK(m.rank() == static_cast<size_t>(n));
        CHECK(tr.rank() == n);
    }
    CHECK_THROWS_AS(t.absorb_one(bits_from({0}, 640)), DimensionMismatch);
}

TEST_CASE("rank of the golden expanded system") {
    ShiftParams p = ShiftParams::make(4);
    RingMatrix m(3, 3);
    m.at(0, 0) = 1;  m.at(0, 1) = 1;  m.at(0, 2) = 1;
    m.at(1, 0) = 2;  m.at(1, 1) = 4;  m.at(1, 2) = 8;
    m.at(2, 0) = 2;  m.at(2, 1) = 8;  m.at(2, 2) = 16;
    CHECK(rank_gf2(expand_system(p, m)) == 12);
}

TEST_CASE("field-embedding rank verdicts") {
    ShiftParams p = ShiftParams::make(4);
    const FieldCtx& f = field_ctx(4);
    const int P = 4;
    // identity diagonal: full rank
    std::vector<std::vector<Coeff>> diag;
    for (int j = 0; j < P; ++j) {
        std::vector<Coeff> h(static_cast<size_t>(P), Coeff::zero());
        h[static_cast<size_t>(j)] = Coeff::shift(5);
        diag.push_back(std::move(h));
    }
    CHECK(coeff_full_rank(p, f, diag));
    // two equal columns: dependent
    std::vector<std::vector<Coeff>> dup{diag[0], diag[0]};
    CHECK_FALSE(coeff_full_rank(p, f, dup));

    // randomized agreement with the GF(2) expansion oracle
    SplitMix64 rng(6);
    int agreements = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::vector<Coeff>> hs(4, std::vector<Coeff>(6));
        for (auto& h : hs)
            for (auto& e : h) {
                uint64_t d = rng.below(6);
                e = d == 0 ? Coeff::zero() : Coeff::shift(static_cast<int>(d));
            }
        bool fast = coeff_full_rank(p, f, hs);
        bool oracle = rank_gf2(expand_coding_vectors(p, 6, hs)) == 16;
        REQUIRE(fast == oracle);
        ++agreements;
    }
    CHECK(agreements == trials);
}

TEST_CASE("dense solve over GF(2^L)") {
    const FieldCtx& f = field_ctx(4);
    SplitMix64 rng(7);
    // identity system returns the right-hand side
    {
        std::vector<std::vector<uint32_t>> a(3, std::vector<uint32_t>(3, 0));
        for (int i = 0; i < 3; ++i) a[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
        std::vector<Packet> rhs;
        for (int i = 0; i < 3; ++i) rhs.push_back(random_packet(4, 5, rng));
        auto sol = solve_dense_gf(f, a, rhs);
        CHECK(sol == rhs);
    }
    // single scaled equation
    {
        std::vector<std::vector<uint32_t>> a{{0x7}};
        Packet pk = random_packet(4, 5, rng);
        Packet scaled(4, 5);
        for (int s = 0; s < 5; ++s)
            scaled.w[static_cast<size_t>(s)] = f.mul(0x7, pk.w[static_cast<size_t>(s)]);
        auto sol = solve_dense_gf(f, a, {scaled});
        CHECK(sol[0] == pk);
    }
    // random systems: multiply back
    const FieldCtx& f16 = field_ctx(4);
    for (int t = 0; t < 40; ++t) {
        const int n = 8;
        std::vector<std::vector<uint32_t>> a(n, std::vector<uint32_t>(n));
        for (auto& row : a)
            for (auto& x : row) x = static_cast<uint32_t>(rng.below(16));
        std::vector<Packet> rhs;
        for (int i = 0; i < n; ++i) rhs.push_back(random_packet(4, 4, rng));
        std::vector<Packet> sol;
        try {
            sol = solve_dense_gf(f16, a, rhs);
        } catch (const SingularMatrix&) {
            continue;  // singular draw: skip
        }
        for (int i = 0; i < n; ++i) {
            Packet back(4, 4);
            for (int s = 0; s < 4; ++s) {
                uint32_t acc = 0;
                for (int k = 0; k < n; ++k)
                    acc ^= f16.mul(a[static_cast<size_t>(i)][static_cast<size_t>(k)],
                                   sol[static_cast<size_t>(k)].w[static_cast<size_t>(s)]);
                back.w[static_cast<size_t>(s)] = acc;
            }
            CHECK(back == rhs[static_cast<size_t>(i)]);
        }
    }
    // singular matrix reported
    std::vector<std::vector<uint32_t>> sing{{1, 1}, {1, 1}};
    std::vector<Packet> rhs{random_packet(4, 2, rng), random_packet(4, 2, rng)};
    CHECK_THROWS_AS(solve_dense_gf(f, sing, rhs), SingularMatrix);
}
