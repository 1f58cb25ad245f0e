#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rlnc/bits.hpp"
#include "rlnc/rng.hpp"

using namespace rlnc;

TEST_CASE("xor_into") {
    OpCounter ctr;
    Packet a(5, 16), z(5, 16);
    SplitMix64 rng(1);
    a = random_packet(5, 16, rng);
    Packet before = a;
    xor_into(a, z, ctr);
    CHECK(a == before);
    xor_into(a, before, ctr);
    CHECK(a == z);
    CHECK(ctr.binary_ops == 2 * 80);  // 16 symbols x 5 bits each pass
    Packet wrong(4, 16);
    CHECK_THROWS_AS(xor_into(a, wrong, ctr), ShapeMismatch);
}

TEST_CASE("rotation") {
    ShiftParams p = ShiftParams::make(4);
    Packet a(5, 1);
    a.w[0] = 0b00001;
    CHECK(apply_shift(p, a, 1).w[0] == 0b00010);
    CHECK(apply_shift(p, a, 5) == a);
    SplitMix64 rng(2);
    for (int t = 0; t < 100; ++t) {
        Packet pk = random_packet(5, 6, rng);
        int x = static_cast<int>(rng.below(6)), y = static_cast<int>(rng.below(6));
        CHECK(apply_shift(p, apply_shift(p, pk, x), y) == apply_shift(p, pk, (x + y) % 5));
    }
    Packet wrong(4, 1);
    CHECK_THROWS_AS(apply_shift(p, wrong, 1), WrongState);
}

TEST_CASE("parity expansion and truncation") {
    ShiftParams p = ShiftParams::make(4);
    OpCounter ctr;
    Packet a(4, 1);
    a.w[0] = 0b0111;
    Packet e = expand_G(p, a, ctr);
    CHECK(e.w[0] == 0b10111);
    CHECK(ctr.binary_ops == 3);  // (L-1) per symbol
    Packet z(4, 1);
    OpCounter c2;
    CHECK(expand_G(p, z, c2).w[0] == 0);
    CHECK(project_H(p, e) == a);
    Packet s(5, 1);
    s.w[0] = 0b10111;
    CHECK(project_H(p, s).w[0] == 0b0111);
    SplitMix64 rng(3);
    for (int t = 0; t < 50; ++t) {
        Packet pk = random_packet(4, 16, rng);
        OpCounter c3;
        CHECK(project_H(p, expand_G(p, pk, c3)) == pk);
        CHECK(c3.binary_ops == 48);  // 16 symbols x (L-1)
    }
    CHECK_THROWS_AS(project_H(p, a), WrongState);
    OpCounter c4;
    CHECK_THROWS_AS(expand_G(p, s, c4), WrongState);
}

TEST_CASE("ring application") {
    ShiftParams p = ShiftParams::make(4);
    Packet one(5, 1);
    one.w[0] = 0b00001;
    OpCounter ctr;
    CHECK(apply_ring(p, 1, one, ctr) == one);
    CHECK(ctr.binary_ops == 0);
    Packet z = apply_ring(p, 0, one, ctr);
    CHECK(z.w[0] == 0);
    CHECK(ctr.binary_ops == 0);
    Packet two = apply_ring(p, 0b01010, one, ctr);
    CHECK(two.w[0] == 0b01010);
    CHECK(ctr.binary_ops == 5);
    SplitMix64 rng(4);
    for (int t = 0; t < 100; ++t) {
        Packet x = random_packet(5, 8, rng), y = random_packet(5, 8, rng);
        RingElem e = rng.next() & p.full_mask();
        OpCounter c1, c2;
        Packet sum = x;
        xor_into(sum, y, c1);
        Packet lhs = apply_ring(p, e, sum, c1);
        Packet r1 = apply_ring(p, e, x, c2);
        Packet r2 = apply_ring(p, e, y, c2);
        xor_into(r1, r2, c2);
        CHECK(lhs == r1);
    }
}
