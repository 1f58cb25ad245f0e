#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rlnc/gf2e.hpp"
#include "rlnc/rng.hpp"

using namespace rlnc;

namespace {

// schoolbook polynomial multiply + reduce, used as the oracle for fe_mul
uint32_t oracle_mul(uint32_t a, uint32_t b, uint32_t poly, int L) {
    uint64_t prod = 0;
    for (int i = 0; i <= L; ++i)
        if ((a >> i) & 1u)
            for (int j = 0; j <= L; ++j)
                if ((b >> j) & 1u) prod ^= uint64_t{1} << (i + j);
    for (int d = 2 * L; d >= L; --d)
        if ((prod >> d) & 1u) prod ^= static_cast<uint64_t>(poly) << (d - L);
    return static_cast<uint32_t>(prod);
}

}  // namespace

TEST_CASE("addition is XOR") {
    const FieldCtx& f = field_ctx(4);
    CHECK(f.add(0x3, 0x5) == 0x6);
    CHECK(f.add(0xB, 0) == 0xB);
    CHECK(f.add(0x7, 0x7) == 0);
}

TEST_CASE("multiplication against the schoolbook oracle") {
    const FieldCtx& f = field_ctx(4);
    REQUIRE(f.poly() == 0x13);  // x^4 + x + 1
    CHECK(oracle_mul(0x2, 0x9, 0x13, 4) == 0x1);
    CHECK(f.mul(0x2, 0x9) == 0x1);
    for (uint32_t a = 0; a < 16; ++a) {
        CHECK(f.mul(a, 1) == a);
        CHECK(f.mul(a, 0) == 0);
        for (uint32_t b = 0; b < 16; ++b) CHECK(f.mul(a, b) == oracle_mul(a, b, 0x13, 4));
    }
}

TEST_CASE("table path equals shift-add path for every pair, L <= 8") {
    for (int L : {2, 3, 5, 8}) {
        const FieldCtx& f = field_ctx(L);
        uint32_t q = 1u << L;
        for (uint32_t a = 0; a < q; ++a)
            for (uint32_t b = 0; b < q; ++b) REQUIRE(f.mul(a, b) == f.mul_noLUT(a, b));
    }
}

TEST_CASE("inverses") {
    const FieldCtx& f = field_ctx(4);
    // exhaustive-search oracle for the pinned example
    uint32_t found = 0;
    for (uint32_t x = 1; x < 16; ++x)
        if (oracle_mul(0x2, x, 0x13, 4) == 1) found = x;
    CHECK(found == 0x9);
    CHECK(f.inv(0x2) == 0x9);
    CHECK(f.inv(1) == 1);
    for (uint32_t a = 1; a < 16; ++a) {
        CHECK(f.inv(f.inv(a)) == a);
        CHECK(f.mul(a, f.inv(a)) == 1);
    }
    CHECK_THROWS_AS(f.inv(0), ZeroInverse);
}

TEST_CASE("unit group order") {
    for (int L : {1, 2, 4, 8}) {
        const FieldCtx& f = field_ctx(L);
        for (uint32_t a = 1; a < (1u << L); ++a) CHECK(f.pow(a, f.order()) == 1);
    }
}

TEST_CASE("element of order L+1") {
    {
        const FieldCtx& f = field_ctx(4);
        uint32_t beta = f.element_of_order(5);
        CHECK(f.pow(beta, 5) == 1);
        for (int k = 1; k <= 4; ++k) CHECK(f.pow(beta, static_cast<uint64_t>(k)) != 1);
    }
    {
        const FieldCtx& f = field_ctx(2);
        uint32_t beta = f.element_of_order(3);
        CHECK(beta >= 2);  // any element outside {0, 1} has order 3 in GF(4)
        CHECK(f.pow(beta, 3) == 1);
    }
    {
        const FieldCtx& f = field_ctx(10);
        uint32_t beta = f.element_of_order(11);
        // exhaustive order scan
        uint32_t v = beta;
        int order = 1;
        while (v != 1) {
            v = f.mul(v, beta);
            ++order;
        }
        CHECK(order == 11);
    }
    const FieldCtx& f4 = field_ctx(4);
    CHECK_THROWS_AS(f4.element_of_order(7), NoSuchElement);  // 7 does not divide 15
}

TEST_CASE("pinned reduction polynomials are irreducible") {
    for (int L = 1; L <= FieldCtx::kMaxL; ++L) CHECK(poly_is_irreducible(reduction_poly_for(L), L));
    CHECK_FALSE(poly_is_irreducible(0x11, 4));  // x^4 + 1 = (x+1)^4
    CHECK_FALSE(poly_is_irreducible(0x14, 4));  // x^4 + x^2 = x^2 (x^2 + 1)
    CHECK(poly_is_irreducible(0x1F, 4));        // x^4+x^3+x^2+x+1, the degree-4 cyclotomic
    CHECK_THROWS_AS(reduction_poly_for(19), InvalidArgs);
}

TEST_CASE("field axioms, randomized large L") {
    SplitMix64 rng(7);
    for (int L : {10, 12, 16, 18}) {
        const FieldCtx& f = field_ctx(L);
        uint64_t q = uint64_t{1} << L;
        for (int t = 0; t < 3000; ++t) {
            uint32_t a = static_cast<uint32_t>(rng.below(q));
            uint32_t b = static_cast<uint32_t>(rng.below(q));
            uint32_t c = static_cast<uint32_t>(rng.below(q));
            CHECK(f.mul(a, b) == f.mul(b, a));
            CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
            CHECK(f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c)));
        }
    }
}
