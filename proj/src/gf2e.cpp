#include "rlnc/gf2e.hpp"

#include <array>
#include <map>
#include <mutex>

namespace rlnc {

namespace {

// One fixed irreducible polynomial per extension degree. Any irreducible
// polynomial works; pinning one keeps every run and every golden file
// deterministic. Verified at startup by poly_is_irreducible().
constexpr std::array<uint32_t, FieldCtx::kMaxL + 1> kPolys = {
    0,        // L = 0 unused
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x89,     // x^7 + x^3 + 1
    0x11B,    // x^8 + x^4 + x^3 + x + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4143,   // x^14 + x^8 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
    0x20009,  // x^17 + x^3 + 1
    0x40081,  // x^18 + x^7 + 1
};

int poly_degree(uint64_t p) {
    int d = -1;
    while (p) {
        ++d;
        p >>= 1;
    }
    return d;
}

uint64_t poly_mod(uint64_t a, uint64_t m) {
    int dm = poly_degree(m);
    int da = poly_degree(a);
    while (da >= dm) {
        a ^= m << (da - dm);
        da = poly_degree(a);
    }
    return a;
}

uint64_t clmul(uint64_t a, uint64_t b) {
    uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

std::vector<uint32_t> prime_factors(uint32_t n) {
    std::vector<uint32_t> fs;
    for (uint32_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            fs.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

}  // namespace

const FieldCtx& field_ctx(int L) {
    static std::mutex mu;
    static std::map<int, FieldCtx> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(L);
    if (it == cache.end()) it = cache.emplace(L, FieldCtx::make(L)).first;
    return it->second;
}

uint32_t reduction_poly_for(int L) {
    if (L < 1 || L > FieldCtx::kMaxL) throw InvalidArgs("GF(2^L): L must be in [1, 18]");
    return kPolys[static_cast<size_t>(L)];
}

bool poly_is_irreducible(uint32_t poly, int L) {
    if (poly_degree(poly) != L) return false;
    if (L == 1) return true;
    for (int d = 1; d <= L / 2; ++d) {
        for (uint64_t g = (1ull << d); g < (2ull << d); ++g) {
            // trial division by every polynomial of degree d
            if (poly_mod(poly, g) == 0) return false;
        }
    }
    return true;
}

uint32_t FieldCtx::mul_noLUT(uint32_t a, uint32_t b) const {
    return static_cast<uint32_t>(poly_mod(clmul(a, b), poly_));
}

FieldCtx FieldCtx::make(int L) {
    FieldCtx f;
    f.L_ = L;
    f.poly_ = reduction_poly_for(L);
    if (!poly_is_irreducible(f.poly_, L))
        throw InvalidArgs("GF(2^L): pinned reduction polynomial failed irreducibility check");
    if (L == 1) {
        f.generator_ = 1;
        return f;  // GF(2): XOR/AND only, no tables needed
    }

    // find a generator of the multiplicative group, then build tables from it
    uint32_t ord = f.order();
    auto fs = prime_factors(ord);
    uint32_t g = 0;
    for (uint32_t cand = 2; cand < (1u << L); ++cand) {
        bool is_gen = true;
        for (uint32_t p : fs) {
            uint32_t e = ord / p;
            // pow by repeated squaring on the no-table path
            uint64_t ee = e;
            uint32_t acc = 1, base = cand;
            while (ee) {
                if (ee & 1) acc = f.mul_noLUT(acc, base);
                base = f.mul_noLUT(base, base);
                ee >>= 1;
            }
            if (acc == 1) {
                is_gen = false;
                break;
            }
        }
        if (is_gen) {
            g = cand;
            break;
        }
    }
    if (g == 0) throw NoSuchElement("GF(2^L): no generator found (not a field?)");
    f.generator_ = g;

    if (L <= kMaxTableL) {
        f.log_.assign(1u << L, 0);
        f.exp_.assign(ord, 0);
        uint32_t v = 1;
        for (uint32_t k = 0; k < ord; ++k) {
            f.exp_[k] = static_cast<uint16_t>(v);
            f.log_[v] = static_cast<uint16_t>(k);
            v = f.mul_noLUT(v, g);
        }
        if (v != 1) throw NoSuchElement("GF(2^L): generator order check failed");
    }
    return f;
}

uint32_t FieldCtx::inv(uint32_t a) const {
    if (a == 0) throw ZeroInverse("GF(2^L): zero has no inverse");
    if (!log_.empty()) {
        uint32_t k = log_[a];
        return exp_[k == 0 ? 0 : order() - k];
    }
    return pow(a, order() - 1);  // a^(2^L - 2)
}

uint32_t FieldCtx::pow(uint32_t a, uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (!log_.empty()) {
        uint64_t k = (static_cast<uint64_t>(log_[a]) * (e % order())) % order();
        return exp_[k];
    }
    uint32_t acc = 1, base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

uint32_t FieldCtx::element_of_order(uint32_t n) const {
    if (n == 0 || order() % n != 0)
        throw NoSuchElement("GF(2^L): group order not divisible by requested element order");
    // generator^( (2^L-1)/n ) has order exactly n
    return pow(generator_, order() / n);
}

}  // namespace rlnc
