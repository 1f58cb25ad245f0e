#ifndef RLNC_RNG_HPP
#define RLNC_RNG_HPP

#include <cstdint>
#include <initializer_list>

namespace rlnc {

// 64-bit finalizer from the splitmix64 reference implementation.
// Constants: 0xBF58476D1CE4E5B9, 0x94D049BB133111EB, golden gamma 0x9E3779B97F4A7C15.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Splitmix64 stream. Cheap, seedable, identical output on every platform;
// all randomness in the library flows through this so that runs are
// reproducible bit-for-bit from (seed, stream key) alone.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // uniform in [0, n), rejection-sampled so there is no modulo bias
    uint64_t below(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t u = next();
            if (u >= threshold) return u % n;
        }
    }

    // 53-bit uniform in [0, 1)
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double in_range(double lo, double hi) { return lo + next_unit() * (hi - lo); }

    bool bernoulli(double p) { return next_unit() < p; }

  private:
    uint64_t state_;
};

// Derives an independent child seed from a parent seed and a key path.
// Used to split one experiment seed into per-trial / per-receiver / per-role
// streams whose consumption never interferes.
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> keys) {
    uint64_t s = mix64(base ^ 0xD1B54A32D192ED03ULL);
    for (uint64_t k : keys) s = mix64(s ^ mix64(k + 0x9E3779B97F4A7C15ULL));
    return s;
}

}  // namespace rlnc

#endif
