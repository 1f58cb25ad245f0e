#ifndef RLNC_GF2E_HPP
#define RLNC_GF2E_HPP

#include <cstdint>
#include <vector>

#include "rlnc/errors.hpp"

namespace rlnc {

/// Arithmetic context for GF(2^L), 1 <= L <= 18.
///
/// The reduction polynomial is pinned per L and its irreducibility is
/// re-verified at construction instead of trusted. Log/antilog tables are
/// built for L <= 16 (at most 64K entries); larger fields fall back to
/// shift-and-add multiplication.
class FieldCtx {
  public:
    static constexpr int kMaxL = 18;
    static constexpr int kMaxTableL = 16;

    static FieldCtx make(int L);

    int L() const { return L_; }
    uint32_t poly() const { return poly_; }
    uint32_t order() const { return (1u << L_) - 1; }  // size of the multiplicative group
    bool has_tables() const { return !log_.empty(); }

    uint32_t add(uint32_t a, uint32_t b) const { return a ^ b; }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        if (!log_.empty()) {
            uint32_t s = log_[a] + log_[b];
            if (s >= order()) s -= order();
            return exp_[s];
        }
        return mul_noLUT(a, b);
    }

    // plain shift-and-add multiply; kept as an independent code path so the
    // table path can be cross-checked against it
    uint32_t mul_noLUT(uint32_t a, uint32_t b) const;

    uint32_t inv(uint32_t a) const;
    uint32_t pow(uint32_t a, uint64_t e) const;

    /// Element of multiplicative order exactly n (throws NoSuchElement when
    /// n does not divide 2^L - 1).
    uint32_t element_of_order(uint32_t n) const;

  private:
    FieldCtx() = default;

    int L_ = 0;
    uint32_t poly_ = 0;
    uint32_t generator_ = 0;
    std::vector<uint16_t> log_;   // index: element value (log_[0] unused)
    std::vector<uint16_t> exp_;   // index: exponent in [0, 2^L-2]
};

/// Shared immutable context per L (contexts are read-only after
/// construction, so concurrent use is fine).
const FieldCtx& field_ctx(int L);

/// Reduction polynomial used for a given L (top bit included).
uint32_t reduction_poly_for(int L);

/// Exhaustive check that `poly` (degree L) has no factor of degree <= L/2.
bool poly_is_irreducible(uint32_t poly, int L);

}  // namespace rlnc

#endif
