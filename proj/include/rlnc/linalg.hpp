#ifndef RLNC_LINALG_HPP
#define RLNC_LINALG_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rlnc/bitmat.hpp"
#include "rlnc/bits.hpp"
#include "rlnc/circring.hpp"
#include "rlnc/gf2e.hpp"

namespace rlnc {

/// Incremental rank tracker over GF(2). Rows are kept reduced with the
/// pivot at the lowest-index nonzero bit, so absorption order never changes
/// the verdicts.
class Gf2RankTracker {
  public:
    explicit Gf2RankTracker(int ambient_dim);

    int ambient() const { return n_; }
    int rank() const { return static_cast<int>(rows_.size()); }

    /// Eliminates one column vector against the basis; true if rank grew.
    bool absorb_one(std::vector<uint64_t> v);

    /// Absorbs a group of columns (the L columns of one block coding
    /// vector); returns the rank increase in [0, group size].
    int absorb_column(std::span<const std::vector<uint64_t>> cols);

  private:
    int n_;
    std::vector<std::vector<uint64_t>> rows_;
    std::vector<int> pivots_;
};

/// Incremental rank tracker over GF(2^L) for length-n coefficient vectors.
class GfqRankTracker {
  public:
    GfqRankTracker(const FieldCtx& f, int n) : f_(&f), n_(n) {}

    int rank() const { return static_cast<int>(rows_.size()); }
    bool absorb(std::vector<uint32_t> v);  // true if rank grew

  private:
    const FieldCtx* f_;
    int n_;
    std::vector<std::vector<uint32_t>> rows_;  // pivot coefficient normalized to 1
    std::vector<int> pivots_;
};

/// Full-block-rank test for J circular-shift coding vectors over P
/// originals: maps each coefficient through the order-(L+1) element of
/// GF(2^L) and tests scalar rank J there. Agrees with GF(2) rank JL of the
/// expanded PL x JL matrix.
bool coeff_full_rank(const ShiftParams& p, const FieldCtx& f,
                     std::span<const std::vector<Coeff>> headers);

/// Maps one circular-shift header to its GF(2^L) image (zero stays zero,
/// shift l becomes beta^l).
std::vector<uint32_t> coeff_to_field_column(const ShiftParams& p, const FieldCtx& f,
                                            std::span<const Coeff> header);

/// Expands circular-shift headers into the PL x (#headers * L) binary
/// juxtaposition of their coding vectors (oracle path).
BitMatrix expand_coding_vectors(const ShiftParams& p, int P,
                                std::span<const std::vector<Coeff>> headers);

/// Exact solve of A x = rhs over GF(2^L) by Gauss-Jordan, packets as
/// symbol-wise right-hand sides. Reference decoder oracle.
std::vector<Packet> solve_dense_gf(const FieldCtx& f, std::vector<std::vector<uint32_t>> a,
                                   std::vector<Packet> rhs);

}  // namespace rlnc

#endif
