#pragma once

#include <cstdint>
#include <utility>

#include "ehdl/memory.hpp"

namespace ehdl {

enum class FftDirection : uint8_t { Forward, Inverse };

constexpr size_t kFftMinLen = 4;
constexpr size_t kFftMaxLen = 256;

// Simulated low-energy vector accelerator. Each call is one atomic vector
// operation: it reads/writes the SRAM staging area, charges the ledger once,
// and bumps the per-kind op counter. Offsets are Q15 element offsets into
// SRAM; complex vectors are stored (re, im) interleaved, so a complex vector
// of n points spans 2n element slots.
//
// The forward FFT applies no internal scaling (callers pre-scale, which also
// keeps every butterfly sum inside Q15 by a Cauchy-Schwarz argument); the
// inverse runs the conjugate transform, also unscaled. Butterflies keep wide
// intermediates and round once per output component.
class Accelerator {
  public:
    explicit Accelerator(Device& dev) : dev_(dev) {}

    // In-place transform of n complex points at SRAM element offset `elem`.
    OverflowFlag fft(size_t elem, size_t n, FftDirection dir);

    // Dot product of two Q15 vectors with a wide internal accumulator,
    // rounded and saturated on read-out.
    std::pair<Q15, OverflowFlag> mac(size_t a_elem, size_t b_elem, size_t n);

    // Element-wise complex multiply: a[i] *= b[i]. The MPY op of the device.
    OverflowFlag cmul_inplace(size_t a_elem, size_t b_elem, size_t n);

    // Element-wise saturating add: a[i] += b[i].
    OverflowFlag vadd_inplace(size_t a_elem, size_t b_elem, size_t n);

    // Bulk element copy between regions (or within one region).
    void dma_copy(const MemoryRegion& src, size_t src_elem, MemoryRegion& dst, size_t dst_elem,
                  size_t n);

    Device& device() { return dev_; }

  private:
    void charge(VectorOpKind kind, size_t n);
    void check_fft_args(size_t elem, size_t n) const;

    Device& dev_;
};

}  // namespace ehdl
