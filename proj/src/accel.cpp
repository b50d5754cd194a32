#include "ehdl/accel.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

namespace ehdl {

namespace {

struct TwiddleTable {
    // exp(-2*pi*i*j/n) for j in [0, n/2), Q15 round-to-nearest.
    std::vector<int16_t> re;
    std::vector<int16_t> im;
};

int16_t quantize_twiddle(double v) {
    long r = std::lround(v * 32768.0);
    if (r > 32767) r = 32767;
    if (r < -32768) r = -32768;
    return static_cast<int16_t>(r);
}

const TwiddleTable& twiddles(size_t n) {
    static std::array<TwiddleTable, 9> tables = [] {
        std::array<TwiddleTable, 9> t{};
        for (size_t log2n = 2; log2n <= 8; ++log2n) {
            const size_t len = size_t{1} << log2n;
            TwiddleTable& tab = t[log2n];
            tab.re.resize(len / 2);
            tab.im.resize(len / 2);
            for (size_t j = 0; j < len / 2; ++j) {
                const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) /
                                   static_cast<double>(len);
                tab.re[j] = quantize_twiddle(std::cos(ang));
                tab.im[j] = quantize_twiddle(std::sin(ang));
            }
        }
        return t;
    }();
    return tables[static_cast<size_t>(std::countr_zero(n))];
}

// Round-half-up of a Q30 intermediate back to Q15, saturating.
int16_t round_q30(int64_t v, OverflowFlag& flag) {
    return sat16_flag((v + (int64_t{1} << 14)) >> 15, OpSite::FftStage, flag);
}

}  // namespace

void Accelerator::charge(VectorOpKind kind, size_t n) {
    const OpCost& c = dev_.costs().op(kind);
    dev_.ledger().charge(kind == VectorOpKind::DmaCopy ? Component::Dma : Component::Lea,
                         c.energy(n), c.latency(n));
    dev_.ledger().count_op(kind);
}

void Accelerator::check_fft_args(size_t elem, size_t n) const {
    if (!std::has_single_bit(n) || n < kFftMinLen)
        throw NotPowerOfTwo("fft length " + std::to_string(n));
    if (n > kFftMaxLen || n * 4 > dev_.sram().capacity())
        throw BufferTooLarge("fft length " + std::to_string(n));
    dev_.sram().check(elem * 2, n * 4);
}

OverflowFlag Accelerator::fft(size_t elem, size_t n, FftDirection dir) {
    check_fft_args(elem, n);
    MemoryRegion& sram = dev_.sram();
    OverflowFlag flag;

    auto re_at = [&](size_t i) { return Device::peek_raw(sram, elem + 2 * i); };
    auto im_at = [&](size_t i) { return Device::peek_raw(sram, elem + 2 * i + 1); };
    auto set = [&](size_t i, int16_t re, int16_t im) {
        Device::poke_raw(sram, elem + 2 * i, re);
        Device::poke_raw(sram, elem + 2 * i + 1, im);
    };

    // Bit-reversal permutation.
    const int bits = std::countr_zero(n);
    for (size_t i = 0; i < n; ++i) {
        size_t r = 0;
        for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
        if (r > i) {
            const int16_t tr = re_at(i), ti = im_at(i);
            set(i, re_at(r), im_at(r));
            set(r, tr, ti);
        }
    }

    const TwiddleTable& tab = twiddles(n);
    const bool inverse = dir == FftDirection::Inverse;

    for (size_t half = 1; half < n; half *= 2) {
        const size_t step = n / (2 * half);  // twiddle stride
        for (size_t group = 0; group < n; group += 2 * half) {
            for (size_t j = 0; j < half; ++j) {
                const size_t a = group + j;
                const size_t b = a + half;
                const int64_t ar = re_at(a), ai = im_at(a);
                const int64_t br = re_at(b), bi = im_at(b);
                int64_t wbr_q30, wbi_q30;  // twiddle * b, Q30, exact
                if (j == 0) {
                    wbr_q30 = br << 15;
                    wbi_q30 = bi << 15;
                } else {
                    const int64_t wr = tab.re[j * step];
                    const int64_t wi = inverse ? -tab.im[j * step] : tab.im[j * step];
                    wbr_q30 = wr * br - wi * bi;
                    wbi_q30 = wr * bi + wi * br;
                }
                set(a, round_q30((ar << 15) + wbr_q30, flag),
                    round_q30((ai << 15) + wbi_q30, flag));
                set(b, round_q30((ar << 15) - wbr_q30, flag),
                    round_q30((ai << 15) - wbi_q30, flag));
            }
        }
    }

    charge(dir == FftDirection::Forward ? VectorOpKind::Fft : VectorOpKind::Ifft, n);
    return flag;
}

std::pair<Q15, OverflowFlag> Accelerator::mac(size_t a_elem, size_t b_elem, size_t n) {
    MemoryRegion& sram = dev_.sram();
    sram.check(a_elem * 2, n * 2);
    sram.check(b_elem * 2, n * 2);
    int64_t acc = 0;  // Q30 accumulator, wide enough for any SRAM-sized vector
    for (size_t i = 0; i < n; ++i) {
        acc += static_cast<int64_t>(Device::peek_raw(sram, a_elem + i)) *
               static_cast<int64_t>(Device::peek_raw(sram, b_elem + i));
    }
    OverflowFlag flag;
    const int16_t out = sat16_flag((acc + (int64_t{1} << 14)) >> 15, OpSite::Mac, flag);
    charge(VectorOpKind::Mac, n);
    return {Q15::from_raw(out), flag};
}

OverflowFlag Accelerator::cmul_inplace(size_t a_elem, size_t b_elem, size_t n) {
    MemoryRegion& sram = dev_.sram();
    sram.check(a_elem * 2, n * 4);
    sram.check(b_elem * 2, n * 4);
    OverflowFlag flag;
    for (size_t i = 0; i < n; ++i) {
        CQ15 a{Q15::from_raw(Device::peek_raw(sram, a_elem + 2 * i)),
               Q15::from_raw(Device::peek_raw(sram, a_elem + 2 * i + 1))};
        const CQ15 b{Q15::from_raw(Device::peek_raw(sram, b_elem + 2 * i)),
                     Q15::from_raw(Device::peek_raw(sram, b_elem + 2 * i + 1))};
        const CQ15 p = cq15_mul(a, b, flag);
        Device::poke_raw(sram, a_elem + 2 * i, p.re.raw);
        Device::poke_raw(sram, a_elem + 2 * i + 1, p.im.raw);
    }
    charge(VectorOpKind::Mpy, n);
    return flag;
}

OverflowFlag Accelerator::vadd_inplace(size_t a_elem, size_t b_elem, size_t n) {
    MemoryRegion& sram = dev_.sram();
    sram.check(a_elem * 2, n * 2);
    sram.check(b_elem * 2, n * 2);
    OverflowFlag flag;
    for (size_t i = 0; i < n; ++i) {
        const Q15 a = Q15::from_raw(Device::peek_raw(sram, a_elem + i));
        const Q15 b = Q15::from_raw(Device::peek_raw(sram, b_elem + i));
        Device::poke_raw(sram, a_elem + i, sat_add(a, b, flag).raw);
    }
    charge(VectorOpKind::Add, n);
    return flag;
}

void Accelerator::dma_copy(const MemoryRegion& src, size_t src_elem, MemoryRegion& dst,
                           size_t dst_elem, size_t n) {
    try {
        src.check(src_elem * 2, n * 2);
        dst.check(dst_elem * 2, n * 2);
    } catch (const OutOfBounds& e) {
        throw RangeOutOfBounds(e.what());
    }
    for (size_t i = 0; i < n; ++i)
        Device::poke_raw(dst, dst_elem + i, Device::peek_raw(src, src_elem + i));
    charge(VectorOpKind::DmaCopy, n);
    dev_.charge_mem(src.kind(), n * 2, false);
    dev_.charge_mem(dst.kind(), n * 2, true);
}

}  // namespace ehdl
