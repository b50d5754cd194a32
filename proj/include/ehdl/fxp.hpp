#pragma once

#include <cmath>
#include <cstdint>

// Q15 fixed-point core: 16-bit signed values with 15 fractional bits,
// representing [-1, 1 - 2^-15]. All on-device arithmetic saturates instead
// of wrapping, and saturation is reported through OverflowFlag so callers
// can tell a clean run from a clipped one.

namespace ehdl {

constexpr int16_t kQ15Max = 32767;
constexpr int16_t kQ15Min = -32768;
constexpr double kQ15Scale = 32768.0;

enum class OpSite : uint8_t { Add, Mul, Mac, FftStage, Scale };

struct OverflowFlag {
    bool saturated = false;
    OpSite site = OpSite::Add;  // first site that clipped

    void set(OpSite s) {
        if (!saturated) {
            saturated = true;
            site = s;
        }
    }
    void merge(const OverflowFlag& o) {
        if (o.saturated) set(o.site);
    }
    bool clean() const { return !saturated; }
};

struct Q15 {
    int16_t raw = 0;

    Q15() = default;
    constexpr explicit Q15(int16_t r) : raw(r) {}

    static constexpr Q15 from_raw(int16_t r) { return Q15(r); }
    static constexpr Q15 zero() { return Q15(0); }

    bool operator==(const Q15&) const = default;
};

struct CQ15 {
    Q15 re;
    Q15 im;

    bool operator==(const CQ15&) const = default;
};

inline int16_t sat16(int32_t v) {
    if (v > kQ15Max) return kQ15Max;
    if (v < kQ15Min) return kQ15Min;
    return static_cast<int16_t>(v);
}

inline int16_t sat16_flag(int64_t v, OpSite site, OverflowFlag& flag) {
    if (v > kQ15Max) {
        flag.set(site);
        return kQ15Max;
    }
    if (v < kQ15Min) {
        flag.set(site);
        return kQ15Min;
    }
    return static_cast<int16_t>(v);
}

// Common embedded quantization rule: a real number in [-1,1) maps to
// round(a * 2^(b-1)). The engine only deploys b = 16; other widths exist so
// the rule itself can be unit-tested.
inline int32_t quantize_raw(double a, int bits, OverflowFlag& flag) {
    const double scale = std::ldexp(1.0, bits - 1);  // 2^(b-1)
    const int64_t hi = static_cast<int64_t>(scale) - 1;
    const int64_t lo = -static_cast<int64_t>(scale);
    int64_t r = std::llround(a * scale);
    if (r > hi) {
        flag.set(OpSite::Scale);
        r = hi;
    } else if (r < lo) {
        flag.set(OpSite::Scale);
        r = lo;
    }
    return static_cast<int32_t>(r);
}

inline Q15 quantize(double a, OverflowFlag& flag) {
    return Q15::from_raw(static_cast<int16_t>(quantize_raw(a, 16, flag)));
}

inline Q15 quantize(double a) {
    OverflowFlag f;
    return quantize(a, f);
}

inline double dequantize(Q15 q) { return static_cast<double>(q.raw) / kQ15Scale; }

inline Q15 sat_add(Q15 x, Q15 y, OverflowFlag& flag) {
    const int32_t s = static_cast<int32_t>(x.raw) + static_cast<int32_t>(y.raw);
    return Q15::from_raw(sat16_flag(s, OpSite::Add, flag));
}

inline Q15 sat_sub(Q15 x, Q15 y, OverflowFlag& flag) {
    const int32_t s = static_cast<int32_t>(x.raw) - static_cast<int32_t>(y.raw);
    return Q15::from_raw(sat16_flag(s, OpSite::Add, flag));
}

// Round-half-up at the discarded bit, like a DSP MAC readout.
// Only -1 * -1 lands outside the representable range.
inline Q15 q15_mul(Q15 x, Q15 y) {
    const int32_t p = static_cast<int32_t>(x.raw) * static_cast<int32_t>(y.raw);
    return Q15::from_raw(sat16((p + (1 << 14)) >> 15));
}

// (xr + i*xi)(yr + i*yi), every product through q15_mul, every sum through
// the saturating add so the flag reflects any clipped component.
inline CQ15 cq15_mul(CQ15 x, CQ15 y, OverflowFlag& flag) {
    const Q15 rr = q15_mul(x.re, y.re);
    const Q15 ii = q15_mul(x.im, y.im);
    const Q15 ri = q15_mul(x.re, y.im);
    const Q15 ir = q15_mul(x.im, y.re);
    CQ15 out;
    out.re = sat_sub(rr, ii, flag);
    out.im = sat_add(ri, ir, flag);
    return out;
}

}  // namespace ehdl
