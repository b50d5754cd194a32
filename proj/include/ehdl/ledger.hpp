#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <string_view>

namespace ehdl {

enum class Component : uint8_t {
    Cpu,
    Lea,
    Dma,
    FramRead,
    FramWrite,
    Sram,
    Checkpoint,
};
constexpr size_t kComponentCount = 7;

enum class VectorOpKind : uint8_t { Fft, Ifft, Mac, Mpy, Add, DmaCopy };
constexpr size_t kVectorOpCount = 6;

std::string_view component_name(Component c);
std::string_view vector_op_name(VectorOpKind k);

// Per-component energy/latency accumulator. Totals are always derived as the
// sum of the components, so "total == sum of parts" holds exactly.
class EnergyLedger {
  public:
    void charge(Component c, double energy_nj, double latency_us) {
        assert(energy_nj >= 0.0 && latency_us >= 0.0);
        energy_nj_[idx(c)] += energy_nj;
        latency_us_[idx(c)] += latency_us;
    }

    void count_op(VectorOpKind k) { op_counts_[static_cast<size_t>(k)] += 1; }

    double energy_nj(Component c) const { return energy_nj_[idx(c)]; }
    double latency_us(Component c) const { return latency_us_[idx(c)]; }
    uint64_t op_count(VectorOpKind k) const { return op_counts_[static_cast<size_t>(k)]; }

    double total_energy_nj() const {
        double t = 0.0;
        for (double e : energy_nj_) t += e;
        return t;
    }
    double total_latency_us() const {
        double t = 0.0;
        for (double l : latency_us_) t += l;
        return t;
    }

    const std::array<double, kComponentCount>& energy_by_component() const { return energy_nj_; }
    const std::array<double, kComponentCount>& latency_by_component() const { return latency_us_; }
    const std::array<uint64_t, kVectorOpCount>& op_counts() const { return op_counts_; }

  private:
    static size_t idx(Component c) { return static_cast<size_t>(c); }

    std::array<double, kComponentCount> energy_nj_{};
    std::array<double, kComponentCount> latency_us_{};
    std::array<uint64_t, kVectorOpCount> op_counts_{};
};

}  // namespace ehdl
