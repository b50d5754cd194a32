#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "ehdl/cost_model.hpp"
#include "ehdl/errors.hpp"
#include "ehdl/fxp.hpp"
#include "ehdl/ledger.hpp"

namespace ehdl {

enum class MemKind : uint8_t { Sram, Fram };

constexpr size_t kDefaultSramBytes = 8 * 1024;
constexpr size_t kDefaultFramBytes = 256 * 1024;

// Byte written over SRAM on every power failure, so code that reads lost
// volatile state sees garbage instead of stale zeros.
constexpr uint8_t kPoisonByte = 0xDE;

// Raw storage with bounds checks. Energy charging lives in Device, which
// knows the cost model and the ledger.
class MemoryRegion {
  public:
    MemoryRegion(MemKind kind, size_t capacity) : kind_(kind), bytes_(capacity, 0) {}

    MemKind kind() const { return kind_; }
    size_t capacity() const { return bytes_.size(); }

    void check(size_t offset, size_t len) const {
        if (offset + len > bytes_.size() || offset + len < offset)
            throw OutOfBounds("offset " + std::to_string(offset) + " len " + std::to_string(len) +
                              " capacity " + std::to_string(bytes_.size()));
    }

    const uint8_t* data() const { return bytes_.data(); }
    uint8_t* data() { return bytes_.data(); }

    void poison() { std::memset(bytes_.data(), kPoisonByte, bytes_.size()); }

  private:
    MemKind kind_;
    std::vector<uint8_t> bytes_;
};

// One simulated device: the two memory regions, the cost model, and the
// shared ledger every charge lands in. Element accessors use 2-byte
// little-endian Q15 slots; a CQ15 occupies two consecutive slots (re, im).
class Device {
  public:
    explicit Device(CostModel costs = CostModel{}, size_t sram_bytes = kDefaultSramBytes,
                    size_t fram_bytes = kDefaultFramBytes)
        : costs_(std::move(costs)),
          sram_(MemKind::Sram, sram_bytes),
          fram_(MemKind::Fram, fram_bytes) {}

    CostModel& costs() { return costs_; }
    const CostModel& costs() const { return costs_; }
    EnergyLedger& ledger() { return ledger_; }
    const EnergyLedger& ledger() const { return ledger_; }
    MemoryRegion& sram() { return sram_; }
    MemoryRegion& fram() { return fram_; }
    const MemoryRegion& sram() const { return sram_; }
    const MemoryRegion& fram() const { return fram_; }

    // Charged byte access.
    void read(const MemoryRegion& r, size_t offset, std::span<uint8_t> out) {
        r.check(offset, out.size());
        std::memcpy(out.data(), r.data() + offset, out.size());
        charge_mem(r.kind(), out.size(), /*write=*/false);
    }
    void write(MemoryRegion& r, size_t offset, std::span<const uint8_t> in) {
        r.check(offset, in.size());
        std::memcpy(r.data() + offset, in.data(), in.size());
        charge_mem(r.kind(), in.size(), /*write=*/true);
    }

    // Charged Q15 element access; offsets are in elements, not bytes.
    Q15 load_q15(const MemoryRegion& r, size_t elem) {
        const size_t off = elem * 2;
        r.check(off, 2);
        charge_mem(r.kind(), 2, false);
        return Q15::from_raw(peek_raw(r, elem));
    }
    void store_q15(MemoryRegion& r, size_t elem, Q15 v) {
        const size_t off = elem * 2;
        r.check(off, 2);
        charge_mem(r.kind(), 2, true);
        poke_raw(r, elem, v.raw);
    }

    // Uncharged accessors for installing models/inputs and for tests.
    static int16_t peek_raw(const MemoryRegion& r, size_t elem) {
        const uint8_t* p = r.data() + elem * 2;
        return static_cast<int16_t>(static_cast<uint16_t>(p[0]) |
                                    (static_cast<uint16_t>(p[1]) << 8));
    }
    static void poke_raw(MemoryRegion& r, size_t elem, int16_t v) {
        uint8_t* p = r.data() + elem * 2;
        p[0] = static_cast<uint8_t>(v & 0xFF);
        p[1] = static_cast<uint8_t>((v >> 8) & 0xFF);
    }

    void charge_mem(MemKind kind, size_t bytes, bool write) {
        const double n = static_cast<double>(bytes);
        if (kind == MemKind::Sram) {
            const double nj = (write ? costs_.sram_write_nj_per_byte : costs_.sram_read_nj_per_byte) * n;
            ledger_.charge(Component::Sram, nj, costs_.sram_us_per_byte * n);
        } else {
            const double nj = (write ? costs_.fram_write_nj_per_byte : costs_.fram_read_nj_per_byte) * n;
            ledger_.charge(write ? Component::FramWrite : Component::FramRead, nj,
                           costs_.fram_us_per_byte * n);
        }
    }

    // Power failure: SRAM is gone, FRAM persists.
    void power_fail_reset() { sram_.poison(); }

  private:
    CostModel costs_;
    EnergyLedger ledger_;
    MemoryRegion sram_;
    MemoryRegion fram_;
};

}  // namespace ehdl
