#pragma once

#include <stdexcept>
#include <string>

#include "ehdl/ledger.hpp"

namespace ehdl {

struct OpCost {
    double fixed_nj = 0.0;
    double per_elem_nj = 0.0;
    double fixed_us = 0.0;
    double per_elem_us = 0.0;

    double energy(size_t n) const { return fixed_nj + per_elem_nj * static_cast<double>(n); }
    double latency(size_t n) const { return fixed_us + per_elem_us * static_cast<double>(n); }
};

// All per-operation constants of the simulated device. The absolute numbers
// are calibration inputs loaded from a key/value config file; the defaults
// keep the orderings the design depends on (vector op cheaper than the
// equivalent CPU loop, DMA bulk cheaper than CPU copy, SRAM cheaper than
// FRAM) without claiming hardware accuracy.
struct CostModel {
    OpCost fft{600.0, 20.0, 5.0, 0.06};
    OpCost ifft{600.0, 20.0, 5.0, 0.06};
    OpCost mac{500.0, 25.0, 4.0, 0.05};
    OpCost mpy{400.0, 12.0, 4.0, 0.04};
    OpCost add{300.0, 8.0, 3.0, 0.03};
    OpCost dma{120.0, 2.0, 2.0, 0.02};

    double cpu_op_nj = 60.0;               // one scalar ALU/compare/mul step
    double cpu_op_us = 0.15;
    double cpu_copy_per_elem_nj = 14.0;    // CPU-driven element move
    double cpu_copy_per_elem_us = 0.12;

    double fram_read_nj_per_byte = 3.0;
    double fram_write_nj_per_byte = 6.0;
    double fram_us_per_byte = 0.008;
    double sram_read_nj_per_byte = 0.8;
    double sram_write_nj_per_byte = 1.2;
    double sram_us_per_byte = 0.003;

    double checkpoint_max_mj = 0.033;      // cap asserted on every checkpoint

    double capacitance_uf = 100.0;
    double v_on = 3.0;
    double v_off = 1.8;
    double v_warn = 2.2;
    double v_max = 3.3;

    const OpCost& op(VectorOpKind k) const;

    // Smallest element count for which the DMA path is not more expensive
    // than moving elements one by one on the CPU.
    size_t dma_break_even() const;

    void validate() const;  // throws std::invalid_argument on a broken profile

    static CostModel from_file(const std::string& path);
    void apply_line(const std::string& line);  // "key = value", '#' comments
};

double capacitor_energy_nj(double capacitance_uf, double volts);

}  // namespace ehdl
