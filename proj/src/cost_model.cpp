#include "ehdl/cost_model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ehdl {

std::string_view component_name(Component c) {
    switch (c) {
        case Component::Cpu: return "cpu";
        case Component::Lea: return "lea";
        case Component::Dma: return "dma";
        case Component::FramRead: return "fram_read";
        case Component::FramWrite: return "fram_write";
        case Component::Sram: return "sram";
        case Component::Checkpoint: return "checkpoint";
    }
    return "?";
}

std::string_view vector_op_name(VectorOpKind k) {
    switch (k) {
        case VectorOpKind::Fft: return "fft";
        case VectorOpKind::Ifft: return "ifft";
        case VectorOpKind::Mac: return "mac";
        case VectorOpKind::Mpy: return "mpy";
        case VectorOpKind::Add: return "add";
        case VectorOpKind::DmaCopy: return "dma_copy";
    }
    return "?";
}

const OpCost& CostModel::op(VectorOpKind k) const {
    switch (k) {
        case VectorOpKind::Fft: return fft;
        case VectorOpKind::Ifft: return ifft;
        case VectorOpKind::Mac: return mac;
        case VectorOpKind::Mpy: return mpy;
        case VectorOpKind::Add: return add;
        case VectorOpKind::DmaCopy: return dma;
    }
    throw std::invalid_argument("unknown vector op");
}

size_t CostModel::dma_break_even() const {
    const double diff = cpu_copy_per_elem_nj - dma.per_elem_nj;
    return static_cast<size_t>(std::ceil(dma.fixed_nj / diff));
}

double capacitor_energy_nj(double capacitance_uf, double volts) {
    // 0.5 * C * V^2, with C in uF: result in uJ, scaled to nJ.
    return 0.5 * capacitance_uf * volts * volts * 1000.0;
}

void CostModel::validate() const {
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string("cost must be positive: ") + what);
    };
    for (auto k : {VectorOpKind::Fft, VectorOpKind::Ifft, VectorOpKind::Mac, VectorOpKind::Mpy,
                   VectorOpKind::Add, VectorOpKind::DmaCopy}) {
        const OpCost& c = op(k);
        positive(c.fixed_nj, "op fixed_nj");
        positive(c.per_elem_nj, "op per_elem_nj");
        positive(c.fixed_us, "op fixed_us");
        positive(c.per_elem_us, "op per_elem_us");
    }
    positive(cpu_op_nj, "cpu.op_nj");
    positive(cpu_op_us, "cpu.op_us");
    positive(cpu_copy_per_elem_nj, "cpu.copy_per_elem_nj");
    positive(cpu_copy_per_elem_us, "cpu.copy_per_elem_us");
    positive(fram_read_nj_per_byte, "fram.read_nj_per_byte");
    positive(fram_write_nj_per_byte, "fram.write_nj_per_byte");
    positive(fram_us_per_byte, "fram.us_per_byte");
    positive(sram_read_nj_per_byte, "sram.read_nj_per_byte");
    positive(sram_write_nj_per_byte, "sram.write_nj_per_byte");
    positive(sram_us_per_byte, "sram.us_per_byte");
    positive(checkpoint_max_mj, "checkpoint.max_cost_mj");

    if (dma.per_elem_nj >= cpu_copy_per_elem_nj)
        throw std::invalid_argument("dma per-element cost must be below cpu copy cost");
    if (!(v_off < v_warn && v_warn < v_on && v_on <= v_max))
        throw std::invalid_argument("power thresholds must satisfy v_off < v_warn < v_on <= v_max");
    const double margin_nj =
        capacitor_energy_nj(capacitance_uf, v_warn) - capacitor_energy_nj(capacitance_uf, v_off);
    if (margin_nj < checkpoint_max_mj * 1e6)
        throw std::invalid_argument("warning margin below one checkpoint worth of energy");
}

void CostModel::apply_line(const std::string& line) {
    std::string s = line;
    if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
    auto eq = s.find('=');
    if (eq == std::string::npos) {
        std::istringstream ws(s);
        std::string tok;
        if (ws >> tok) throw std::invalid_argument("bad config line: " + line);
        return;  // blank / comment
    }
    auto trim = [](std::string t) {
        const char* sp = " \t\r\n";
        t.erase(0, t.find_first_not_of(sp));
        t.erase(t.find_last_not_of(sp) + 1);
        return t;
    };
    const std::string key = trim(s.substr(0, eq));
    const std::string valstr = trim(s.substr(eq + 1));
    double val = 0.0;
    try {
        size_t pos = 0;
        val = std::stod(valstr, &pos);
        if (pos != valstr.size()) throw std::invalid_argument("");
    } catch (...) {
        throw std::invalid_argument("bad numeric value for " + key + ": " + valstr);
    }

    std::map<std::string, double*> keys = {
        {"lea.fft.fixed_nj", &fft.fixed_nj},
        {"lea.fft.per_elem_nj", &fft.per_elem_nj},
        {"lea.fft.fixed_us", &fft.fixed_us},
        {"lea.fft.per_elem_us", &fft.per_elem_us},
        {"lea.ifft.fixed_nj", &ifft.fixed_nj},
        {"lea.ifft.per_elem_nj", &ifft.per_elem_nj},
        {"lea.ifft.fixed_us", &ifft.fixed_us},
        {"lea.ifft.per_elem_us", &ifft.per_elem_us},
        {"lea.mac.fixed_nj", &mac.fixed_nj},
        {"lea.mac.per_elem_nj", &mac.per_elem_nj},
        {"lea.mac.fixed_us", &mac.fixed_us},
        {"lea.mac.per_elem_us", &mac.per_elem_us},
        {"lea.mpy.fixed_nj", &mpy.fixed_nj},
        {"lea.mpy.per_elem_nj", &mpy.per_elem_nj},
        {"lea.mpy.fixed_us", &mpy.fixed_us},
        {"lea.mpy.per_elem_us", &mpy.per_elem_us},
        {"lea.add.fixed_nj", &add.fixed_nj},
        {"lea.add.per_elem_nj", &add.per_elem_nj},
        {"lea.add.fixed_us", &add.fixed_us},
        {"lea.add.per_elem_us", &add.per_elem_us},
        {"dma.fixed_nj", &dma.fixed_nj},
        {"dma.per_elem_nj", &dma.per_elem_nj},
        {"dma.fixed_us", &dma.fixed_us},
        {"dma.per_elem_us", &dma.per_elem_us},
        {"cpu.op_nj", &cpu_op_nj},
        {"cpu.op_us", &cpu_op_us},
        {"cpu.copy_per_elem_nj", &cpu_copy_per_elem_nj},
        {"cpu.copy_per_elem_us", &cpu_copy_per_elem_us},
        {"fram.read_nj_per_byte", &fram_read_nj_per_byte},
        {"fram.write_nj_per_byte", &fram_write_nj_per_byte},
        {"fram.us_per_byte", &fram_us_per_byte},
        {"sram.read_nj_per_byte", &sram_read_nj_per_byte},
        {"sram.write_nj_per_byte", &sram_write_nj_per_byte},
        {"sram.us_per_byte", &sram_us_per_byte},
        {"checkpoint.max_cost_mj", &checkpoint_max_mj},
        {"power.capacitance_uf", &capacitance_uf},
        {"power.v_on", &v_on},
        {"power.v_off", &v_off},
        {"power.v_warn", &v_warn},
        {"power.v_max", &v_max},
    };
    auto it = keys.find(key);
    if (it == keys.end()) throw std::invalid_argument("unknown config key: " + key);
    *it->second = val;
}

CostModel CostModel::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cost config: " + path);
    CostModel m;
    std::string line;
    while (std::getline(in, line)) m.apply_line(line);
    m.validate();
    return m;
}

}  // namespace ehdl
