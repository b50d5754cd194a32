#include "ehdl/model.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "ehdl/accel.hpp"

namespace ehdl {

namespace {

void push_u16(std::vector<uint8_t>& v, uint16_t x) {
    v.push_back(static_cast<uint8_t>(x & 0xFF));
    v.push_back(static_cast<uint8_t>(x >> 8));
}
void push_u32(std::vector<uint8_t>& v, uint32_t x) {
    push_u16(v, static_cast<uint16_t>(x & 0xFFFF));
    push_u16(v, static_cast<uint16_t>(x >> 16));
}

struct Reader {
    const std::vector<uint8_t>& b;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > b.size()) throw TruncatedBlob("need " + std::to_string(n) + " bytes at " +
                                                    std::to_string(pos));
    }
    uint8_t u8() {
        need(1);
        return b[pos++];
    }
    uint16_t u16() {
        need(2);
        uint16_t x = static_cast<uint16_t>(b[pos]) | (static_cast<uint16_t>(b[pos + 1]) << 8);
        pos += 2;
        return x;
    }
    uint32_t u32() {
        uint32_t lo = u16();
        return lo | (static_cast<uint32_t>(u16()) << 16);
    }
};

}  // namespace

size_t LayerDesc::in_elems() const {
    switch (kind) {
        case LayerKind::Conv:
        case LayerKind::MaxPool:
        case LayerKind::Relu:
            return static_cast<size_t>(in_ch) * in_h * in_w;
        case LayerKind::FcDense:
        case LayerKind::FcBcm:
            return cols();
    }
    return 0;
}

size_t LayerDesc::out_elems() const {
    switch (kind) {
        case LayerKind::Conv:
            return static_cast<size_t>(out_ch) * out_h() * out_w();
        case LayerKind::MaxPool:
            return static_cast<size_t>(in_ch) * (in_h / 2) * (in_w / 2);
        case LayerKind::Relu:
            return in_elems();
        case LayerKind::FcDense:
        case LayerKind::FcBcm:
            return rows();
    }
    return 0;
}

size_t LayerDesc::weight_count() const {
    switch (kind) {
        case LayerKind::Conv:
            return static_cast<size_t>(retained) * in_ch * kh * kw;
        case LayerKind::FcDense:
            return rows() * cols();
        case LayerKind::FcBcm:
            return p() * q() * k * (freq_domain ? 2 : 1);
        default:
            return 0;
    }
}

size_t LayerDesc::bias_count() const {
    switch (kind) {
        case LayerKind::Conv:
            return retained;
        case LayerKind::FcDense:
        case LayerKind::FcBcm:
            return rows();
        default:
            return 0;
    }
}

size_t LayerDesc::param_count() const {
    if (kind == LayerKind::FcBcm) return p() * q() * k;  // taps, independent of spectrum export
    return weight_count();
}

void LayerDesc::validate() const {
    switch (kind) {
        case LayerKind::Conv:
            if (!in_ch || !out_ch || !kh || !kw || kh > in_h || kw > in_w)
                throw ShapeArithmeticMismatch("conv geometry");
            if (retained == 0 || retained > out_ch)
                throw ShapeArithmeticMismatch("conv retained filter count");
            if (!pruned && retained != out_ch)
                throw ShapeArithmeticMismatch("unpruned conv must retain every filter");
            break;
        case LayerKind::MaxPool:
            if ((in_h % 2) || (in_w % 2)) throw OddDimension("maxpool input " + std::to_string(in_h) +
                                                             "x" + std::to_string(in_w));
            break;
        case LayerKind::Relu:
            if (!in_elems()) throw ShapeArithmeticMismatch("relu size");
            break;
        case LayerKind::FcDense:
            if (!rows() || !cols()) throw ShapeArithmeticMismatch("fc shape");
            break;
        case LayerKind::FcBcm:
            if (!rows() || !cols()) throw ShapeArithmeticMismatch("fc shape");
            if (!k || !std::has_single_bit(static_cast<unsigned>(k)))
                throw ShapeArithmeticMismatch("bcm block size must be a power of two");
            if (rows() % k || cols() % k)
                throw ShapeArithmeticMismatch("bcm block size must divide fc dims");
            break;
    }
}

void Model::validate() const {
    if (layers.empty()) return;
    for (const Layer& l : layers) {
        l.desc.validate();
        if (l.weights.size() != l.desc.weight_count())
            throw ShapeArithmeticMismatch("weight blob size");
        if (!l.bias.empty() && l.bias.size() != l.desc.bias_count())
            throw ShapeArithmeticMismatch("bias blob size");
        if (l.desc.pruned) {
            if (l.retained_idx.size() != l.desc.retained)
                throw ShapeArithmeticMismatch("retained index list size");
            for (size_t i = 0; i < l.retained_idx.size(); ++i) {
                if (l.retained_idx[i] >= l.desc.out_ch ||
                    (i && l.retained_idx[i] <= l.retained_idx[i - 1]))
                    throw ShapeArithmeticMismatch("retained index list order");
            }
        } else if (!l.retained_idx.empty()) {
            throw ShapeArithmeticMismatch("unexpected retained index list");
        }
    }
    for (size_t i = 1; i < layers.size(); ++i) {
        const LayerDesc& prev = layers[i - 1].desc;
        const LayerDesc& cur = layers[i].desc;
        const size_t produced = prev.out_elems();
        if (cur.kind == LayerKind::FcBcm) {
            // Flatten may zero-pad up to one block so k divides the input.
            if (cur.cols() < produced || cur.cols() - produced >= cur.k)
                throw ShapeMismatch("fc input " + std::to_string(cur.cols()) + " vs produced " +
                                    std::to_string(produced));
        } else if (cur.in_elems() != produced) {
            throw ShapeMismatch("layer " + std::to_string(i) + " consumes " +
                                std::to_string(cur.in_elems()) + " but previous produces " +
                                std::to_string(produced));
        }
        if (cur.kind == LayerKind::Conv || cur.kind == LayerKind::MaxPool ||
            cur.kind == LayerKind::Relu) {
            if (prev.kind == LayerKind::Conv &&
                (cur.in_ch != prev.out_ch || cur.in_h != prev.out_h() || cur.in_w != prev.out_w()))
                throw ShapeMismatch("spatial chain after conv");
            if (prev.kind == LayerKind::MaxPool &&
                (cur.in_ch != prev.in_ch || cur.in_h != prev.in_h / 2 || cur.in_w != prev.in_w / 2))
                throw ShapeMismatch("spatial chain after pool");
            if (prev.kind == LayerKind::Relu &&
                (cur.in_ch != prev.in_ch || cur.in_h != prev.in_h || cur.in_w != prev.in_w))
                throw ShapeMismatch("spatial chain after relu");
        }
    }
}

size_t Model::max_activation_elems() const {
    size_t m = 0;
    for (const Layer& l : layers) {
        m = std::max(m, l.desc.in_elems());
        m = std::max(m, l.desc.out_elems());
    }
    return m;
}

size_t Model::max_bcm_block() const {
    size_t m = 0;
    for (const Layer& l : layers)
        if (l.desc.kind == LayerKind::FcBcm) m = std::max<size_t>(m, l.desc.k);
    return m;
}

std::vector<uint8_t> serialize(const Model& m) {
    m.validate();
    std::vector<uint8_t> out;
    out.push_back('E');
    out.push_back('H');
    out.push_back('D');
    out.push_back('L');
    push_u16(out, kModelFormatVersion);
    push_u16(out, static_cast<uint16_t>(m.layers.size()));

    for (const Layer& l : m.layers) {
        const LayerDesc& d = l.desc;
        out.push_back(static_cast<uint8_t>(d.kind));
        uint8_t flags = 0;
        if (d.freq_domain) flags |= 1;
        if (d.pruned) flags |= 2;
        out.push_back(flags);
        push_u16(out, d.k);
        push_u16(out, d.out_ch);
        push_u16(out, d.in_ch);
        push_u16(out, d.kh);
        push_u16(out, d.kw);
        push_u16(out, d.in_h);
        push_u16(out, d.in_w);
        push_u16(out, d.retained);
        push_u16(out, 0);
        push_u32(out, static_cast<uint32_t>(l.weights.size()));
        push_u32(out, static_cast<uint32_t>(l.bias.size()));
        push_u32(out, static_cast<uint32_t>(d.out_elems()));
        push_u32(out, 0);
    }
    for (const Layer& l : m.layers) {
        for (uint16_t idx : l.retained_idx) push_u16(out, idx);
        for (Q15 w : l.weights) push_u16(out, static_cast<uint16_t>(w.raw));
        for (Q15 b : l.bias) push_u16(out, static_cast<uint16_t>(b.raw));
    }
    return out;
}

Model deserialize(const std::vector<uint8_t>& bytes, size_t fram_capacity) {
    Reader r{bytes};
    r.need(4);
    if (bytes[0] != 'E' || bytes[1] != 'H' || bytes[2] != 'D' || bytes[3] != 'L')
        throw BadMagic("not an EHDL model file");
    r.pos = 4;
    const uint16_t version = r.u16();
    if (version != kModelFormatVersion)
        throw VersionMismatch("file version " + std::to_string(version));
    const uint16_t nlayers = r.u16();

    Model m;
    std::vector<std::pair<uint32_t, uint32_t>> declared;  // (weights, bias)
    for (uint16_t i = 0; i < nlayers; ++i) {
        Layer l;
        LayerDesc& d = l.desc;
        const uint8_t kind = r.u8();
        if (kind > static_cast<uint8_t>(LayerKind::Relu))
            throw ShapeArithmeticMismatch("unknown layer kind " + std::to_string(kind));
        d.kind = static_cast<LayerKind>(kind);
        const uint8_t flags = r.u8();
        d.freq_domain = flags & 1;
        d.pruned = flags & 2;
        d.k = r.u16();
        d.out_ch = r.u16();
        d.in_ch = r.u16();
        d.kh = r.u16();
        d.kw = r.u16();
        d.in_h = r.u16();
        d.in_w = r.u16();
        d.retained = r.u16();
        r.u16();
        const uint32_t wc = r.u32();
        const uint32_t bc = r.u32();
        const uint32_t acts = r.u32();
        r.u32();
        d.validate();
        if (wc != d.weight_count()) throw ShapeArithmeticMismatch("declared weight count");
        if (bc != 0 && bc != d.bias_count()) throw ShapeArithmeticMismatch("declared bias count");
        if (acts != d.out_elems()) throw ShapeArithmeticMismatch("declared activation size");
        declared.emplace_back(wc, bc);
        m.layers.push_back(std::move(l));
    }
    for (uint16_t i = 0; i < nlayers; ++i) {
        Layer& l = m.layers[i];
        if (l.desc.pruned) {
            l.retained_idx.resize(l.desc.retained);
            for (auto& idx : l.retained_idx) idx = r.u16();
        }
        l.weights.resize(declared[i].first);
        for (auto& w : l.weights) w = Q15::from_raw(static_cast<int16_t>(r.u16()));
        l.bias.resize(declared[i].second);
        for (auto& b : l.bias) b = Q15::from_raw(static_cast<int16_t>(r.u16()));
    }
    if (r.pos != bytes.size()) throw TruncatedBlob("trailing bytes after blobs");
    if (bytes.size() > fram_capacity)
        throw ExceedsFram(std::to_string(bytes.size()) + " bytes vs capacity " +
                          std::to_string(fram_capacity));
    m.validate();
    return m;
}

void save_model(const Model& m, const std::string& path) {
    const std::vector<uint8_t> bytes = serialize(m);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Model load_model(const std::string& path, size_t fram_capacity) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes, fram_capacity);
}

CompressionRow compression_stats(const LayerDesc& d, size_t bytes_per_param) {
    CompressionRow row;
    switch (d.kind) {
        case LayerKind::FcBcm:
            row.layer = "fc_bcm " + std::to_string(d.rows()) + "x" + std::to_string(d.cols());
            row.original_bytes = d.rows() * d.cols() * bytes_per_param;
            row.compressed_bytes = row.original_bytes / d.k;
            break;
        case LayerKind::FcDense:
            row.layer = "fc " + std::to_string(d.rows()) + "x" + std::to_string(d.cols());
            row.original_bytes = d.rows() * d.cols() * bytes_per_param;
            row.compressed_bytes = row.original_bytes;
            break;
        case LayerKind::Conv: {
            row.layer = "conv " + std::to_string(d.out_ch) + "x" + std::to_string(d.in_ch) + "x" +
                        std::to_string(d.kh) + "x" + std::to_string(d.kw);
            const size_t per_filter = static_cast<size_t>(d.in_ch) * d.kh * d.kw * bytes_per_param;
            row.original_bytes = d.out_ch * per_filter;
            row.compressed_bytes = d.retained * per_filter;
            break;
        }
        default:
            row.layer = "(no parameters)";
            return row;
    }
    row.reduction_pct =
        100.0 * (1.0 - static_cast<double>(row.compressed_bytes) /
                           static_cast<double>(row.original_bytes));
    return row;
}

std::vector<CompressionRow> compression_report(const Model& m, size_t bytes_per_param) {
    std::vector<CompressionRow> rows;
    for (const Layer& l : m.layers)
        if (l.desc.kind == LayerKind::Conv || l.desc.kind == LayerKind::FcDense ||
            l.desc.kind == LayerKind::FcBcm)
            rows.push_back(compression_stats(l.desc, bytes_per_param));
    return rows;
}

FramPlan plan_fram(const Model& m) {
    FramPlan plan;
    const std::vector<uint8_t> image = serialize(m);
    plan.model_bytes = image.size();

    // Blob element offsets inside the serialized image.
    size_t elem = (8 + m.layers.size() * kLayerRecordBytes) / 2;
    for (const Layer& l : m.layers) {
        plan.layer_ridx_elem.push_back(elem);
        elem += l.retained_idx.size();
        plan.layer_weight_elem.push_back(elem);
        elem += l.weights.size();
        plan.layer_bias_elem.push_back(elem);
        elem += l.bias.size();
    }

    size_t cursor = (plan.model_bytes + 1) / 2;  // element cursor after the image
    plan.input_elem = cursor;
    cursor += m.input_elems();
    plan.buf_elems = m.max_activation_elems();
    plan.buf_a_elem = cursor;
    cursor += plan.buf_elems;
    plan.buf_b_elem = cursor;
    cursor += plan.buf_elems;

    const size_t maxk = m.max_bcm_block();
    plan.scratch_x_elem = cursor;
    cursor += 2 * maxk;
    plan.scratch_w_elem = cursor;
    cursor += 2 * maxk;
    plan.scratch_p_elem = cursor;
    cursor += 2 * maxk;
    plan.scratch_r_elem = cursor;
    cursor += maxk;

    plan.record_byte_off = cursor * 2;
    plan.total_bytes = plan.record_byte_off + 2 * 48;  // two record slots
    return plan;
}

size_t layer_sram_elems(const LayerDesc& d) {
    switch (d.kind) {
        case LayerKind::Conv:
            return 2 * static_cast<size_t>(d.in_ch) * d.kh * d.kw;  // window + kernel
        case LayerKind::FcDense:
            return 2 * d.cols();  // input vector + one weight row
        case LayerKind::FcBcm:
            return 6 * static_cast<size_t>(d.k);  // two complex buffers + real staging + merge
        default:
            return 0;  // CPU path, no staging
    }
}

ResourceFitReport validate_resource_fit(const Model& m, size_t fram_capacity,
                                        size_t sram_capacity) {
    ResourceFitReport rep;
    rep.fram_capacity = fram_capacity;
    rep.sram_capacity = sram_capacity;
    try {
        m.validate();
    } catch (const std::exception& e) {
        rep.failures.push_back(e.what());
        return rep;
    }
    const FramPlan plan = plan_fram(m);
    rep.fram_needed = plan.total_bytes;
    if (rep.fram_needed > fram_capacity)
        rep.failures.push_back("model + buffers need " + std::to_string(rep.fram_needed) +
                               " bytes of FRAM, capacity " + std::to_string(fram_capacity));
    for (const Layer& l : m.layers) {
        rep.sram_needed = std::max(rep.sram_needed, layer_sram_elems(l.desc) * 2);
        if (l.desc.kind == LayerKind::FcBcm && l.desc.k > kFftMaxLen)
            rep.failures.push_back("bcm block " + std::to_string(l.desc.k) +
                                   " exceeds accelerator fft range");
        if (l.desc.kind == LayerKind::FcBcm && l.desc.k < kFftMinLen)
            rep.failures.push_back("bcm block " + std::to_string(l.desc.k) +
                                   " below accelerator fft range");
    }
    if (rep.sram_needed > sram_capacity)
        rep.failures.push_back("staging needs " + std::to_string(rep.sram_needed) +
                               " bytes of SRAM, capacity " + std::to_string(sram_capacity));
    rep.ok = rep.failures.empty();
    return rep;
}

}  // namespace ehdl
