#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehdl/errors.hpp"
#include "ehdl/fxp.hpp"

namespace ehdl {

enum class LayerKind : uint8_t { Conv, FcDense, FcBcm, MaxPool, Relu };

// One layer of the (linear) layer chain. Convolutions are stride-1/valid;
// pooling is 2x2/2. FC shapes are stored as (rows = outputs, cols = inputs);
// an FC_BCM layer keeps k taps per circulant block, p*q blocks in total.
struct LayerDesc {
    LayerKind kind = LayerKind::Relu;
    uint16_t k = 0;          // circulant block size (FC_BCM)
    uint16_t out_ch = 0;     // conv filters / FC rows (outputs)
    uint16_t in_ch = 0;      // conv input channels / FC cols (inputs)
    uint16_t kh = 0;
    uint16_t kw = 0;
    uint16_t in_h = 0;       // spatial input (CONV / MAXPOOL)
    uint16_t in_w = 0;
    uint16_t retained = 0;   // retained conv filters (== out_ch when unpruned)
    bool freq_domain = false;  // FC_BCM blob holds precomputed block spectra
    bool pruned = false;       // CONV blob holds a retained-index list

    size_t out_h() const { return kind == LayerKind::MaxPool ? in_h / 2 : in_h - kh + 1; }
    size_t out_w() const { return kind == LayerKind::MaxPool ? in_w / 2 : in_w - kw + 1; }
    size_t rows() const { return out_ch; }
    size_t cols() const { return in_ch; }
    size_t p() const { return k ? rows() / k : 0; }
    size_t q() const { return k ? cols() / k : 0; }

    size_t in_elems() const;
    size_t out_elems() const;
    size_t weight_count() const;   // Q15 elements in the weight blob
    size_t bias_count() const;
    size_t param_count() const;    // logical parameters (taps + bias), pruning applied

    void validate() const;  // throws ShapeArithmeticMismatch / ShapeMismatch
};

struct Layer {
    LayerDesc desc;
    std::vector<uint16_t> retained_idx;  // sorted filter ids, pruned CONV only
    std::vector<Q15> weights;
    std::vector<Q15> bias;
};

struct Model {
    std::vector<Layer> layers;

    void validate() const;               // per-layer shape checks + chain consistency
    size_t input_elems() const { return layers.empty() ? 0 : layers.front().desc.in_elems(); }
    size_t output_elems() const { return layers.empty() ? 0 : layers.back().desc.out_elems(); }
    size_t max_activation_elems() const;  // max(L_i) over inputs and outputs
    size_t max_bcm_block() const;
};

// ------------------------------------------------------------------
// Binary container. Magic "EHDL", version u16, layer count u16, then one
// 36-byte descriptor per layer, then per-layer blobs (retained-index list,
// weights, bias), all little-endian.
// ------------------------------------------------------------------

constexpr uint16_t kModelFormatVersion = 1;
constexpr size_t kLayerRecordBytes = 36;

std::vector<uint8_t> serialize(const Model& m);
Model deserialize(const std::vector<uint8_t>& bytes, size_t fram_capacity = 256 * 1024);

void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path, size_t fram_capacity = 256 * 1024);

// ------------------------------------------------------------------
// Compression accounting.
// ------------------------------------------------------------------

struct CompressionRow {
    std::string layer;
    size_t original_bytes = 0;
    size_t compressed_bytes = 0;
    double reduction_pct = 0.0;  // 100 * (1 - compressed/original)
};

CompressionRow compression_stats(const LayerDesc& d, size_t bytes_per_param);
std::vector<CompressionRow> compression_report(const Model& m, size_t bytes_per_param);

// ------------------------------------------------------------------
// FRAM placement. Element offsets (Q15 slots) for everything the engine
// keeps in non-volatile memory: the serialized model image, the input slot,
// the two activation buffers, the in-flight block scratch slots and the two
// progress-record slots.
// ------------------------------------------------------------------

struct FramPlan {
    size_t model_bytes = 0;
    std::vector<size_t> layer_weight_elem;  // element offset of each layer's blob data
    std::vector<size_t> layer_bias_elem;
    std::vector<size_t> layer_ridx_elem;    // retained-index list offset (u16 slots)
    size_t input_elem = 0;
    size_t buf_a_elem = 0;
    size_t buf_b_elem = 0;
    size_t buf_elems = 0;       // capacity of each activation buffer, max(L_i)
    size_t scratch_x_elem = 0;  // staged spectrum of x (2k slots)
    size_t scratch_w_elem = 0;
    size_t scratch_p_elem = 0;  // product spectrum
    size_t scratch_r_elem = 0;  // merged real block result (k slots)
    size_t record_byte_off = 0; // two fixed-size record slots
    size_t total_bytes = 0;
};

FramPlan plan_fram(const Model& m);

// SRAM staging footprint of one layer under the engine's plan, in Q15 slots.
size_t layer_sram_elems(const LayerDesc& d);

struct ResourceFitReport {
    bool ok = false;
    size_t fram_needed = 0;
    size_t fram_capacity = 0;
    size_t sram_needed = 0;
    size_t sram_capacity = 0;
    std::vector<std::string> failures;
};

ResourceFitReport validate_resource_fit(const Model& m, size_t fram_capacity = 256 * 1024,
                                        size_t sram_capacity = 8 * 1024);

}  // namespace ehdl
