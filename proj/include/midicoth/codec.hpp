#ifndef MIDICOTH_CODEC_HPP
#define MIDICOTH_CODEC_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "midicoth/arith.hpp"
#include "midicoth/distribution.hpp"
#include "midicoth/highctx.hpp"
#include "midicoth/match.hpp"
#include "midicoth/ppm.hpp"
#include "midicoth/tweedie.hpp"
#include "midicoth/word.hpp"

namespace midicoth {

struct PipelineConfig {
    bool match = true;
    bool word = true;
    bool highctx = true;
    bool tweedie = true;
    int tweedie_steps = 3; // 1..4

    static PipelineConfig base_ppm() { return {false, false, false, false, 3}; }
};

// Container layout: "MDCT", version, flags, original length (LE), payload.
// Flags carry the layer enables (bits 0-3) and tweedie_steps-1 (bits 4-5) so
// decompression needs no side channel.
inline constexpr size_t kHeaderSize = 14;
inline constexpr uint8_t kFormatVersion = 1;

std::vector<uint8_t> encode_header(const PipelineConfig& cfg, uint64_t length);

struct ContainerInfo {
    PipelineConfig cfg;
    uint64_t original_length;
    size_t payload_offset; // == kHeaderSize
};

// Throws CodecError(BadFormat) on unknown magic/version or reserved bits.
ContainerInfo parse_header(std::span<const uint8_t> container);

// The model stack shared verbatim by both coder directions; every
// probability is produced by one code path with a fixed evaluation order,
// which is what makes encoder and decoder bit-exact.
class Pipeline {
public:
    explicit Pipeline(const PipelineConfig& cfg);

    // Full prediction for the next byte: PPM, normalize, the three blend
    // layers, denoising, final normalize.
    void predict(Distribution& d);

    // Update every enabled model with the byte just coded.
    void observe(uint8_t b);

    const PipelineConfig& config() const { return cfg_; }
    uint64_t bytes_coded() const { return history_.size(); }
    const PredictionMeta& last_meta() const { return meta_; }
    TweedieDenoiser& denoiser() { return tweedie_; }

    // Rolling hash of all model state; equal between encoder and decoder
    // after coding the same prefix.
    uint64_t state_digest() const;

private:
    PipelineConfig cfg_;
    PpmModel ppm_;
    MatchModel match_;
    WordModel word_;
    HighCtxModel hctx_;
    TweedieDenoiser tweedie_;
    std::vector<uint8_t> history_;
    PredictionMeta meta_;
};

class StreamEncoder {
public:
    explicit StreamEncoder(const PipelineConfig& cfg) : pipe_(cfg) {}

    void push(uint8_t b);
    std::vector<uint8_t> finish_payload() { return coder_.finish(); }

    Pipeline& pipeline() { return pipe_; }
    uint64_t bits_emitted() const { return coder_.bits_emitted(); }

    // Accumulated -log2 costs of the actual symbols under the model and its
    // quantization, for the coder-overhead diagnostic.
    double model_cost_bits() const { return model_bits_; }
    double coded_cost_bits() const { return coded_bits_; }

private:
    Pipeline pipe_;
    ArithEncoder coder_;
    double model_bits_ = 0.0;
    double coded_bits_ = 0.0;
};

class StreamDecoder {
public:
    StreamDecoder(const PipelineConfig& cfg, std::span<const uint8_t> payload)
        : pipe_(cfg), coder_(payload) {}

    uint8_t pull();

    Pipeline& pipeline() { return pipe_; }

private:
    Pipeline pipe_;
    ArithDecoder coder_;
};

std::vector<uint8_t> compress(std::span<const uint8_t> input,
                              const PipelineConfig& cfg = {});

std::vector<uint8_t> decompress(std::span<const uint8_t> container);

// Ablation cascade: base PPM, then +match, +word, +highctx, +tweedie.
struct CascadeRow {
    std::string name;
    PipelineConfig cfg;
    uint64_t compressed_size = 0;
    double ratio = 0.0;          // compressed / original
    double bpb = 0.0;            // bits per input byte
    double marginal_gain = 0.0;  // improvement over the previous row
    double seconds = 0.0;
};

std::vector<CascadeRow> run_cascade(std::span<const uint8_t> input,
                                    int tweedie_steps = 3);

} // namespace midicoth

#endif
