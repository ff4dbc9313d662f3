#include "midicoth/codec.hpp"

#include <chrono>
#include <cmath>
#include <cstring>

#include "midicoth/error.hpp"
#include "midicoth/hash.hpp"

namespace midicoth {

namespace {
constexpr uint8_t kMagic[4] = {'M', 'D', 'C', 'T'};
} // namespace

std::vector<uint8_t> encode_header(const PipelineConfig& cfg, uint64_t length) {
    std::vector<uint8_t> h(kHeaderSize);
    std::memcpy(h.data(), kMagic, 4);
    h[4] = kFormatVersion;
    uint8_t flags = 0;
    flags |= cfg.match ? 0x01 : 0;
    flags |= cfg.word ? 0x02 : 0;
    flags |= cfg.highctx ? 0x04 : 0;
    flags |= cfg.tweedie ? 0x08 : 0;
    flags |= static_cast<uint8_t>((cfg.tweedie_steps - 1) & 3) << 4;
    h[5] = flags;
    for (int i = 0; i < 8; ++i) {
        h[6 + i] = static_cast<uint8_t>(length >> (8 * i));
    }
    return h;
}

ContainerInfo parse_header(std::span<const uint8_t> container) {
    if (container.size() < kHeaderSize ||
        std::memcmp(container.data(), kMagic, 4) != 0) {
        throw CodecError(CodecError::Kind::BadFormat, "not a midicoth container");
    }
    if (container[4] != kFormatVersion) {
        throw CodecError(CodecError::Kind::BadFormat,
                         "unsupported container version");
    }
    uint8_t flags = container[5];
    if (flags & 0xC0) {
        throw CodecError(CodecError::Kind::BadFormat, "reserved flag bits set");
    }
    ContainerInfo info;
    info.cfg.match = flags & 0x01;
    info.cfg.word = flags & 0x02;
    info.cfg.highctx = flags & 0x04;
    info.cfg.tweedie = flags & 0x08;
    info.cfg.tweedie_steps = ((flags >> 4) & 3) + 1;
    info.original_length = 0;
    for (int i = 0; i < 8; ++i) {
        info.original_length |= static_cast<uint64_t>(container[6 + i]) << (8 * i);
    }
    info.payload_offset = kHeaderSize;
    return info;
}

Pipeline::Pipeline(const PipelineConfig& cfg)
    : cfg_(cfg), tweedie_(cfg.tweedie_steps) {}

void Pipeline::predict(Distribution& d) {
    ppm_.predict(history_, d, meta_);
    normalize(d);
    if (cfg_.match) match_.blend(d, history_);
    if (cfg_.word) word_.blend(d);
    if (cfg_.highctx) hctx_.blend(d, history_);
    if (cfg_.tweedie) tweedie_.denoise(d, meta_);
    normalize(d);
}

void Pipeline::observe(uint8_t b) {
    ppm_.update(history_, b);
    if (cfg_.match) match_.update(history_, b);
    if (cfg_.word) word_.update(b);
    if (cfg_.highctx) hctx_.update(history_, b);
    if (cfg_.tweedie) tweedie_.record_outcome(b);
    history_.push_back(b);
}

uint64_t Pipeline::state_digest() const {
    uint64_t h = kFnvOffsetBasis;
    h = fnv1a_u64(history_.size(), h);
    h = ppm_.digest(h);
    if (cfg_.match) h = match_.digest(h);
    if (cfg_.word) h = word_.digest(h);
    if (cfg_.highctx) h = hctx_.digest(h);
    if (cfg_.tweedie) h = tweedie_.digest(h);
    return h;
}

void StreamEncoder::push(uint8_t b) {
    Distribution d;
    pipe_.predict(d);
    CumFreqTable t = probs_to_cumfreqs(d);
    model_bits_ -= std::log2(d.p[b]);
    coded_bits_ -= std::log2(static_cast<double>(t.freq(b)) / kFreqScale);
    coder_.encode(t, b);
    pipe_.observe(b);
}

uint8_t StreamDecoder::pull() {
    Distribution d;
    pipe_.predict(d);
    CumFreqTable t = probs_to_cumfreqs(d);
    uint8_t b = coder_.decode(t);
    pipe_.observe(b);
    return b;
}

std::vector<uint8_t> compress(std::span<const uint8_t> input,
                              const PipelineConfig& cfg) {
    StreamEncoder enc(cfg);
    for (uint8_t b : input) enc.push(b);
    std::vector<uint8_t> out = encode_header(cfg, input.size());
    std::vector<uint8_t> payload = enc.finish_payload();
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

std::vector<uint8_t> decompress(std::span<const uint8_t> container) {
    ContainerInfo info = parse_header(container);
    StreamDecoder dec(info.cfg, container.subspan(info.payload_offset));
    std::vector<uint8_t> out;
    out.reserve(info.original_length);
    for (uint64_t i = 0; i < info.original_length; ++i) {
        out.push_back(dec.pull());
    }
    return out;
}

std::vector<CascadeRow> run_cascade(std::span<const uint8_t> input,
                                    int tweedie_steps) {
    struct Step {
        const char* name;
        PipelineConfig cfg;
    };
    const Step steps[] = {
        {"base-ppm", {false, false, false, false, tweedie_steps}},
        {"+match", {true, false, false, false, tweedie_steps}},
        {"+m+word", {true, true, false, false, tweedie_steps}},
        {"+m+w+hctx", {true, true, true, false, tweedie_steps}},
        {"+m+w+h+tweedie", {true, true, true, true, tweedie_steps}},
    };

    std::vector<CascadeRow> rows;
    uint64_t prev_size = 0;
    for (const Step& s : steps) {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<uint8_t> c = compress(input, s.cfg);
        auto t1 = std::chrono::steady_clock::now();

        CascadeRow row;
        row.name = s.name;
        row.cfg = s.cfg;
        row.compressed_size = c.size();
        row.ratio = input.empty()
                        ? 0.0
                        : static_cast<double>(c.size()) /
                              static_cast<double>(input.size());
        row.bpb = row.ratio * 8.0;
        row.marginal_gain =
            prev_size == 0 ? 0.0
                           : (static_cast<double>(prev_size) -
                              static_cast<double>(c.size())) /
                                 static_cast<double>(prev_size);
        row.seconds = std::chrono::duration<double>(t1 - t0).count();
        rows.push_back(row);
        prev_size = c.size();
    }
    return rows;
}

} // namespace midicoth
