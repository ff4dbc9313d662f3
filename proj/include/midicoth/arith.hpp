#ifndef MIDICOTH_ARITH_HPP
#define MIDICOTH_ARITH_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "midicoth/distribution.hpp"

namespace midicoth {

// MSB-first bit sink backed by a growable byte buffer.
class BitWriter {
public:
    void put(uint32_t bit) {
        acc_ = static_cast<uint8_t>((acc_ << 1) | (bit & 1u));
        if (++fill_ == 8) {
            bytes_.push_back(acc_);
            acc_ = 0;
            fill_ = 0;
        }
        ++bit_count_;
    }

    // Pads the final partial byte with zeros.
    std::vector<uint8_t> take() {
        if (fill_ > 0) {
            bytes_.push_back(static_cast<uint8_t>(acc_ << (8 - fill_)));
            acc_ = 0;
            fill_ = 0;
        }
        return std::move(bytes_);
    }

    uint64_t bit_count() const { return bit_count_; }

private:
    std::vector<uint8_t> bytes_;
    uint8_t acc_ = 0;
    uint32_t fill_ = 0;
    uint64_t bit_count_ = 0;
};

// MSB-first bit source. Reads past the end yield zero bits; a legitimate
// stream never looks more than ~40 bits beyond the payload (value-register
// lookahead plus byte padding), so a larger overrun means the payload was
// truncated and decoding raises a corruption error.
class BitReader {
public:
    explicit BitReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    uint32_t get();

private:
    std::span<const uint8_t> bytes_;
    size_t pos_ = 0;
    uint32_t fill_ = 0;
    uint8_t acc_ = 0;
    uint64_t overrun_ = 0;
};

// 32-bit arithmetic coder after Witten/Neal/Cleary, driven by a fresh
// cumulative frequency table per symbol. E1/E2 emit settled leading bits;
// E3 near-half straddles are deferred through the pending-bit counter.
class ArithEncoder {
public:
    void encode(const CumFreqTable& t, uint8_t symbol);

    // Emits the two disambiguating flush bits (plus any pending E3 bits)
    // and returns the byte-padded payload.
    std::vector<uint8_t> finish();

    uint64_t bits_emitted() const { return out_.bit_count(); }

private:
    void emit(uint32_t bit) {
        out_.put(bit);
        for (; pending_ > 0; --pending_) out_.put(bit ^ 1u);
    }

    uint32_t low_ = 0;
    uint32_t high_ = 0xFFFFFFFFu;
    uint64_t pending_ = 0;
    BitWriter out_;
};

class ArithDecoder {
public:
    explicit ArithDecoder(std::span<const uint8_t> payload);

    uint8_t decode(const CumFreqTable& t);

private:
    uint32_t low_ = 0;
    uint32_t high_ = 0xFFFFFFFFu;
    uint32_t value_ = 0;
    BitReader in_;
};

} // namespace midicoth

#endif
