#include "midicoth/arith.hpp"

#include <algorithm>
#include <cassert>

#include "midicoth/error.hpp"

namespace midicoth {

namespace {
constexpr uint32_t kHalf = 0x80000000u;
constexpr uint32_t kQuarter = 0x40000000u;
constexpr uint32_t kThreeQuarters = 0xC0000000u;

// Decoder may legitimately read zero padding: 32 bits of value-register
// lookahead plus up to 7 bits of byte padding.
constexpr uint64_t kMaxOverrunBits = 64;
} // namespace

uint32_t BitReader::get() {
    if (fill_ == 0) {
        if (pos_ < bytes_.size()) {
            acc_ = bytes_[pos_++];
        } else {
            acc_ = 0;
            overrun_ += 8;
            if (overrun_ > kMaxOverrunBits) {
                throw CodecError(CodecError::Kind::Corrupt,
                                 "compressed payload exhausted");
            }
        }
        fill_ = 8;
    }
    --fill_;
    return (acc_ >> fill_) & 1u;
}

void ArithEncoder::encode(const CumFreqTable& t, uint8_t symbol) {
    uint64_t range = static_cast<uint64_t>(high_ - low_) + 1;
    high_ = low_ + static_cast<uint32_t>(range * t.cum[symbol + 1] / kFreqScale) - 1;
    low_ = low_ + static_cast<uint32_t>(range * t.cum[symbol] / kFreqScale);

    for (;;) {
        if (high_ < kHalf) {
            emit(0); // E1
        } else if (low_ >= kHalf) {
            emit(1); // E2
            low_ -= kHalf;
            high_ -= kHalf;
        } else if (low_ >= kQuarter && high_ < kThreeQuarters) {
            ++pending_; // E3
            low_ -= kQuarter;
            high_ -= kQuarter;
        } else {
            break;
        }
        low_ <<= 1;
        high_ = (high_ << 1) | 1u;
    }
    // Minimum frequency 1 at scale 16384 against a post-renorm range of at
    // least 2^30 leaves every symbol a nonempty subinterval.
    assert(high_ - low_ >= kFreqScale);
}

std::vector<uint8_t> ArithEncoder::finish() {
    // One quarter-interval marker disambiguates the final range; the decoder
    // fills the rest with zero padding.
    ++pending_;
    emit(low_ >= kQuarter ? 1u : 0u);
    return out_.take();
}

ArithDecoder::ArithDecoder(std::span<const uint8_t> payload) : in_(payload) {
    for (int i = 0; i < 32; ++i) value_ = (value_ << 1) | in_.get();
}

uint8_t ArithDecoder::decode(const CumFreqTable& t) {
    uint64_t range = static_cast<uint64_t>(high_ - low_) + 1;
    uint64_t target =
        ((static_cast<uint64_t>(value_ - low_) + 1) * kFreqScale - 1) / range;

    // cum is strictly increasing, so the symbol is the last s with
    // cum[s] <= target.
    const uint32_t* first = t.cum.data();
    const uint32_t* it = std::upper_bound(first, first + 257, static_cast<uint32_t>(target));
    uint8_t symbol = static_cast<uint8_t>(it - first - 1);

    high_ = low_ + static_cast<uint32_t>(range * t.cum[symbol + 1] / kFreqScale) - 1;
    low_ = low_ + static_cast<uint32_t>(range * t.cum[symbol] / kFreqScale);

    for (;;) {
        if (high_ < kHalf) {
            // E1
        } else if (low_ >= kHalf) {
            low_ -= kHalf; // E2
            high_ -= kHalf;
            value_ -= kHalf;
        } else if (low_ >= kQuarter && high_ < kThreeQuarters) {
            low_ -= kQuarter; // E3
            high_ -= kQuarter;
            value_ -= kQuarter;
        } else {
            break;
        }
        low_ <<= 1;
        high_ = (high_ << 1) | 1u;
        value_ = (value_ << 1) | in_.get();
    }
    assert(low_ <= value_ && value_ <= high_);
    return symbol;
}

} // namespace midicoth
