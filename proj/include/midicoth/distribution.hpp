#ifndef MIDICOTH_DISTRIBUTION_HPP
#define MIDICOTH_DISTRIBUTION_HPP

#include <array>
#include <cstdint>

namespace midicoth {

// Probability floor applied during normalization so no exact zero ever
// reaches the coder. Model blending can underflow even though the count
// prior guarantees nonzero mass.
inline constexpr double kFloorProb = 1e-12;

// Integer frequency scale of the arithmetic coder (14 bits).
inline constexpr uint32_t kFreqScale = 16384;

// Probability distribution over the 256 byte values; the currency passed
// between pipeline layers.
struct Distribution {
    std::array<double, 256> p{};

    double& operator[](size_t i) { return p[i]; }
    double operator[](size_t i) const { return p[i]; }

    static Distribution uniform() {
        Distribution d;
        d.p.fill(1.0 / 256.0);
        return d;
    }

    double sum() const {
        double s = 0.0;
        for (double v : p) s += v;
        return s;
    }

    double max() const {
        double m = p[0];
        for (double v : p) {
            if (v > m) m = v;
        }
        return m;
    }
};

// Confidence and matched order accompanying each base prediction into the
// denoising layer. order == -1 means no context matched anywhere.
struct PredictionMeta {
    double confidence = 0.0; // total stored count C of the matched context
    int order = -1;          // matched order in [-1, 8]
};

// Cumulative integer frequencies: cum[0] = 0, cum[256] = kFreqScale,
// strictly increasing (minimum frequency 1 per symbol).
struct CumFreqTable {
    std::array<uint32_t, 257> cum{};

    uint32_t freq(uint8_t s) const { return cum[s + 1] - cum[s]; }
};

// Floors entries at kFloorProb and scales to unit sum. All-zero or
// non-finite input is an internal logic fault, never a stream condition.
void normalize(Distribution& d);

// Quantizes a normalized distribution to integer frequencies
// f(s) = max(1, floor(p[s] * kFreqScale + 0.5)), repairing any rounding
// discrepancy on the largest-frequency symbols so the total is exact.
CumFreqTable probs_to_cumfreqs(const Distribution& d);

// Diagnostics: model entropy and quantized cross-entropy in bits/symbol.
double entropy_bits(const Distribution& d);
double quantized_cross_entropy_bits(const Distribution& d, const CumFreqTable& t);

} // namespace midicoth

#endif
