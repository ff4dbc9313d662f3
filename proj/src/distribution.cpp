#include "midicoth/distribution.hpp"

#include <cmath>

#include "midicoth/error.hpp"

namespace midicoth {

void normalize(Distribution& d) {
    double sum = 0.0;
    bool finite = true;
    for (double& v : d.p) {
        finite = finite && std::isfinite(v) && v >= 0.0;
        if (v < kFloorProb) v = kFloorProb;
        sum += v;
    }
    MDC_CHECK(finite && sum > 0.0, "normalize: all-zero or non-finite input");

    double inv = 1.0 / sum;
    for (double& v : d.p) v *= inv;

    // Division can land a hair under the floor; clamp back up and take the
    // compensating mass out of the largest entry so the sum stays exact.
    double added = 0.0;
    size_t argmax = 0;
    for (size_t i = 0; i < 256; ++i) {
        if (d.p[i] > d.p[argmax]) argmax = i;
        if (d.p[i] < kFloorProb) {
            added += kFloorProb - d.p[i];
            d.p[i] = kFloorProb;
        }
    }
    if (added > 0.0) d.p[argmax] -= added;
}

CumFreqTable probs_to_cumfreqs(const Distribution& d) {
    std::array<uint32_t, 256> f;
    int64_t total = 0;
    for (size_t i = 0; i < 256; ++i) {
        double scaled = std::floor(d.p[i] * kFreqScale + 0.5); // round half up
        uint32_t fi = scaled < 1.0 ? 1u : static_cast<uint32_t>(scaled);
        f[i] = fi;
        total += fi;
    }

    // Absorb the rounding discrepancy into the largest-frequency symbols.
    // Near-uniform inputs can round up everywhere, so one symbol may not
    // cover the whole excess; walk down the largest entries until it does.
    while (total != kFreqScale) {
        size_t argmax = 0;
        for (size_t i = 1; i < 256; ++i) {
            if (f[i] > f[argmax]) argmax = i;
        }
        if (total < kFreqScale) {
            f[argmax] += static_cast<uint32_t>(kFreqScale - total);
            total = kFreqScale;
        } else {
            uint32_t room = f[argmax] - 1;
            uint32_t cut = total - kFreqScale > room
                               ? room
                               : static_cast<uint32_t>(total - kFreqScale);
            f[argmax] -= cut;
            total -= cut;
            MDC_CHECK(cut > 0, "probs_to_cumfreqs: cannot repair total");
        }
    }

    CumFreqTable t;
    t.cum[0] = 0;
    for (size_t i = 0; i < 256; ++i) t.cum[i + 1] = t.cum[i] + f[i];
    return t;
}

double entropy_bits(const Distribution& d) {
    double h = 0.0;
    for (double v : d.p) {
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

double quantized_cross_entropy_bits(const Distribution& d, const CumFreqTable& t) {
    double h = 0.0;
    for (size_t i = 0; i < 256; ++i) {
        double q = static_cast<double>(t.freq(static_cast<uint8_t>(i))) / kFreqScale;
        h -= d.p[i] * std::log2(q);
    }
    return h;
}

} // namespace midicoth
