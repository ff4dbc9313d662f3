#ifndef MIDICOTH_HIGHCTX_HPP
#define MIDICOTH_HIGHCTX_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "midicoth/distribution.hpp"
#include "midicoth/hashtable.hpp"

namespace midicoth {

struct HighCtxPrediction {
    Distribution dist;
    double confidence;
};

// Orders 5-8 aggregate predictor. Kept outside PPM's exclusion chain:
// sparse high-order contexts are blended softly by confidence instead of
// driving hard escapes. Minimal smoothing preserves their sharpness.
class HighCtxModel {
public:
    static constexpr int kMinOrder = 5;
    static constexpr int kMaxOrder = 8;
    static constexpr uint32_t kMinTotal = 4; // first order at or above is used
    static constexpr double kSmoothing = 1e-4;

    HighCtxModel();

    static double confidence(uint32_t total, int order) {
        double n = static_cast<double>(total);
        return (n - 4.0) / (n + 8.0) * (0.4 + 0.1 * (order - kMinOrder));
    }

    std::optional<HighCtxPrediction> predict(std::span<const uint8_t> history) const;

    void blend(Distribution& d, std::span<const uint8_t> history) const;

    void update(std::span<const uint8_t> history, uint8_t observed);

    uint32_t count(std::span<const uint8_t> history, int order, uint8_t s) const;
    uint32_t total(std::span<const uint8_t> history, int order) const;

    uint64_t digest(uint64_t h) const;

private:
    struct Entry {
        std::vector<std::pair<uint8_t, uint16_t>> counts;
        uint32_t total = 0;
    };

    const Entry* find(std::span<const uint8_t> history, int order) const;

    std::vector<HashTable<Entry>> tables_; // orders 5..8
};

} // namespace midicoth

#endif
