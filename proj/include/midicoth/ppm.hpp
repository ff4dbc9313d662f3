#ifndef MIDICOTH_PPM_HPP
#define MIDICOTH_PPM_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "midicoth/distribution.hpp"
#include "midicoth/hashtable.hpp"

namespace midicoth {

// Method C escape probability from d distinct symbols in n real observations.
// Nothing observed means certain escape.
inline double escape_prob(uint64_t distinct, uint64_t real_total) {
    if (real_total == 0) return 1.0;
    return static_cast<double>(distinct) /
           static_cast<double>(real_total + distinct);
}

// One context's statistics. Conceptually every symbol carries a Jeffreys
// pseudo-count of 0.5 (stored total starts at 128); only the integer real
// counts are materialized, keyed by symbol in sorted order.
struct PpmRecord {
    std::vector<std::pair<uint8_t, uint32_t>> counts;
    uint64_t real_total = 0;

    uint32_t real_count(uint8_t s) const {
        for (const auto& [sym, c] : counts) {
            if (sym == s) return c;
            if (sym > s) break;
        }
        return 0;
    }

    double stored_count(uint8_t s) const { return 0.5 + real_count(s); }
    double stored_total() const { return 128.0 + static_cast<double>(real_total); }
    size_t distinct() const { return counts.size(); }

    void increment(uint8_t s) {
        auto it = counts.begin();
        while (it != counts.end() && it->first < s) ++it;
        if (it != counts.end() && it->first == s) {
            ++it->second;
        } else {
            counts.insert(it, {s, 1u});
        }
        ++real_total;
    }
};

// Adaptive order-0..4 context models with Jeffreys prior, Method C escape
// and PPMC exclusion. The fallback chain walks from the highest matching
// order down, excluding symbols already credited above, and spreads the
// leftover escape mass uniformly over symbols never seen anywhere.
class PpmModel {
public:
    static constexpr int kMaxOrder = 4;

    PpmModel();

    // history = all previously coded bytes. Fills a distribution summing to
    // one (up to the degenerate everything-excluded case, which the caller's
    // normalize pass absorbs) and reports the highest matched context's
    // stored count and order, or (0, -1) when nothing matched.
    void predict(std::span<const uint8_t> history, Distribution& out,
                 PredictionMeta& meta) const;

    // Called once per coded byte, after predict, with the identical history.
    void update(std::span<const uint8_t> history, uint8_t observed);

    static uint64_t context_hash(std::span<const uint8_t> history, int order);

    const PpmRecord* record(std::span<const uint8_t> history, int order) const;
    const HashTable<PpmRecord>& table(int order) const { return tables_[order]; }

    uint64_t digest(uint64_t h) const;

private:
    std::vector<HashTable<PpmRecord>> tables_; // one per order 0..4
};

} // namespace midicoth

#endif
