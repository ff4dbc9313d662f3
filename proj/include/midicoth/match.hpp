#ifndef MIDICOTH_MATCH_HPP
#define MIDICOTH_MATCH_HPP

#include <cstdint>
#include <optional>
#include <span>

#include "midicoth/distribution.hpp"
#include "midicoth/hashtable.hpp"

namespace midicoth {

struct MatchPrediction {
    uint8_t predicted;
    double weight; // in [0, 0.96]
};

// Long-range repetition predictor: five hashed context lengths locate the
// most recent prior occurrence of the current context and predict the byte
// that followed it, weighted up by the running streak of correct hits.
class MatchModel {
public:
    static constexpr int kNumLengths = 5;
    // Scanned longest-first; the first hit wins.
    static constexpr int kLengths[kNumLengths] = {16, 12, 8, 6, 4};
    // Base confidence per context length, monotone because longer matches
    // are more reliable.
    static constexpr double kBaseConfidence[kNumLengths] = {0.92, 0.82, 0.70,
                                                            0.60, 0.50};

    static double match_weight(double c_base, uint64_t streak) {
        double w = c_base * (0.65 + 0.04 * static_cast<double>(streak));
        return w < 0.96 ? w : 0.96;
    }

    MatchModel();

    std::optional<MatchPrediction> predict(std::span<const uint8_t> history) const;

    // Mixes the match prediction into d and remembers it for streak upkeep.
    void blend(Distribution& d, std::span<const uint8_t> history);

    // Called once per byte after blending, before the byte joins history.
    void update(std::span<const uint8_t> history, uint8_t observed);

    uint64_t streak() const { return streak_; }

    uint64_t digest(uint64_t h) const;

private:
    // Each table maps the hash of an l-byte context to the position of the
    // byte that followed its latest occurrence.
    std::vector<HashTable<uint64_t>> tables_;
    uint64_t streak_ = 0;
    int last_predicted_ = -1; // -1: no prediction at the last position
};

} // namespace midicoth

#endif
