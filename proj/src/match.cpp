#include "midicoth/match.hpp"

#include <cassert>

#include "midicoth/hash.hpp"

namespace midicoth {

MatchModel::MatchModel() {
    for (int i = 0; i < kNumLengths; ++i) {
        tables_.emplace_back(size_t{1} << 16);
    }
}

std::optional<MatchPrediction> MatchModel::predict(
    std::span<const uint8_t> history) const {
    for (int i = 0; i < kNumLengths; ++i) {
        size_t len = static_cast<size_t>(kLengths[i]);
        if (history.size() < len) continue;
        uint64_t key = fnv1a(history.data() + history.size() - len, len);
        const uint64_t* pos = tables_[i].find(key);
        if (!pos) continue;
        assert(*pos < history.size());
        return MatchPrediction{history[*pos],
                               match_weight(kBaseConfidence[i], streak_)};
    }
    return std::nullopt;
}

void MatchModel::blend(Distribution& d, std::span<const uint8_t> history) {
    auto pred = predict(history);
    if (!pred) {
        last_predicted_ = -1;
        return;
    }
    double w = pred->weight;
    double w_m = w * 0.85;
    if (w_m > 0.95) w_m = 0.95;
    double off = w_m * (1.0 - w) / 255.0;
    for (int s = 0; s < 256; ++s) {
        d.p[s] = (1.0 - w_m) * d.p[s] + off;
    }
    d.p[pred->predicted] += w_m * w - off;
    last_predicted_ = pred->predicted;
}

void MatchModel::update(std::span<const uint8_t> history, uint8_t observed) {
    streak_ = (last_predicted_ == observed) ? streak_ + 1 : 0;
    // The context ending at the current position will be followed by the
    // byte about to be appended at index history.size().
    for (int i = 0; i < kNumLengths; ++i) {
        size_t len = static_cast<size_t>(kLengths[i]);
        if (history.size() < len) continue;
        uint64_t key = fnv1a(history.data() + history.size() - len, len);
        tables_[i].find_or_create(key) = history.size();
    }
}

uint64_t MatchModel::digest(uint64_t h) const {
    h = fnv1a_u64(streak_, h);
    h = fnv1a_u64(static_cast<uint64_t>(last_predicted_ + 1), h);
    for (const auto& table : tables_) {
        table.for_each([&](uint64_t key, const uint64_t& pos) {
            h = fnv1a_u64(key, h);
            h = fnv1a_u64(pos, h);
        });
    }
    return h;
}

} // namespace midicoth
