#include "midicoth/highctx.hpp"

#include "midicoth/hash.hpp"

namespace midicoth {

HighCtxModel::HighCtxModel() {
    for (int k = kMinOrder; k <= kMaxOrder; ++k) {
        tables_.emplace_back(size_t{1} << 16);
    }
}

const HighCtxModel::Entry* HighCtxModel::find(std::span<const uint8_t> history,
                                              int order) const {
    if (history.size() < static_cast<size_t>(order)) return nullptr;
    uint64_t key = fnv1a(history.data() + history.size() - order,
                         static_cast<size_t>(order));
    return tables_[order - kMinOrder].find(key);
}

std::optional<HighCtxPrediction> HighCtxModel::predict(
    std::span<const uint8_t> history) const {
    for (int k = kMaxOrder; k >= kMinOrder; --k) {
        const Entry* e = find(history, k);
        if (!e || e->total < kMinTotal) continue;

        double n = static_cast<double>(e->total);
        double denom = n + 256.0 * kSmoothing;
        HighCtxPrediction pred;
        pred.dist.p.fill(kSmoothing / denom);
        for (const auto& [sym, c] : e->counts) {
            pred.dist.p[sym] = (static_cast<double>(c) + kSmoothing) / denom;
        }
        pred.confidence = confidence(e->total, k);
        return pred;
    }
    return std::nullopt;
}

void HighCtxModel::blend(Distribution& d,
                         std::span<const uint8_t> history) const {
    auto pred = predict(history);
    if (!pred) return;
    double w = pred->confidence * 2.0;
    if (w > 0.60) w = 0.60;
    for (int s = 0; s < 256; ++s) {
        d.p[s] = (1.0 - w) * d.p[s] + w * pred->dist.p[s];
    }
}

void HighCtxModel::update(std::span<const uint8_t> history, uint8_t observed) {
    for (int k = kMinOrder; k <= kMaxOrder; ++k) {
        if (history.size() < static_cast<size_t>(k)) break;
        uint64_t key = fnv1a(history.data() + history.size() - k,
                             static_cast<size_t>(k));
        Entry& e = tables_[k - kMinOrder].find_or_create(key);

        auto it = e.counts.begin();
        while (it != e.counts.end() && it->first < observed) ++it;
        if (it != e.counts.end() && it->first == observed) {
            ++it->second;
        } else {
            it = e.counts.insert(it, {observed, 1u});
        }
        ++e.total;

        if (it->second == 65535) {
            // Saturation: halve every count (floor), drop emptied symbols.
            uint32_t total = 0;
            auto out = e.counts.begin();
            for (auto& [sym, c] : e.counts) {
                uint16_t halved = static_cast<uint16_t>(c >> 1);
                if (halved > 0) {
                    *out++ = {sym, halved};
                    total += halved;
                }
            }
            e.counts.erase(out, e.counts.end());
            e.total = total;
        }
    }
}

uint32_t HighCtxModel::count(std::span<const uint8_t> history, int order,
                             uint8_t s) const {
    const Entry* e = find(history, order);
    if (!e) return 0;
    for (const auto& [sym, c] : e->counts) {
        if (sym == s) return c;
    }
    return 0;
}

uint32_t HighCtxModel::total(std::span<const uint8_t> history, int order) const {
    const Entry* e = find(history, order);
    return e ? e->total : 0;
}

uint64_t HighCtxModel::digest(uint64_t h) const {
    for (const auto& table : tables_) {
        table.for_each([&](uint64_t key, const Entry& e) {
            h = fnv1a_u64(key, h);
            h = fnv1a_u64(e.total, h);
            for (const auto& [sym, c] : e.counts) {
                h = fnv1a_byte(sym, h);
                h = fnv1a_u64(c, h);
            }
        });
    }
    return h;
}

} // namespace midicoth
