#include "midicoth/word.hpp"

#include <cassert>
#include <span>

#include "midicoth/hash.hpp"

namespace midicoth {

WordModel::WordModel() : bigrams_(size_t{1} << 16), word_freq_(size_t{1} << 16) {
    pool_.emplace_back(); // root
}

uint64_t WordModel::word_hash(std::span<const uint8_t> word) {
    size_t len = word.size() < kMaxWordLen ? word.size() : kMaxWordLen;
    return fnv1a(word.data(), len);
}

void WordModel::bump(std::vector<std::pair<uint8_t, uint32_t>>& counts,
                     uint8_t b) {
    auto it = counts.begin();
    while (it != counts.end() && it->first < b) ++it;
    if (it != counts.end() && it->first == b) {
        ++it->second;
    } else {
        counts.insert(it, {b, 1u});
    }
}

uint32_t WordModel::find_child(uint32_t node, uint8_t letter) const {
    uint32_t c = pool_[node].first_child;
    while (c != kNone && pool_[c].letter != letter) {
        c = pool_[c].next_sibling;
    }
    return c;
}

uint32_t WordModel::walk(size_t* depth_out) const {
    size_t len = current_word_.size() < kMaxWordLen ? current_word_.size()
                                                    : kMaxWordLen;
    uint32_t node = 0;
    size_t depth = 0;
    while (depth < len) {
        uint32_t c = find_child(node, current_word_[depth]);
        if (c == kNone) break;
        node = c;
        ++depth;
    }
    *depth_out = depth;
    return node;
}

uint32_t WordModel::extend_path(uint32_t node, size_t depth) {
    size_t len = current_word_.size() < kMaxWordLen ? current_word_.size()
                                                    : kMaxWordLen;
    while (depth < len) {
        if (pool_.size() >= kNodeBudget) return kNone;
        uint32_t idx = static_cast<uint32_t>(pool_.size());
        TrieNode n;
        n.letter = current_word_[depth];
        n.next_sibling = pool_[node].first_child;
        pool_.push_back(n);
        pool_[node].first_child = idx;
        node = idx;
        ++depth;
    }
    return node;
}

std::optional<WordPrediction> WordModel::predict() {
    cache_ = Cache{};
    cache_.valid = true;

    if (!current_word_.empty()) {
        size_t depth = 0;
        uint32_t node = walk(&depth);
        ++trie_walks_;
        cache_.node = node;
        cache_.depth = depth;
        size_t len = current_word_.size() < kMaxWordLen ? current_word_.size()
                                                        : kMaxWordLen;
        if (depth < len || pool_[node].visits == 0) return std::nullopt;

        const TrieNode& n = pool_[node];
        double v = static_cast<double>(n.visits);
        WordPrediction pred;
        double denom = v + 256.0 * kSmoothing;
        pred.dist.p.fill(kSmoothing / denom);
        for (const auto& [b, c] : n.continuations) {
            pred.dist.p[b] = (static_cast<double>(c) + kSmoothing) / denom;
        }
        pred.confidence = v / (v + 8.0);
        return pred;
    }

    if (has_prev_word_) {
        const BigramEntry* e = bigrams_.find(prev_word_hash_);
        if (e && e->total >= 1) {
            double v = static_cast<double>(e->total);
            WordPrediction pred;
            double denom = v + 256.0 * kSmoothing;
            pred.dist.p.fill(kSmoothing / denom);
            for (const auto& [b, c] : e->counts) {
                pred.dist.p[b] = (static_cast<double>(c) + kSmoothing) / denom;
            }
            pred.confidence = v / (v + 8.0);
            return pred;
        }
    }
    return std::nullopt;
}

void WordModel::blend(Distribution& d) {
    auto pred = predict();
    if (!pred) return;
    double c_w = pred->confidence;
    if (c_w < 0.0) c_w = 0.0;
    if (c_w > 1.0) c_w = 1.0;
    double w = c_w * 0.35;
    if (w > 0.45) w = 0.45;
    for (int s = 0; s < 256; ++s) {
        d.p[s] = (1.0 - w) * d.p[s] + w * pred->dist.p[s];
    }
}

void WordModel::update(uint8_t observed) {
    if (is_word_byte(observed)) {
        if (current_word_.empty()) {
            if (has_prev_word_) {
                BigramEntry& e = bigrams_.find_or_create(prev_word_hash_);
                bump(e.counts, observed);
                ++e.total;
            }
            // Root continuation = word-initial letter statistics.
            bump(pool_[0].continuations, observed);
            ++pool_[0].visits;
        } else {
            uint32_t node;
            size_t depth;
            if (cache_.valid) {
                node = cache_.node;
                depth = cache_.depth;
#ifndef NDEBUG
                size_t check_depth = 0;
                assert(walk(&check_depth) == node && check_depth == depth);
#endif
            } else {
                node = walk(&depth);
                ++trie_walks_;
            }
            node = extend_path(node, depth);
            if (node != kNone) {
                bump(pool_[node].continuations, observed);
                ++pool_[node].visits;
            }
        }
        if (current_word_.size() < kMaxWordLen) {
            current_word_.push_back(observed);
        }
    } else if (!current_word_.empty()) {
        // Word completed: record the terminator continuation, count the word
        // and remember it for the next bigram transition.
        uint32_t node;
        size_t depth;
        if (cache_.valid) {
            node = cache_.node;
            depth = cache_.depth;
        } else {
            node = walk(&depth);
            ++trie_walks_;
        }
        node = extend_path(node, depth);
        if (node != kNone) {
            bump(pool_[node].continuations, observed);
            ++pool_[node].visits;
        }
        uint64_t h = word_hash(current_word_);
        ++word_freq_.find_or_create(h);
        prev_word_hash_ = h;
        has_prev_word_ = true;
        current_word_.clear();
    }
    cache_ = Cache{};
}

uint32_t WordModel::trie_visits(std::span<const uint8_t> prefix) const {
    uint32_t node = 0;
    for (uint8_t b : prefix) {
        node = find_child(node, b);
        if (node == kNone) return 0;
    }
    return pool_[node].visits;
}

uint32_t WordModel::bigram_count(uint64_t hash, uint8_t first_byte) const {
    const BigramEntry* e = bigrams_.find(hash);
    if (!e) return 0;
    for (const auto& [b, c] : e->counts) {
        if (b == first_byte) return c;
    }
    return 0;
}

uint32_t WordModel::word_count(uint64_t hash) const {
    const uint32_t* c = word_freq_.find(hash);
    return c ? *c : 0;
}

uint64_t WordModel::digest(uint64_t h) const {
    h = fnv1a_u64(pool_.size(), h);
    for (const TrieNode& n : pool_) {
        h = fnv1a_byte(n.letter, h);
        h = fnv1a_u64(n.first_child, h);
        h = fnv1a_u64(n.visits, h);
        for (const auto& [b, c] : n.continuations) {
            h = fnv1a_byte(b, h);
            h = fnv1a_u64(c, h);
        }
    }
    bigrams_.for_each([&](uint64_t key, const BigramEntry& e) {
        h = fnv1a_u64(key, h);
        h = fnv1a_u64(e.total, h);
        for (const auto& [b, c] : e.counts) {
            h = fnv1a_byte(b, h);
            h = fnv1a_u64(c, h);
        }
    });
    word_freq_.for_each([&](uint64_t key, const uint32_t& c) {
        h = fnv1a_u64(key, h);
        h = fnv1a_u64(c, h);
    });
    h = fnv1a(current_word_.data(), current_word_.size(), h);
    h = fnv1a_u64(has_prev_word_ ? prev_word_hash_ : 0, h);
    return h;
}

} // namespace midicoth
