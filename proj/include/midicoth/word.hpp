#ifndef MIDICOTH_WORD_HPP
#define MIDICOTH_WORD_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "midicoth/distribution.hpp"
#include "midicoth/hashtable.hpp"

namespace midicoth {

inline bool is_word_byte(uint8_t b) {
    return (b >= 'A' && b <= 'Z') || (b >= 'a' && b <= 'z');
}

struct WordPrediction {
    Distribution dist;
    double confidence; // in [0, 1]
};

// Lexical predictor. A trie over alphabetic words provides in-word
// continuation probabilities; a bigram table predicts the first byte of the
// next word at word boundaries. Predictions are cached between the forward
// pass and the update pass so the trie is walked once per byte.
class WordModel {
public:
    static constexpr size_t kMaxWordLen = 32;   // longer words are truncated
    static constexpr size_t kNodeBudget = size_t{1} << 20;
    static constexpr double kSmoothing = 1e-4;

    WordModel();

    std::optional<WordPrediction> predict();

    void blend(Distribution& d);

    // Called once per byte after blending.
    void update(uint8_t observed);

    // Test hooks.
    uint64_t trie_walks() const { return trie_walks_; }
    size_t node_count() const { return pool_.size(); }
    const std::vector<uint8_t>& current_word() const { return current_word_; }
    uint32_t trie_visits(std::span<const uint8_t> prefix) const;
    uint32_t bigram_count(uint64_t word_hash, uint8_t first_byte) const;
    uint32_t word_count(uint64_t word_hash) const;

    static uint64_t word_hash(std::span<const uint8_t> word);

    uint64_t digest(uint64_t h) const;

private:
    static constexpr uint32_t kNone = 0xFFFFFFFFu;

    struct TrieNode {
        uint8_t letter = 0;
        uint32_t first_child = kNone;
        uint32_t next_sibling = kNone;
        uint32_t visits = 0; // equals the sum of continuation counts
        std::vector<std::pair<uint8_t, uint32_t>> continuations;
    };

    struct BigramEntry {
        std::vector<std::pair<uint8_t, uint32_t>> counts;
        uint32_t total = 0;
    };

    struct Cache {
        bool valid = false;
        uint32_t node = kNone; // deepest existing node for the current word
        size_t depth = 0;      // letters matched to reach it
    };

    uint32_t find_child(uint32_t node, uint8_t letter) const;
    uint32_t walk(size_t* depth_out) const;
    uint32_t extend_path(uint32_t node, size_t depth);
    static void bump(std::vector<std::pair<uint8_t, uint32_t>>& counts, uint8_t b);

    std::vector<TrieNode> pool_; // pool_[0] is the root
    HashTable<BigramEntry> bigrams_;
    HashTable<uint32_t> word_freq_;
    std::vector<uint8_t> current_word_;
    uint64_t prev_word_hash_ = 0;
    bool has_prev_word_ = false;
    Cache cache_;
    uint64_t trie_walks_ = 0;
};

} // namespace midicoth

#endif
