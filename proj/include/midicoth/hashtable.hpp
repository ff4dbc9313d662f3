#ifndef MIDICOTH_HASHTABLE_HPP
#define MIDICOTH_HASHTABLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace midicoth {

// Open-addressing hash table with linear probing, keyed by a precomputed
// 64-bit hash. Identity is the hash alone: a collision silently merges two
// contexts, which is deterministic on both coder sides and vanishingly rare
// at desk scale. Grows by doubling at 60% load. No deletion.
template <typename V>
class HashTable {
public:
    explicit HashTable(size_t initial_capacity = 1024)
        : slots_(initial_capacity), used_(initial_capacity, 0) {}

    V* find(uint64_t key) {
        size_t i = probe(key);
        return used_[i] ? &slots_[i].second : nullptr;
    }

    const V* find(uint64_t key) const {
        size_t i = probe(key);
        return used_[i] ? &slots_[i].second : nullptr;
    }

    // Returns the value for key, default-constructing it on first use.
    V& find_or_create(uint64_t key) {
        if ((size_ + 1) * 5 > slots_.size() * 3) { // load factor 0.60
            grow();
        }
        size_t i = probe(key);
        if (!used_[i]) {
            used_[i] = 1;
            slots_[i].first = key;
            slots_[i].second = V{};
            ++size_;
        }
        return slots_[i].second;
    }

    size_t size() const { return size_; }
    size_t capacity() const { return slots_.size(); }

    // Slot-order traversal; identical on encoder and decoder because both
    // perform the same insert sequence.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (size_t i = 0; i < slots_.size(); ++i) {
            if (used_[i]) fn(slots_[i].first, slots_[i].second);
        }
    }

private:
    size_t probe(uint64_t key) const {
        size_t mask = slots_.size() - 1;
        size_t i = static_cast<size_t>(key) & mask;
        while (used_[i] && slots_[i].first != key) {
            i = (i + 1) & mask;
        }
        return i;
    }

    void grow() {
        std::vector<std::pair<uint64_t, V>> old_slots(slots_.size() * 2);
        std::vector<uint8_t> old_used(slots_.size() * 2, 0);
        old_slots.swap(slots_);
        old_used.swap(used_);
        for (size_t i = 0; i < old_slots.size(); ++i) {
            if (!old_used[i]) continue;
            size_t j = probe(old_slots[i].first);
            used_[j] = 1;
            slots_[j] = std::move(old_slots[i]);
        }
    }

    std::vector<std::pair<uint64_t, V>> slots_;
    std::vector<uint8_t> used_;
    size_t size_ = 0;
};

} // namespace midicoth

#endif
