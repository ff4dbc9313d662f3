#include "midicoth/ppm.hpp"

#include "midicoth/hash.hpp"

namespace midicoth {

PpmModel::PpmModel() {
    for (int k = 0; k <= kMaxOrder; ++k) {
        tables_.emplace_back(1024);
    }
}

uint64_t PpmModel::context_hash(std::span<const uint8_t> history, int order) {
    return fnv1a(history.data() + history.size() - order,
                 static_cast<size_t>(order));
}

const PpmRecord* PpmModel::record(std::span<const uint8_t> history,
                                  int order) const {
    if (static_cast<size_t>(order) > history.size()) return nullptr;
    return tables_[order].find(context_hash(history, order));
}

void PpmModel::predict(std::span<const uint8_t> history, Distribution& out,
                       PredictionMeta& meta) const {
    out.p.fill(0.0);
    meta = PredictionMeta{};

    bool excluded[256] = {};
    int excl_count = 0;
    double carry = 1.0; // product of escape probabilities above
    bool matched = false;

    for (int k = kMaxOrder; k >= 0; --k) {
        if (static_cast<size_t>(k) > history.size()) continue;
        const PpmRecord* rec = tables_[k].find(context_hash(history, k));
        if (!rec) continue;

        if (!matched) {
            matched = true;
            meta.confidence = rec->stored_total();
            meta.order = k;
        }

        // Real observations and distinct symbols restricted to what higher
        // orders have not excluded.
        uint64_t n = 0;
        uint64_t d = 0;
        for (const auto& [sym, c] : rec->counts) {
            if (!excluded[sym]) {
                n += c;
                ++d;
            }
        }
        double p_esc = escape_prob(d, n);

        double coef = carry * (1.0 - p_esc);
        if (coef > 0.0) {
            // Stored-count conditional over non-excluded symbols: every one
            // holds the 0.5 prior, observed ones their real count on top.
            double denom = 0.5 * (256 - excl_count) + static_cast<double>(n);
            double base = coef * 0.5 / denom;
            for (int s = 0; s < 256; ++s) {
                if (!excluded[s]) out.p[s] += base;
            }
            for (const auto& [sym, c] : rec->counts) {
                if (!excluded[sym]) out.p[sym] += coef * static_cast<double>(c) / denom;
            }
        }

        for (const auto& [sym, c] : rec->counts) {
            (void)c;
            if (!excluded[sym]) {
                excluded[sym] = true;
                ++excl_count;
            }
        }
        carry *= p_esc;
    }

    // Escape mass left after order 0 goes uniformly to symbols never seen at
    // any walked order. If every symbol is excluded the mass has no home and
    // the downstream normalize pass rescales.
    if (excl_count < 256) {
        double u = carry / static_cast<double>(256 - excl_count);
        for (int s = 0; s < 256; ++s) {
            if (!excluded[s]) out.p[s] += u;
        }
    }
}

void PpmModel::update(std::span<const uint8_t> history, uint8_t observed) {
    for (int k = 0; k <= kMaxOrder; ++k) {
        if (static_cast<size_t>(k) > history.size()) break;
        tables_[k].find_or_create(context_hash(history, k)).increment(observed);
    }
}

uint64_t PpmModel::digest(uint64_t h) const {
    for (const auto& table : tables_) {
        table.for_each([&](uint64_t key, const PpmRecord& rec) {
            h = fnv1a_u64(key, h);
            h = fnv1a_u64(rec.real_total, h);
            for (const auto& [sym, c] : rec.counts) {
                h = fnv1a_byte(sym, h);
                h = fnv1a_u64(c, h);
            }
        });
    }
    return h;
}

} // namespace midicoth
