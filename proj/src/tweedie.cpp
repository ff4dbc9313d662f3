#include "midicoth/tweedie.hpp"

#include <bit>
#include <cmath>

#include "midicoth/error.hpp"
#include "midicoth/hash.hpp"

namespace midicoth {

namespace {
constexpr double kDegenerate = 1e-300;

int node_level(int node) {
    int level = 0;
    while (node >= (2 << level)) ++level;
    return level;
}
} // namespace

int bit_context(int level, uint32_t path_bits) {
    switch (level) {
        case 0:
            return 0;
        case 1:
            return 1 + static_cast<int>(path_bits);
        case 2:
            return 3 + static_cast<int>(path_bits);
        default: {
            uint8_t packed[2] = {static_cast<uint8_t>(path_bits),
                                 static_cast<uint8_t>(level)};
            int group = static_cast<int>(fnv1a(packed, 2) & 3u);
            return 7 + 4 * (level - 3) + group;
        }
    }
}

int conf_bin(double confidence) {
    double v = 1.0 + confidence / 16.0;
    int b = static_cast<int>(std::floor(std::log2(v)));
    if (b < 0) b = 0;
    if (b > kConfBins - 1) b = kConfBins - 1;
    return b;
}

int prob_bin(double p_right) {
    double logit = std::log(p_right / (1.0 - p_right));
    int b = static_cast<int>(std::floor((logit + 8.0) * (kProbBins / 16.0)));
    if (b < 0) b = 0;
    if (b > kProbBins - 1) b = kProbBins - 1;
    return b;
}

double prob_bin_center(int pbin) {
    double logit = -8.0 + (pbin + 0.5) * (16.0 / kProbBins);
    return 1.0 / (1.0 + std::exp(-logit));
}

size_t calib_index(int step, int bctx, int ord, int shape, int conf, int pbin) {
    return ((((static_cast<size_t>(step) * kBitContexts + bctx) * kOrderGroups +
              ord) *
                 kShapeBins +
             shape) *
                kConfBins +
            conf) *
               kProbBins +
           pbin;
}

double correction(const CalibEntry& e) {
    if (e.total - kCalibPriorWeight < 10.0) return 0.0; // too few real samples
    double delta = e.hits / e.total - e.sum_pred / e.total;
    double var = e.sum_sq_err / e.total;
    if (var <= 0.0) return delta;
    double snr = delta * delta * e.total / var;
    double gain = snr / 4.0;
    if (gain > 1.0) gain = 1.0;
    return delta * gain;
}

CalibTable::CalibTable() : entries_(kCalibEntries) {
    // Seed every bin with 32 pseudo-observations at its midpoint probability
    // so the raw correction starts at exactly zero.
    for (size_t i = 0; i < entries_.size(); ++i) {
        double pc = prob_bin_center(static_cast<int>(i % kProbBins));
        entries_[i].sum_pred = kCalibPriorWeight * pc;
        entries_[i].hits = kCalibPriorWeight * pc;
        entries_[i].total = kCalibPriorWeight;
        entries_[i].sum_sq_err = 0.25 * kCalibPriorWeight;
    }
}

uint64_t CalibTable::digest(uint64_t h) const {
    for (const CalibEntry& e : entries_) {
        h = fnv1a_u64(std::bit_cast<uint64_t>(e.sum_pred), h);
        h = fnv1a_u64(std::bit_cast<uint64_t>(e.hits), h);
        h = fnv1a_u64(std::bit_cast<uint64_t>(e.total), h);
        h = fnv1a_u64(std::bit_cast<uint64_t>(e.sum_sq_err), h);
    }
    return h;
}

void build_sum_tree(const std::array<double, 256>& leaves,
                    std::array<double, 512>& tree) {
    for (int i = 0; i < 256; ++i) tree[256 + i] = leaves[i];
    for (int i = 255; i >= 1; --i) tree[i] = tree[2 * i] + tree[2 * i + 1];
}

TweedieDenoiser::TweedieDenoiser(int steps) : steps_(steps) {
    MDC_CHECK(steps >= 1 && steps <= 4, "denoising steps must be 1..4");
}

void TweedieDenoiser::apply_step(Distribution& d, int table_step, int ord,
                                 int conf) {
    std::array<double, 512> tree;
    build_sum_tree(d.p, tree);
    int shape = shape_bin(d.max());

    std::array<double, 256> scale_l;
    std::array<double, 256> scale_r;
    for (int i = 1; i < 256; ++i) {
        if (tree[i] < kDegenerate) {
            scale_l[i] = 1.0;
            scale_r[i] = 1.0;
            continue;
        }
        double p_r = tree[2 * i + 1] / tree[i];
        int level = node_level(i);
        uint32_t path = static_cast<uint32_t>(i - (1 << level));
        size_t idx = calib_index(table_step, bit_context(level, path), ord,
                                 shape, conf, prob_bin(p_r));
        double dp = correction(table_.at(idx));
        double p_r2 = p_r + dp;
        if (p_r2 < kProbClamp) p_r2 = kProbClamp;
        if (p_r2 > 1.0 - kProbClamp) p_r2 = 1.0 - kProbClamp;
        scale_l[i] = (1.0 - p_r2) / (1.0 - p_r);
        scale_r[i] = p_r2 / p_r;
    }

    // Corrections at different levels are independent: scaling a whole
    // subtree preserves every P(right) strictly inside it, so one top-down
    // product pass applies all 255 node corrections at once.
    std::array<double, 512> factor;
    factor[1] = 1.0;
    for (int i = 1; i < 256; ++i) {
        factor[2 * i] = factor[i] * scale_l[i];
        factor[2 * i + 1] = factor[i] * scale_r[i];
    }
    for (int j = 0; j < 256; ++j) d.p[j] *= factor[256 + j];
    normalize(d);
}

void TweedieDenoiser::denoise(Distribution& d, const PredictionMeta& meta) {
    log_ord_ = order_group(meta.order);
    log_conf_ = conf_bin(meta.confidence);
    logged_steps_ = steps_;
    for (int t = 0; t < steps_; ++t) {
        snapshots_[t] = d.p;
        int table_step = t < kTweedieSteps ? t : kTweedieSteps - 1;
        apply_step(d, table_step, log_ord_, log_conf_);
    }
}

void TweedieDenoiser::record_outcome(uint8_t observed) {
    std::array<double, 512> tree;
    for (int t = 0; t < logged_steps_; ++t) {
        build_sum_tree(snapshots_[t], tree);
        double p_max = snapshots_[t][0];
        for (int j = 1; j < 256; ++j) {
            if (snapshots_[t][j] > p_max) p_max = snapshots_[t][j];
        }
        int shape = shape_bin(p_max);
        int table_step = t < kTweedieSteps ? t : kTweedieSteps - 1;

        for (int level = 0; level < 8; ++level) {
            int node = (1 << level) + (observed >> (8 - level));
            if (tree[node] < kDegenerate) continue;
            double p_r = tree[2 * node + 1] / tree[node];
            uint32_t path = static_cast<uint32_t>(observed >> (8 - level));
            size_t idx = calib_index(table_step, bit_context(level, path),
                                     log_ord_, shape, log_conf_, prob_bin(p_r));
            CalibEntry& e = table_.at(idx);

            diag_sum_[table_step][log_conf_] += std::fabs(correction(e));
            diag_weight_[table_step][log_conf_] += 1;

            double went_right = (observed >> (7 - level)) & 1 ? 1.0 : 0.0;
            e.sum_pred += p_r;
            e.hits += went_right;
            e.total += 1.0;
            e.sum_sq_err += (went_right - p_r) * (went_right - p_r);
        }
    }
    logged_steps_ = 0;
}

std::vector<DiagnosticsRow> TweedieDenoiser::diagnostics() const {
    std::vector<DiagnosticsRow> rows;
    for (int t = 0; t < kTweedieSteps; ++t) {
        for (int c = 0; c < kConfBins; ++c) {
            // Midpoint of the bin's count range, as a label for gamma.
            double c_center = 24.0 * static_cast<double>(1 << c) - 16.0;
            DiagnosticsRow row;
            row.gamma = 128.0 / (c_center + 128.0);
            row.conf_center = c_center;
            row.step = t;
            row.weight = diag_weight_[t][c];
            row.mean_abs_delta =
                row.weight > 0
                    ? diag_sum_[t][c] / static_cast<double>(row.weight)
                    : 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

uint64_t TweedieDenoiser::digest(uint64_t h) const {
    h = table_.digest(h);
    h = fnv1a_u64(static_cast<uint64_t>(steps_), h);
    return h;
}

} // namespace midicoth
