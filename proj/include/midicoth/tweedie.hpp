#ifndef MIDICOTH_TWEEDIE_HPP
#define MIDICOTH_TWEEDIE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "midicoth/distribution.hpp"

namespace midicoth {

// Calibration table geometry: step x bit-context x order-group x shape x
// confidence x probability bin.
inline constexpr int kTweedieSteps = 3; // table depth; runs may do 1..4 passes
inline constexpr int kBitContexts = 27;
inline constexpr int kOrderGroups = 3;
inline constexpr int kShapeBins = 4;
inline constexpr int kConfBins = 8;
inline constexpr int kProbBins = 20;
inline constexpr size_t kCalibEntries = size_t{kTweedieSteps} * kBitContexts *
                                        kOrderGroups * kShapeBins * kConfBins *
                                        kProbBins; // 155,520

inline constexpr double kCalibPriorWeight = 32.0;
inline constexpr double kProbClamp = 1e-8;

// Four running sufficient statistics per bin: average prediction, hit rate,
// population and squared error.
struct CalibEntry {
    double sum_pred = 0.0;
    double hits = 0.0;
    double total = 0.0;
    double sum_sq_err = 0.0;
};

// Bit context for a tree node: levels 0-2 are fully indexed by the parent
// path, levels 3-7 fold the path into 4 hash groups. 1+2+4+20 = 27.
int bit_context(int level, uint32_t path_bits);

// PPM order -1..1 / 2..3 / 4+ -> group 0 / 1 / 2.
inline int order_group(int order) {
    if (order <= 1) return 0;
    if (order <= 3) return 1;
    return 2;
}

// Peakedness of the distribution: thresholds 0.05 / 0.15 / 0.40 below p_max.
inline int shape_bin(double p_max) {
    return (p_max > 0.05) + (p_max > 0.15) + (p_max > 0.40);
}

// Log-spaced observation-count bins; boundaries 16, 48, 112, 240, 496,
// 1008, 2032.
int conf_bin(double confidence);

// Logit-spaced discretization of P(right) over [-8, 8].
int prob_bin(double p_right);

// Midpoint probability of a logit bin, used to seed the prior.
double prob_bin_center(int pbin);

size_t calib_index(int step, int bctx, int ord, int shape, int conf, int pbin);

// The raw Tweedie correction hits/total - sum_pred/total, gated to zero under
// 10 real observations and attenuated by SNR/4 (James-Stein shrinkage).
double correction(const CalibEntry& e);

class CalibTable {
public:
    CalibTable();

    CalibEntry& at(size_t idx) { return entries_[idx]; }
    const CalibEntry& at(size_t idx) const { return entries_[idx]; }
    size_t size() const { return entries_.size(); }

    uint64_t digest(uint64_t h) const;

private:
    std::vector<CalibEntry> entries_;
};

struct DiagnosticsRow {
    double gamma;
    double conf_center;
    int step;
    double mean_abs_delta;
    uint64_t weight;
};

// K-step binary-tree Tweedie denoiser over the fully blended distribution.
// Each step builds a sum tree, corrects every internal node's P(right) via
// the calibration table, scales the leaves and renormalizes. Statistics are
// recorded once the true byte is known, against the pre-correction
// probabilities each step saw.
class TweedieDenoiser {
public:
    explicit TweedieDenoiser(int steps = 3);

    void denoise(Distribution& d, const PredictionMeta& meta);

    // Called once per coded byte with the byte both sides now know.
    void record_outcome(uint8_t observed);

    int steps() const { return steps_; }
    CalibTable& table() { return table_; }
    const CalibTable& table() const { return table_; }

    // Mean applied |delta'| per (step, confidence bin), weighted by recorded
    // on-path observations.
    std::vector<DiagnosticsRow> diagnostics() const;

    uint64_t digest(uint64_t h) const;

private:
    void apply_step(Distribution& d, int table_step, int ord, int conf);

    CalibTable table_;
    int steps_;

    // Pre-step leaf snapshots; on-path node probabilities are recomputed
    // from these when the outcome arrives (3 extra tree builds per byte,
    // cheaper than caching 765 node values).
    std::array<std::array<double, 256>, 4> snapshots_;
    int logged_steps_ = 0;
    int log_ord_ = 0;
    int log_conf_ = 0;

    double diag_sum_[kTweedieSteps][kConfBins] = {};
    uint64_t diag_weight_[kTweedieSteps][kConfBins] = {};
};

// Shared sum-tree helpers (also exercised directly by tests).
// tree[256..511] holds the leaves; tree[i] = tree[2i] + tree[2i+1].
void build_sum_tree(const std::array<double, 256>& leaves,
                    std::array<double, 512>& tree);

} // namespace midicoth

#endif
