#include "facegal/threshold_policy.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "facegal/error.hpp"
#include "facegal/rng.hpp"

namespace facegal {

ThresholdPolicy ThresholdPolicy::fixed(double value) {
    if (!std::isfinite(value) || value < -1.0 || value > 1.0) {
        raise(errc::invalid_config, "fixed threshold must lie in [-1, 1]");
    }
    return ThresholdPolicy{Kind::fixed, value};
}

std::string ThresholdPolicy::describe() const {
    if (kind == Kind::adaptive) return "adaptive";
    return "fixed:" + std::to_string(value);
}

double evaluate_phi(const ThresholdPolicy& policy, const Gallery& gallery, int reg_index) {
    if (policy.kind == ThresholdPolicy::Kind::fixed) return policy.value;
    if (reg_index < 1 || static_cast<std::size_t>(reg_index) > gallery.size()) {
        raise(errc::unknown_index,
              "reg_index " + std::to_string(reg_index) + " not in a gallery of " +
                  std::to_string(gallery.size()) + " entries");
    }
    return gallery.entries()[static_cast<std::size_t>(reg_index) - 1].threshold;
}

namespace {

using IndexPair = std::pair<int, int>;

std::vector<std::vector<int>> group_by_label(const std::vector<LabeledEmbedding>& dataset) {
    std::unordered_map<std::string, std::size_t> slot;
    std::vector<std::vector<int>> groups;  // first-appearance order, deterministic
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        auto [it, inserted] = slot.try_emplace(dataset[i].label, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(static_cast<int>(i));
    }
    return groups;
}

std::vector<IndexPair> take_prefix(std::vector<IndexPair> pool, std::size_t take, Rng& rng) {
    // partial Fisher-Yates: the first `take` slots are a uniform sample
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    return pool;
}

std::vector<IndexPair> sample_positive(const std::vector<std::vector<int>>& groups,
                                       std::size_t pool_size, std::size_t take, Rng& rng) {
    if (take == 0) return {};
    if (pool_size <= 4 * take || pool_size <= 200000) {
        std::vector<IndexPair> pool;
        pool.reserve(pool_size);
        for (const auto& g : groups) {
            for (std::size_t a = 0; a + 1 < g.size(); ++a) {
                for (std::size_t b = a + 1; b < g.size(); ++b) pool.emplace_back(g[a], g[b]);
            }
        }
        return take_prefix(std::move(pool), take, rng);
    }
    // large pool: draw the class weighted by its pair count, then a pair in it
    std::vector<std::uint64_t> cumulative;
    cumulative.reserve(groups.size());
    std::uint64_t sum = 0;
    for (const auto& g : groups) {
        sum += static_cast<std::uint64_t>(g.size()) * (g.size() - 1) / 2;
        cumulative.push_back(sum);
    }
    std::unordered_set<std::uint64_t> seen;
    std::vector<IndexPair> out;
    out.reserve(take);
    while (out.size() < take) {
        const std::uint64_t r = rng.below(sum);
        const std::size_t c = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
        const auto& g = groups[c];
        std::size_t a = static_cast<std::size_t>(rng.below(g.size()));
        std::size_t b = static_cast<std::size_t>(rng.below(g.size() - 1));
        if (b >= a) ++b;
        int lo = std::min(g[a], g[b]), hi = std::max(g[a], g[b]);
        const std::uint64_t key = static_cast<std::uint64_t>(lo) << 32 | static_cast<std::uint32_t>(hi);
        if (seen.insert(key).second) out.emplace_back(lo, hi);
    }
    return out;
}

std::vector<IndexPair> sample_negative(const std::vector<LabeledEmbedding>& dataset,
                                       std::size_t pool_size, std::size_t take, Rng& rng) {
    if (take == 0) return {};
    const std::size_t n = dataset.size();
    if (pool_size <= 4 * take || n <= 2048) {
        std::vector<IndexPair> pool;
        pool.reserve(pool_size);
        for (std::size_t a = 0; a + 1 < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (dataset[a].label != dataset[b].label) {
                    pool.emplace_back(static_cast<int>(a), static_cast<int>(b));
                }
            }
        }
        return take_prefix(std::move(pool), take, rng);
    }
    std::unordered_set<std::uint64_t> seen;
    std::vector<IndexPair> out;
    out.reserve(take);
    while (out.size() < take) {
        std::size_t a = static_cast<std::size_t>(rng.below(n));
        std::size_t b = static_cast<std::size_t>(rng.below(n - 1));
        if (b >= a) ++b;
        if (dataset[a].label == dataset[b].label) continue;
        if (b < a) std::swap(a, b);
        const std::uint64_t key = static_cast<std::uint64_t>(a) << 32 | static_cast<std::uint32_t>(b);
        if (seen.insert(key).second) out.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
    return out;
}

} // namespace

std::vector<VerificationPair> sample_pairs(const std::vector<LabeledEmbedding>& dataset,
                                           std::size_t count, std::uint64_t seed,
                                           double positive_fraction) {
    if (!(positive_fraction >= 0.0 && positive_fraction <= 1.0)) {
        raise(errc::invalid_config, "positive fraction must lie in [0, 1]");
    }
    if (dataset.size() < 2) raise(errc::insufficient_data, "need at least two items to form pairs");

    const auto groups = group_by_label(dataset);
    std::uint64_t positive_pool = 0;
    for (const auto& g : groups) {
        positive_pool += static_cast<std::uint64_t>(g.size()) * (g.size() - 1) / 2;
    }
    const std::uint64_t total_pool =
        static_cast<std::uint64_t>(dataset.size()) * (dataset.size() - 1) / 2;
    const std::uint64_t negative_pool = total_pool - positive_pool;

    std::size_t positive_target = static_cast<std::size_t>(std::llround(
        static_cast<double>(count) * positive_fraction));
    positive_target = std::min(positive_target, count);

    const std::size_t positive_take =
        std::min<std::uint64_t>(positive_target, positive_pool);
    const std::size_t negative_take = count - positive_take;  // shortfall spills here
    if (negative_take > negative_pool) {
        raise(errc::insufficient_data,
              "need " + std::to_string(negative_take) + " different-identity pairs, only " +
                  std::to_string(negative_pool) + " exist");
    }

    Rng rng(seed);
    const auto positives = sample_positive(groups, positive_pool, positive_take, rng);
    const auto negatives = sample_negative(dataset, negative_pool, negative_take, rng);

    std::vector<VerificationPair> pairs;
    pairs.reserve(count);
    for (const auto& [a, b] : positives) {
        pairs.push_back({a, b, true,
                         similarity(dataset[static_cast<std::size_t>(a)].embedding,
                                    dataset[static_cast<std::size_t>(b)].embedding)});
    }
    for (const auto& [a, b] : negatives) {
        pairs.push_back({a, b, false,
                         similarity(dataset[static_cast<std::size_t>(a)].embedding,
                                    dataset[static_cast<std::size_t>(b)].embedding)});
    }
    return pairs;
}

namespace {

struct ScoredPair {
    double score;
    bool positive;
};

// Best accuracy-maximizing threshold on `selection`, ties to the smallest
// candidate. Candidates: below-min sentinel, midpoints between adjacent
// distinct scores, above-max sentinel.
double sweep_threshold(std::vector<ScoredPair> selection) {
    std::sort(selection.begin(), selection.end(),
              [](const ScoredPair& a, const ScoredPair& b) { return a.score < b.score; });
    const std::size_t n = selection.size();

    // correct(k) = positives at or above cut k + negatives below it
    std::vector<std::size_t> pos_suffix(n + 1, 0);
    std::vector<std::size_t> neg_prefix(n + 1, 0);
    for (std::size_t i = n; i > 0; --i) {
        pos_suffix[i - 1] = pos_suffix[i] + (selection[i - 1].positive ? 1 : 0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        neg_prefix[i + 1] = neg_prefix[i] + (selection[i].positive ? 0 : 1);
    }

    double best_threshold = selection.front().score - 1.0;
    std::size_t best_correct = pos_suffix[0];  // accept-all sentinel
    for (std::size_t j = 1; j < n; ++j) {
        if (selection[j].score == selection[j - 1].score) continue;
        const double candidate = (selection[j - 1].score + selection[j].score) / 2.0;
        const std::size_t correct = pos_suffix[j] + neg_prefix[j];
        if (correct > best_correct) {
            best_correct = correct;
            best_threshold = candidate;
        }
    }
    const std::size_t reject_all = neg_prefix[n];
    if (reject_all > best_correct) {
        best_threshold = selection.back().score + 1.0;
    }
    return best_threshold;
}

double accuracy_at(const std::vector<ScoredPair>& pairs, double threshold) {
    std::size_t correct = 0;
    for (const ScoredPair& p : pairs) {
        if ((p.score >= threshold) == p.positive) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

} // namespace

CalibrationResult calibrate_fixed_threshold(const std::vector<VerificationPair>& pairs,
                                            int folds, std::uint64_t seed,
                                            CvSelectOn select_on) {
    if (folds < 2) raise(errc::invalid_config, "cross-validation needs at least 2 folds");
    if (pairs.size() < static_cast<std::size_t>(folds)) {
        raise(errc::insufficient_data,
              "need at least " + std::to_string(folds) + " pairs for " +
                  std::to_string(folds) + "-fold calibration");
    }

    const std::size_t n = pairs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    // contiguous folds over the shuffled order; the first n % folds get one extra
    std::vector<int> fold_assignment(n, 0);
    const std::size_t base = n / static_cast<std::size_t>(folds);
    const std::size_t extra = n % static_cast<std::size_t>(folds);
    std::size_t cursor = 0;
    for (int f = 0; f < folds; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        for (std::size_t k = 0; k < size; ++k) fold_assignment[order[cursor++]] = f;
    }

    CalibrationResult result;
    result.pair_count = n;
    result.fold_assignment = fold_assignment;
    result.per_fold_thresholds.reserve(static_cast<std::size_t>(folds));
    result.per_fold_accuracy.reserve(static_cast<std::size_t>(folds));

    for (int f = 0; f < folds; ++f) {
        std::vector<ScoredPair> selection;
        std::vector<ScoredPair> held_out;
        selection.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const ScoredPair sp{pairs[i].score, pairs[i].same_identity};
            if (fold_assignment[i] == f) {
                held_out.push_back(sp);
            } else {
                selection.push_back(sp);
            }
        }
        const std::vector<ScoredPair>& sweep_set =
            select_on == CvSelectOn::train ? selection : held_out;
        if (sweep_set.empty()) raise(errc::insufficient_data, "empty selection set in fold");

        const double threshold = sweep_threshold(sweep_set);
        result.per_fold_thresholds.push_back(threshold);
        result.per_fold_accuracy.push_back(accuracy_at(held_out, threshold));
    }

    double sum = 0.0;
    for (double t : result.per_fold_thresholds) sum += t;
    result.threshold = sum / static_cast<double>(folds);
    return result;
}

} // namespace facegal
