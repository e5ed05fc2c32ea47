#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facegal/embedding.hpp"
#include "facegal/gallery.hpp"

namespace facegal {

// The threshold function consulted when a probe best-matches entry u:
// a single constant for the fixed baseline, entry u's current adaptive
// threshold otherwise.
struct ThresholdPolicy {
    enum class Kind { adaptive, fixed };

    Kind kind = Kind::adaptive;
    double value = 0.0;  // the constant, meaningful for Kind::fixed only

    static ThresholdPolicy adaptive() { return ThresholdPolicy{Kind::adaptive, 0.0}; }
    static ThresholdPolicy fixed(double value);

    std::string describe() const;
};

// Threshold consulted for a probe whose best match is reg_index u.
// Fixed ignores u entirely; adaptive raises unknown_index when u is not a
// valid reg_index.
double evaluate_phi(const ThresholdPolicy& policy, const Gallery& gallery, int reg_index);

struct VerificationPair {
    int index_a;         // dataset indices, index_a != index_b
    int index_b;
    bool same_identity;
    double score;        // similarity of the two embeddings
};

// Samples `count` distinct pairs from the dataset, targeting
// positive_fraction same-identity pairs (rounded half away from zero) and
// the rest different-identity, each category uniform without replacement.
// When fewer distinct positive pairs exist than targeted, all of them are
// used and the shortfall moves to negative pairs. Deterministic in seed.
// Raises insufficient_data when the negative demand cannot be met.
std::vector<VerificationPair> sample_pairs(const std::vector<LabeledEmbedding>& dataset,
                                           std::size_t count, std::uint64_t seed,
                                           double positive_fraction = 0.5);

// Whether each fold's threshold is swept on the 9 training folds (default)
// or directly on the held-out fold.
enum class CvSelectOn { train, test };

struct CalibrationResult {
    double threshold;                         // mean of per_fold_thresholds
    std::vector<double> per_fold_thresholds;
    std::vector<double> per_fold_accuracy;    // each fold's threshold on its held-out fold
    std::size_t pair_count;
    std::vector<int> fold_assignment;         // fold id per input pair index
};

// 10-fold cross-validated fixed-threshold selection. Pairs are shuffled by
// seed and split into `folds` contiguous near-equal folds. Per fold, the
// candidate thresholds are the midpoints between adjacent distinct scores
// of the selection set plus below-min/above-max sentinels; the candidate
// maximizing verification accuracy wins, ties going to the smallest
// candidate (a pair is accepted iff score >= candidate, correct iff
// accepted == same_identity).
CalibrationResult calibrate_fixed_threshold(const std::vector<VerificationPair>& pairs,
                                            int folds, std::uint64_t seed,
                                            CvSelectOn select_on = CvSelectOn::train);

} // namespace facegal
