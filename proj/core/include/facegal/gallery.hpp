#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "facegal/embedding.hpp"

namespace facegal {

struct GalleryEntry {
    Embedding embedding;
    IdentityLabel label;
    std::string source_id;
    double threshold;  // max similarity to any different-identity entry,
                       // or the gallery's initial threshold if none exists
    int reg_index;     // 1-based registration order, contiguous
};

struct MatchResult {
    int best_index;   // reg_index of the most similar entry
    double score;     // its similarity to the query
};

struct RecognitionResult {
    std::optional<IdentityLabel> identified;  // nullopt = intruder
    std::optional<int> best_index;            // absent for an empty gallery
    double score;                             // -1 sentinel for an empty gallery
    double threshold_used;

    bool accepted() const { return identified.has_value(); }
};

// Ordered, append-only collection of enrolled embeddings with per-entry
// adaptive thresholds. Enrolling one item is O(current size): the new
// similarities both seed the new entry's threshold and fold into every
// existing different-identity entry's running maximum.
//
// Single writer: enroll() mutates thresholds across the board and must be
// externally serialized. Reads (recognize, best_match, accessors) are safe
// to run concurrently with each other, not with enroll().
class Gallery {
public:
    explicit Gallery(double initial_threshold);

    // Rebuilds a gallery from persisted state, trusting stored thresholds
    // bit-for-bit. Validates structural invariants only.
    static Gallery restore(double initial_threshold, std::vector<GalleryEntry> entries);

    void enroll(const LabeledEmbedding& item);

    // Most similar entry; ties go to the smallest reg_index. nullopt when empty.
    std::optional<MatchResult> best_match(const Embedding& query) const;

    // Open-set recognition against the per-entry adaptive thresholds:
    // accepted iff best score >= best entry's threshold (equality accepts).
    RecognitionResult recognize(const Embedding& query) const;

    // Recomputes every entry's threshold from scratch over the full foreign
    // set. Test oracle for the incremental updates: O(size^2), identical
    // max/clamp arithmetic, so results must match stored thresholds exactly.
    std::vector<double> brute_force_thresholds() const;

    const std::vector<GalleryEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    double initial_threshold() const { return initial_threshold_; }
    std::size_t dim() const { return dim_; } // 0 until the first enroll
    bool contains_label(const IdentityLabel& label) const;
    std::size_t distinct_labels() const { return label_counts_.size(); }

private:
    std::vector<GalleryEntry> entries_;
    std::unordered_map<IdentityLabel, std::size_t> label_counts_;
    double initial_threshold_;
    std::size_t dim_ = 0;
};

} // namespace facegal
