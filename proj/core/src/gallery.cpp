#include "facegal/gallery.hpp"

#include <algorithm>
#include <cmath>

#include "facegal/error.hpp"

namespace facegal {

Gallery::Gallery(double initial_threshold) : initial_threshold_(initial_threshold) {
    if (!std::isfinite(initial_threshold) || initial_threshold < -1.0 || initial_threshold > 1.0) {
        raise(errc::invalid_config, "initial threshold must lie in [-1, 1]");
    }
}

Gallery Gallery::restore(double initial_threshold, std::vector<GalleryEntry> entries) {
    Gallery g(initial_threshold);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const GalleryEntry& e = entries[i];
        if (e.reg_index != static_cast<int>(i) + 1) {
            raise(errc::invalid_config, "reg_index values must be contiguous from 1");
        }
        if (e.label.empty()) raise(errc::empty_label, "gallery entry has an empty label");
        if (!std::isfinite(e.threshold) || e.threshold < -1.0 || e.threshold > 1.0) {
            raise(errc::invalid_config, "entry threshold must lie in [-1, 1]");
        }
        if (i == 0) {
            g.dim_ = e.embedding.dim();
        } else if (e.embedding.dim() != g.dim_) {
            raise(errc::dimension_mismatch, "gallery entries have mixed dimensions");
        }
        ++g.label_counts_[e.label];
    }
    g.entries_ = std::move(entries);
    return g;
}

void Gallery::enroll(const LabeledEmbedding& item) {
    if (item.label.empty()) raise(errc::empty_label, "cannot enroll an empty identity label");
    if (entries_.empty()) {
        dim_ = item.embedding.dim();
    } else if (item.embedding.dim() != dim_) {
        raise(errc::dimension_mismatch,
              "enrolling a " + std::to_string(item.embedding.dim()) +
                  "-dim embedding into a " + std::to_string(dim_) + "-dim gallery");
    }

    // With a single identity present no entry has a foreign peer yet, so the
    // first foreign similarity replaces the initial threshold instead of
    // max-folding into it.
    const bool had_foreign_peers = label_counts_.size() >= 2;

    double new_threshold = initial_threshold_;
    bool any_foreign = false;
    for (GalleryEntry& e : entries_) {
        if (e.label == item.label) continue;
        const double s = similarity(e.embedding, item.embedding);
        e.threshold = had_foreign_peers ? std::max(e.threshold, s) : s;
        new_threshold = any_foreign ? std::max(new_threshold, s) : s;
        any_foreign = true;
    }

    entries_.push_back(GalleryEntry{item.embedding, item.label, item.source_id,
                                    new_threshold, static_cast<int>(entries_.size()) + 1});
    ++label_counts_[item.label];
}

std::optional<MatchResult> Gallery::best_match(const Embedding& query) const {
    if (entries_.empty()) return std::nullopt;
    if (query.dim() != dim_) {
        raise(errc::dimension_mismatch, "query dimension does not match the gallery");
    }
    std::size_t best = 0;
    double best_score = similarity(query, entries_[0].embedding);
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        const double s = similarity(query, entries_[i].embedding);
        if (s > best_score) {  // strict: ties keep the smallest reg_index
            best = i;
            best_score = s;
        }
    }
    return MatchResult{entries_[best].reg_index, best_score};
}

RecognitionResult Gallery::recognize(const Embedding& query) const {
    const auto match = best_match(query);
    if (!match) {
        // Empty gallery: always an intruder. The sentinel score is -1 and the
        // reported threshold is the initial value a first entry would carry.
        return RecognitionResult{std::nullopt, std::nullopt, -1.0, initial_threshold_};
    }
    const GalleryEntry& best = entries_[static_cast<std::size_t>(match->best_index) - 1];
    if (match->score >= best.threshold) {
        return RecognitionResult{best.label, match->best_index, match->score, best.threshold};
    }
    return RecognitionResult{std::nullopt, match->best_index, match->score, best.threshold};
}

std::vector<double> Gallery::brute_force_thresholds() const {
    std::vector<double> out;
    out.reserve(entries_.size());
    for (const GalleryEntry& e : entries_) {
        double threshold = initial_threshold_;
        bool any_foreign = false;
        for (const GalleryEntry& v : entries_) {
            if (v.label == e.label) continue;
            const double s = similarity(e.embedding, v.embedding);
            threshold = any_foreign ? std::max(threshold, s) : s;
            any_foreign = true;
        }
        out.push_back(threshold);
    }
    return out;
}

bool Gallery::contains_label(const IdentityLabel& label) const {
    return label_counts_.find(label) != label_counts_.end();
}

} // namespace facegal
