#include "facegal/protocol.hpp"

#include <cmath>

#include "facegal/error.hpp"
#include "facegal/gallery.hpp"
#include "facegal/rng.hpp"

namespace facegal {

const char* to_string(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::true_accept: return "true_accept";
        case OutcomeKind::false_reject: return "false_reject";
        case OutcomeKind::false_accept: return "false_accept";
        case OutcomeKind::true_reject: return "true_reject";
        case OutcomeKind::identification_error: return "identification_error";
    }
    return "?";
}

void OutcomeCounts::add(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::true_accept: ++true_accept; break;
        case OutcomeKind::false_reject: ++false_reject; break;
        case OutcomeKind::false_accept: ++false_accept; break;
        case OutcomeKind::true_reject: ++true_reject; break;
        case OutcomeKind::identification_error: ++identification_error; break;
    }
}

OutcomeKind classify_outcome(double score, double phi, const IdentityLabel& true_label,
                             const std::optional<IdentityLabel>& best_label, bool enrolled) {
    const bool accepted = score >= phi;
    if (accepted) {
        if (best_label && *best_label == true_label) return OutcomeKind::true_accept;
        if (enrolled) return OutcomeKind::identification_error;
        return OutcomeKind::false_accept;
    }
    return enrolled ? OutcomeKind::false_reject : OutcomeKind::true_reject;
}

EvalReport run_protocol(const std::vector<LabeledEmbedding>& dataset,
                        const ThresholdPolicy& policy, double initial_threshold,
                        std::uint64_t seed) {
    if (dataset.empty()) raise(errc::empty_dataset, "protocol needs at least one probe");
    const std::size_t dim = dataset.front().embedding.dim();
    for (const LabeledEmbedding& item : dataset) {
        if (item.embedding.dim() != dim) {
            raise(errc::dimension_mismatch, "dataset has mixed embedding dimensions");
        }
    }

    const std::size_t T = dataset.size();
    EvalReport report;
    report.outcomes.reserve(T);
    report.temporary_accuracy.reserve(T);
    report.config = RunConfig{policy, initial_threshold, T, dim};
    report.seed = seed;

    Gallery gallery(initial_threshold);
    std::size_t correct = 0;
    for (std::size_t t = 1; t <= T; ++t) {
        const LabeledEmbedding& probe = dataset[t - 1];
        ProbeOutcome outcome;
        outcome.step = static_cast<int>(t);
        outcome.true_label = probe.label;

        if (gallery.empty()) {
            // Nothing to match: forced rejection of a necessarily-unknown
            // identity. phi records the constant for the fixed policy and
            // the initial threshold a first entry would carry otherwise.
            outcome.score = -1.0;
            outcome.phi = policy.kind == ThresholdPolicy::Kind::fixed ? policy.value
                                                                      : initial_threshold;
            outcome.best_label = std::nullopt;
            outcome.kind = OutcomeKind::true_reject;
        } else {
            const MatchResult match = *gallery.best_match(probe.embedding);
            outcome.score = match.score;
            outcome.phi = evaluate_phi(policy, gallery, match.best_index);
            outcome.best_label =
                gallery.entries()[static_cast<std::size_t>(match.best_index) - 1].label;
            outcome.kind = classify_outcome(outcome.score, outcome.phi, probe.label,
                                            outcome.best_label,
                                            gallery.contains_label(probe.label));
        }

        report.counts.add(outcome.kind);
        if (outcome.kind == OutcomeKind::true_accept || outcome.kind == OutcomeKind::true_reject) {
            ++correct;
        }
        report.temporary_accuracy.push_back(static_cast<double>(correct) /
                                            static_cast<double>(t));
        report.outcomes.push_back(std::move(outcome));

        gallery.enroll(probe);
    }

    report.final_acc = static_cast<double>(correct) / static_cast<double>(T);
    return report;
}

ExperimentReport run_experiment(const std::vector<LabeledEmbedding>& dataset,
                                const ThresholdPolicy& policy, double initial_threshold,
                                int repetitions, std::uint64_t base_seed) {
    if (repetitions < 1) raise(errc::invalid_config, "repetitions must be >= 1");
    if (dataset.empty()) raise(errc::empty_dataset, "experiment needs a nonempty dataset");

    ExperimentReport report;
    report.base_seed = base_seed;
    report.repetitions = repetitions;
    report.runs.reserve(static_cast<std::size_t>(repetitions));
    report.final_accs.reserve(static_cast<std::size_t>(repetitions));

    for (int i = 0; i < repetitions; ++i) {
        const std::uint64_t run_seed = base_seed + static_cast<std::uint64_t>(i);
        std::vector<std::size_t> order(dataset.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        Rng rng(run_seed);
        rng.shuffle(order);

        std::vector<LabeledEmbedding> shuffled;
        shuffled.reserve(dataset.size());
        for (std::size_t k : order) shuffled.push_back(dataset[k]);

        report.runs.push_back(run_protocol(shuffled, policy, initial_threshold, run_seed));
        report.final_accs.push_back(report.runs.back().final_acc);
    }

    report.config = report.runs.front().config;

    double sum = 0.0;
    for (double a : report.final_accs) sum += a;
    report.mean_acc = sum / static_cast<double>(repetitions);
    double var = 0.0;
    for (double a : report.final_accs) var += (a - report.mean_acc) * (a - report.mean_acc);
    report.std_acc = std::sqrt(var / static_cast<double>(repetitions));

    const std::size_t T = report.runs.front().temporary_accuracy.size();
    report.mean_curve.assign(T, 0.0);
    for (const EvalReport& run : report.runs) {
        for (std::size_t t = 0; t < T; ++t) report.mean_curve[t] += run.temporary_accuracy[t];
    }
    for (double& v : report.mean_curve) v /= static_cast<double>(repetitions);

    return report;
}

} // namespace facegal
