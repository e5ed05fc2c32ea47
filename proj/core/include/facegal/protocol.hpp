#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "facegal/embedding.hpp"
#include "facegal/threshold_policy.hpp"

namespace facegal {

// The five mutually exclusive probe outcomes. A probe is handled correctly
// iff its outcome is true_accept or true_reject.
enum class OutcomeKind {
    true_accept,
    false_reject,
    false_accept,
    true_reject,
    identification_error,
};

const char* to_string(OutcomeKind kind);

struct ProbeOutcome {
    int step;                               // 1-based timeline position t
    OutcomeKind kind;
    double score;                           // best-match similarity, -1 at t=1
    double phi;                             // threshold consulted
    std::optional<IdentityLabel> best_label; // absent at t=1
    IdentityLabel true_label;
};

struct OutcomeCounts {
    std::size_t true_accept = 0;
    std::size_t false_reject = 0;
    std::size_t false_accept = 0;
    std::size_t true_reject = 0;
    std::size_t identification_error = 0;

    std::size_t total() const {
        return true_accept + false_reject + false_accept + true_reject + identification_error;
    }
    std::size_t correct() const { return true_accept + true_reject; }
    void add(OutcomeKind kind);
};

struct RunConfig {
    ThresholdPolicy policy;
    double initial_threshold = 0.0;
    std::size_t probe_count = 0;  // T
    std::size_t dim = 0;
};

struct EvalReport {
    std::vector<ProbeOutcome> outcomes;       // length T
    std::vector<double> temporary_accuracy;   // running (TA+TR)/t after each step
    double final_acc = 0.0;                   // (|TA|+|TR|)/T, equals the curve's last value
    OutcomeCounts counts;
    RunConfig config;
    std::uint64_t seed = 0;                   // shuffle seed that produced this order
};

// Classifies one probe presentation. `enrolled` says whether the probe's
// true identity is already in the gallery; acceptance means score >= phi
// (equality accepts). Exactly one outcome matches any input:
//   accepted, best matches truth            -> true_accept
//   accepted, wrong best, truth enrolled    -> identification_error
//   accepted, truth not enrolled            -> false_accept
//   rejected, truth enrolled                -> false_reject (even if best mismatches)
//   rejected, truth not enrolled            -> true_reject
OutcomeKind classify_outcome(double score, double phi, const IdentityLabel& true_label,
                             const std::optional<IdentityLabel>& best_label, bool enrolled);

// Timeline evaluation: starting from an empty gallery, each item is first
// presented as a probe against the current gallery (threshold from
// `policy`), its outcome recorded, and then enrolled under its true label
// no matter how recognition went. The first probe is always a true_reject.
// `seed` is only echoed into the report.
EvalReport run_protocol(const std::vector<LabeledEmbedding>& dataset,
                        const ThresholdPolicy& policy, double initial_threshold,
                        std::uint64_t seed = 0);

struct ExperimentReport {
    std::vector<EvalReport> runs;        // one per repetition, shuffle seed = base_seed + i
    std::vector<double> final_accs;
    double mean_acc = 0.0;
    double std_acc = 0.0;                // population standard deviation
    std::vector<double> mean_curve;      // step-aligned mean temporary accuracy
    RunConfig config;
    std::uint64_t base_seed = 0;
    int repetitions = 0;
};

// Repeats run_protocol on `repetitions` deterministic shuffles of the
// dataset (seeds base_seed + 0 .. base_seed + repetitions-1). Two policies
// evaluated with the same base_seed see identical registration orders.
ExperimentReport run_experiment(const std::vector<LabeledEmbedding>& dataset,
                                const ThresholdPolicy& policy, double initial_threshold,
                                int repetitions, std::uint64_t base_seed);

} // namespace facegal
