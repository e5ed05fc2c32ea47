#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facegal/embedding.hpp"
#include "facegal/gallery.hpp"
#include "facegal/protocol.hpp"
#include "facegal/threshold_policy.hpp"

namespace facegal {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

struct LoadStats {
    std::size_t rows = 0;
    std::size_t norm_warnings = 0;  // rows whose norm deviated from 1 by > 1e-3
};

// Dataset CSV: one `#dim=<d>,count=<n>` header line, then
// `<source_id>,<label>,<v1>,...,<vd>` rows (UTF-8, LF). Vectors are
// normalized on load; parse failures report the 1-based line number.
std::vector<LabeledEmbedding> load_dataset(const std::string& path, LoadStats* stats = nullptr);
void save_dataset(const std::string& path, const std::vector<LabeledEmbedding>& dataset);

// Gallery snapshot JSON. load(save(g)) reproduces the gallery with
// bit-identical vectors and thresholds; unknown format versions are
// rejected with version_mismatch.
void save_gallery(const std::string& path, const Gallery& gallery);
Gallery load_gallery(const std::string& path);

// Single protocol run: JSON report plus a step,temporary_accuracy,outcome
// curve CSV.
void save_report(const std::string& path, const EvalReport& report);
void save_curve_csv(const std::string& path, const EvalReport& report);

struct EvaluateEcho {
    std::string dataset_path;
    std::string policy_flag;       // as requested: adaptive | fixed:V | both
    double initial_threshold = 0.0;
    int repetitions = 0;
    std::uint64_t seed = 0;
};

// Aggregate report for one or more experiments (e.g. adaptive and fixed on
// paired shuffles). Embeds every run's outcome log. The curve CSV keeps the
// single-run schema, with `# policy=<p>,run=<i>,seed=<s>` lines separating
// sections.
void save_experiment_report(const std::string& path,
                            const std::vector<ExperimentReport>& experiments,
                            const EvaluateEcho& echo);
void save_curve_csv(const std::string& path,
                    const std::vector<ExperimentReport>& experiments);

struct CalibrationEcho {
    std::string dataset_path;
    std::size_t pairs = 0;
    int folds = 0;
    std::uint64_t seed = 0;
    double positive_fraction = 0.5;
    std::string select_on = "train";
};

void save_calibration_report(const std::string& path, const CalibrationResult& result,
                             const CalibrationEcho& echo);

} // namespace facegal
