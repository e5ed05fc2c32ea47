#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "facegal/error.hpp"
#include "facegal/io.hpp"
#include "facegal/protocol.hpp"
#include "facegal/synth.hpp"
#include "facegal/threshold_policy.hpp"

using namespace facegal;

namespace {

int exit_code_for(const Error& e) { return e.is_data_error() ? 2 : 3; }

SamplesPerClass parse_samples(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (kind == "fixed") return SamplesPerClass::fixed(std::stoi(arg));
        if (kind == "geomean") return SamplesPerClass::geometric(std::stod(arg));
        if (kind == "empirical") {
            std::vector<int> counts;
            std::size_t pos = 0;
            while (pos < arg.size()) {
                const std::size_t comma = arg.find(',', pos);
                counts.push_back(std::stoi(arg.substr(pos, comma - pos)));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            return SamplesPerClass::empirical(std::move(counts));
        }
    } catch (const std::exception&) {
        raise(errc::invalid_config, "cannot parse --samples '" + spec + "'");
    }
    raise(errc::invalid_config,
          "--samples must be fixed:<n>, geomean:<mu> or empirical:<n1,n2,...>");
}

std::vector<LabeledEmbedding> load_dataset_verbose(const std::string& path) {
    LoadStats stats;
    auto data = load_dataset(path, &stats);
    if (stats.norm_warnings > 0) {
        std::cerr << "warning: " << stats.norm_warnings << " of " << stats.rows
                  << " vectors in '" << path << "' deviated from unit norm by more than 1e-3"
                  << " and were normalized\n";
    }
    return data;
}

int cmd_synth(const std::string& out, int classes, int dim, const std::string& samples,
              const std::string& preset, double concentration, std::uint64_t seed) {
    SynthConfig config;
    config.num_classes = classes;
    config.dim = dim;
    config.concentration = concentration;
    config.seed = seed;

    if (!samples.empty()) {
        config.samples_per_class = parse_samples(samples);
    } else if (preset == "lfw") {
        config.samples_per_class = SamplesPerClass::geometric(2.3);
    } else if (preset == "adience") {
        config.samples_per_class = SamplesPerClass::geometric(8.46);
    } else if (preset == "feret") {
        config.samples_per_class = SamplesPerClass::geometric(11.35);
    } else if (!preset.empty()) {
        raise(errc::invalid_config, "unknown preset '" + preset + "'");
    } else {
        config.samples_per_class = SamplesPerClass::fixed(1);
    }

    const auto data = generate(config);
    save_dataset(out, data);
    const auto stats = summarize(data);
    std::cout << "wrote " << stats.num_images << " embeddings, " << stats.num_classes
              << " classes, " << format_double(stats.mean_per_class) << "+-"
              << format_double(stats.std_per_class) << " images/class to " << out << "\n";
    return 0;
}

int cmd_calibrate(const std::string& dataset_path, std::size_t pair_count, int folds,
                  std::uint64_t seed, double positive_fraction, const std::string& select_on,
                  const std::string& out) {
    const auto data = load_dataset_verbose(dataset_path);
    const auto pairs = sample_pairs(data, pair_count, seed, positive_fraction);
    const CvSelectOn mode = select_on == "test" ? CvSelectOn::test : CvSelectOn::train;
    const auto result = calibrate_fixed_threshold(pairs, folds, seed, mode);

    std::size_t positives = 0;
    for (const auto& p : pairs) positives += p.same_identity ? 1 : 0;

    std::cout << "pairs: " << pairs.size() << " (" << positives << " positive, "
              << pairs.size() - positives << " negative)\n";
    std::cout << "threshold: " << format_double(result.threshold) << "\n";
    for (std::size_t f = 0; f < result.per_fold_thresholds.size(); ++f) {
        std::cout << "fold " << f << ": threshold=" << format_double(result.per_fold_thresholds[f])
                  << " holdout_accuracy=" << format_double(result.per_fold_accuracy[f]) << "\n";
    }
    if (!out.empty()) {
        save_calibration_report(out, result,
                                {dataset_path, pair_count, folds, seed, positive_fraction,
                                 mode == CvSelectOn::test ? "test" : "train"});
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int cmd_enroll(const std::string& snapshot_path, const std::string& dataset_path,
               std::optional<double> initial_threshold) {
    std::optional<Gallery> gallery;
    if (std::filesystem::exists(snapshot_path)) {
        gallery = load_gallery(snapshot_path);
    } else {
        if (!initial_threshold) {
            raise(errc::invalid_config,
                  "snapshot '" + snapshot_path + "' does not exist; pass --init-threshold to create it");
        }
        gallery.emplace(*initial_threshold);
    }

    const auto data = load_dataset_verbose(dataset_path);
    for (const auto& item : data) gallery->enroll(item);
    save_gallery(snapshot_path, *gallery);
    std::cout << "enrolled " << data.size() << " entries (gallery now " << gallery->size()
              << "), wrote " << snapshot_path << "\n";
    return 0;
}

int cmd_identify(const std::string& snapshot_path, const std::string& query_path) {
    const Gallery gallery = load_gallery(snapshot_path);
    const auto queries = load_dataset_verbose(query_path);
    for (const auto& q : queries) {
        const RecognitionResult r = gallery.recognize(q.embedding);
        std::cout << q.source_id << ": "
                  << (r.accepted() ? "identified=" + *r.identified : std::string("intruder"))
                  << " score=" << format_double(r.score)
                  << " threshold=" << format_double(r.threshold_used) << "\n";
    }
    return 0;
}

int cmd_evaluate(const std::string& dataset_path, const std::string& policy_flag,
                 std::optional<double> initial_threshold, int repetitions, std::uint64_t seed,
                 const std::string& report_path, const std::string& curve_path) {
    const auto data = load_dataset_verbose(dataset_path);

    std::vector<ThresholdPolicy> policies;
    if (policy_flag == "adaptive") {
        policies.push_back(ThresholdPolicy::adaptive());
    } else if (policy_flag == "both") {
        if (!initial_threshold) {
            raise(errc::invalid_config,
                  "--policy both uses --init-threshold as the fixed constant; pass it");
        }
        policies.push_back(ThresholdPolicy::adaptive());
        policies.push_back(ThresholdPolicy::fixed(*initial_threshold));
    } else if (policy_flag.rfind("fixed:", 0) == 0) {
        double value = 0.0;
        try {
            value = std::stod(policy_flag.substr(6));
        } catch (const std::exception&) {
            raise(errc::invalid_config, "cannot parse '" + policy_flag + "'");
        }
        policies.push_back(ThresholdPolicy::fixed(value));
        if (!initial_threshold) initial_threshold = value;
    } else {
        raise(errc::invalid_config, "--policy must be adaptive, fixed:<value> or both");
    }
    if (!initial_threshold) {
        raise(errc::invalid_config, "--init-threshold is required for the adaptive policy");
    }

    std::vector<ExperimentReport> experiments;
    for (const ThresholdPolicy& policy : policies) {
        experiments.push_back(run_experiment(data, policy, *initial_threshold, repetitions, seed));
        const ExperimentReport& exp = experiments.back();
        const char* name = policy.kind == ThresholdPolicy::Kind::fixed ? "fixed" : "adaptive";
        std::cout << name << ": mean_acc=" << format_double(exp.mean_acc)
                  << " std=" << format_double(exp.std_acc) << " runs=[";
        for (std::size_t i = 0; i < exp.final_accs.size(); ++i) {
            std::cout << (i ? "," : "") << format_double(exp.final_accs[i]);
        }
        std::cout << "]\n";
    }

    const EvaluateEcho echo{dataset_path, policy_flag, *initial_threshold, repetitions, seed};
    if (!report_path.empty()) {
        save_experiment_report(report_path, experiments, echo);
        std::cout << "wrote " << report_path << "\n";
    }
    if (!curve_path.empty()) {
        save_curve_csv(curve_path, experiments);
        std::cout << "wrote " << curve_path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive-threshold open-set identification gallery"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic embedding dataset");
    std::string synth_out, synth_samples, synth_preset;
    int synth_classes = 1, synth_dim = 128;
    double synth_concentration = 1.0;
    std::uint64_t synth_seed = 0;
    synth->add_option("--out", synth_out, "output dataset CSV")->required();
    synth->add_option("--classes", synth_classes, "number of identities")->required();
    synth->add_option("--dim", synth_dim, "embedding dimension (default 128)");
    synth->add_option("--samples", synth_samples,
                      "samples per class: fixed:<n> | geomean:<mu> | empirical:<n1,n2,...>");
    synth->add_option("--preset", synth_preset,
                      "samples-per-class preset: lfw (2.3) | adience (8.46) | feret (11.35)");
    synth->add_option("--concentration", synth_concentration,
                      "within-class tightness kappa (default 1.0)");
    synth->add_option("--seed", synth_seed, "generator seed (default 0)");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate",
                                         "select a fixed threshold by cross-validation");
    std::string cal_dataset, cal_select = "train", cal_out;
    std::size_t cal_pairs = 6000;
    int cal_folds = 10;
    std::uint64_t cal_seed = 0;
    double cal_positive_fraction = 0.5;
    calibrate->add_option("--dataset", cal_dataset, "dataset CSV")->required();
    calibrate->add_option("--pairs", cal_pairs, "verification pairs to sample (default 6000)");
    calibrate->add_option("--folds", cal_folds, "cross-validation folds (default 10)");
    calibrate->add_option("--seed", cal_seed, "sampling/shuffling seed (default 0)");
    calibrate->add_option("--positive-fraction", cal_positive_fraction,
                          "fraction of same-identity pairs (default 0.5)");
    calibrate->add_option("--select-on", cal_select,
                          "sweep thresholds on 'train' (default) or 'test' folds")
        ->check(CLI::IsMember({"train", "test"}));
    calibrate->add_option("--out", cal_out, "write calibration report JSON here");

    // enroll
    auto* enroll = app.add_subcommand("enroll", "register dataset rows into a gallery snapshot");
    std::string enr_snapshot, enr_dataset;
    std::optional<double> enr_initial;
    enroll->add_option("--snapshot", enr_snapshot, "gallery snapshot JSON (created if missing)")
        ->required();
    enroll->add_option("--dataset", enr_dataset, "dataset CSV with rows to enroll")->required();
    enroll->add_option("--init-threshold", enr_initial,
                       "initial per-entry threshold for a new snapshot");

    // identify
    auto* identify = app.add_subcommand("identify", "recognize query rows against a snapshot");
    std::string id_snapshot, id_query;
    identify->add_option("--snapshot", id_snapshot, "gallery snapshot JSON")->required();
    identify->add_option("--query", id_query, "dataset CSV with query rows")->required();

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "run the timeline evaluation protocol");
    std::string ev_dataset, ev_policy = "adaptive", ev_report, ev_curve;
    std::optional<double> ev_initial;
    int ev_repetitions = 10;
    std::uint64_t ev_seed = 42;
    evaluate->add_option("--dataset", ev_dataset, "dataset CSV")->required();
    evaluate->add_option("--policy", ev_policy,
                         "adaptive | fixed:<value> | both (both reuses --init-threshold as the "
                         "fixed constant and pairs the shuffles)");
    evaluate->add_option("--init-threshold", ev_initial,
                         "initial adaptive threshold (defaults to the fixed value for fixed:<v>)");
    evaluate->add_option("--repetitions", ev_repetitions, "independent shuffles (default 10)");
    evaluate->add_option("--seed", ev_seed, "base shuffle seed, run i uses seed+i (default 42)");
    evaluate->add_option("--report", ev_report, "write aggregate report JSON here");
    evaluate->add_option("--curve", ev_curve, "write temporary-accuracy curve CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) {
            return cmd_synth(synth_out, synth_classes, synth_dim, synth_samples, synth_preset,
                             synth_concentration, synth_seed);
        }
        if (calibrate->parsed()) {
            return cmd_calibrate(cal_dataset, cal_pairs, cal_folds, cal_seed,
                                 cal_positive_fraction, cal_select, cal_out);
        }
        if (enroll->parsed()) return cmd_enroll(enr_snapshot, enr_dataset, enr_initial);
        if (identify->parsed()) return cmd_identify(id_snapshot, id_query);
        if (evaluate->parsed()) {
            return cmd_evaluate(ev_dataset, ev_policy, ev_initial, ev_repetitions, ev_seed,
                                ev_report, ev_curve);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
