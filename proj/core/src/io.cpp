#include "facegal/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "facegal/error.hpp"

namespace facegal {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

namespace {

constexpr int kSnapshotVersion = 1;

double parse_double(std::string_view token, std::size_t line_no) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end) {
        raise(errc::parse_error,
              "line " + std::to_string(line_no) + ": bad number '" + std::string(token) + "'");
    }
    return value;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) raise(errc::io_error, "cannot open '" + path + "' for writing");
    return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out.good()) raise(errc::io_error, "write to '" + path + "' failed");
}

void require_csv_safe(const std::string& token, const char* what, const std::string& context) {
    if (token.find_first_of(",\n\r") != std::string::npos) {
        raise(errc::invalid_config,
              std::string(what) + " '" + token + "' (" + context + ") cannot contain ',' or line breaks");
    }
}

ordered_json policy_json(const ThresholdPolicy& policy) {
    ordered_json j;
    if (policy.kind == ThresholdPolicy::Kind::fixed) {
        j["kind"] = "fixed";
        j["value"] = policy.value;
    } else {
        j["kind"] = "adaptive";
    }
    return j;
}

ordered_json counts_json(const OutcomeCounts& counts) {
    return ordered_json{{"true_accept", counts.true_accept},
                        {"false_reject", counts.false_reject},
                        {"false_accept", counts.false_accept},
                        {"true_reject", counts.true_reject},
                        {"identification_error", counts.identification_error}};
}

ordered_json outcomes_json(const std::vector<ProbeOutcome>& outcomes) {
    ordered_json rows = ordered_json::array();
    for (const ProbeOutcome& o : outcomes) {
        ordered_json row{{"step", o.step},
                         {"kind", to_string(o.kind)},
                         {"score", o.score},
                         {"phi", o.phi},
                         {"best_label", o.best_label ? ordered_json(*o.best_label) : ordered_json()},
                         {"true_label", o.true_label}};
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json run_json(const EvalReport& report) {
    ordered_json j;
    j["seed"] = report.seed;
    j["final_acc"] = report.final_acc;
    j["counts"] = counts_json(report.counts);
    j["temporary_accuracy"] = report.temporary_accuracy;
    j["outcomes"] = outcomes_json(report.outcomes);
    return j;
}

void write_json(const std::string& path, const ordered_json& j) {
    std::ofstream out = open_for_write(path);
    out << j.dump(2) << '\n';
    finish_write(out, path);
}

void write_curve_rows(std::ofstream& out, const EvalReport& report) {
    for (std::size_t t = 0; t < report.outcomes.size(); ++t) {
        out << report.outcomes[t].step << ',' << format_double(report.temporary_accuracy[t])
            << ',' << to_string(report.outcomes[t].kind) << '\n';
    }
}

} // namespace

std::vector<LabeledEmbedding> load_dataset(const std::string& path, LoadStats* stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot open '" + path + "'");

    std::string line;
    std::size_t line_no = 0;
    std::size_t declared_dim = 0;
    std::size_t declared_count = 0;
    bool saw_header = false;

    std::vector<LabeledEmbedding> dataset;
    LoadStats local;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        if (!saw_header) {
            unsigned long long d = 0, n = 0;
            if (std::sscanf(line.c_str(), "#dim=%llu,count=%llu", &d, &n) != 2 || d == 0) {
                raise(errc::parse_error,
                      "line " + std::to_string(line_no) + ": expected '#dim=<d>,count=<n>' header");
            }
            declared_dim = static_cast<std::size_t>(d);
            declared_count = static_cast<std::size_t>(n);
            saw_header = true;
            continue;
        }
        if (line.front() == '#') continue;

        std::vector<std::string_view> fields;
        std::string_view rest = line;
        while (true) {
            const std::size_t pos = rest.find(',');
            if (pos == std::string_view::npos) {
                fields.push_back(rest);
                break;
            }
            fields.push_back(rest.substr(0, pos));
            rest.remove_prefix(pos + 1);
        }
        if (fields.size() != declared_dim + 2) {
            raise(errc::parse_error,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(declared_dim + 2) + " fields, got " +
                      std::to_string(fields.size()));
        }
        if (fields[1].empty()) {
            raise(errc::parse_error, "line " + std::to_string(line_no) + ": empty identity label");
        }

        std::vector<double> raw(declared_dim);
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < declared_dim; ++i) {
            raw[i] = parse_double(fields[i + 2], line_no);
            norm_sq += raw[i] * raw[i];
        }
        const double deviation = std::abs(std::sqrt(norm_sq) - 1.0);
        if (deviation > 1e-3) ++local.norm_warnings;

        try {
            // Vectors already unit within the embedding tolerance load
            // verbatim, which keeps load -> save -> load a bit-exact fixed
            // point; anything else is rescaled here.
            Embedding embedding = deviation <= 1e-6 ? Embedding::from_unit(std::move(raw))
                                                    : normalize(raw);
            dataset.push_back(LabeledEmbedding{std::move(embedding), std::string(fields[1]),
                                               std::string(fields[0])});
        } catch (const Error& e) {
            raise(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
        ++local.rows;
    }

    if (!saw_header) raise(errc::parse_error, "missing '#dim=' header in '" + path + "'");
    if (dataset.size() != declared_count) {
        raise(errc::parse_error,
              "header declares count=" + std::to_string(declared_count) + " but file has " +
                  std::to_string(dataset.size()) + " rows");
    }
    if (stats) *stats = local;
    return dataset;
}

void save_dataset(const std::string& path, const std::vector<LabeledEmbedding>& dataset) {
    if (dataset.empty()) raise(errc::empty_dataset, "refusing to save an empty dataset");
    const std::size_t dim = dataset.front().embedding.dim();
    for (const LabeledEmbedding& item : dataset) {
        if (item.embedding.dim() != dim) {
            raise(errc::dimension_mismatch, "dataset has mixed embedding dimensions");
        }
        if (item.label.empty()) raise(errc::empty_label, "dataset item has an empty label");
        require_csv_safe(item.label, "label", item.source_id);
        require_csv_safe(item.source_id, "source_id", item.label);
    }

    std::ofstream out = open_for_write(path);
    out << "#dim=" << dim << ",count=" << dataset.size() << '\n';
    for (const LabeledEmbedding& item : dataset) {
        out << item.source_id << ',' << item.label;
        for (double v : item.embedding.values()) out << ',' << format_double(v);
        out << '\n';
    }
    finish_write(out, path);
}

void save_gallery(const std::string& path, const Gallery& gallery) {
    ordered_json j;
    j["kind"] = "gallery_snapshot";
    j["format_version"] = kSnapshotVersion;
    j["dim"] = gallery.dim();
    j["initial_threshold"] = gallery.initial_threshold();
    ordered_json entries = ordered_json::array();
    for (const GalleryEntry& e : gallery.entries()) {
        entries.push_back(ordered_json{{"reg_index", e.reg_index},
                                       {"source_id", e.source_id},
                                       {"label", e.label},
                                       {"vector", e.embedding.values()},
                                       {"threshold", e.threshold}});
    }
    j["entries"] = std::move(entries);
    write_json(path, j);
}

Gallery load_gallery(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot open '" + path + "'");

    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        raise(errc::parse_error, "'" + path + "' is not valid JSON: " + e.what());
    }

    try {
        const int version = j.at("format_version").get<int>();
        if (version != kSnapshotVersion) {
            raise(errc::version_mismatch,
                  "snapshot format_version " + std::to_string(version) + " is not supported");
        }
        const double initial = j.at("initial_threshold").get<double>();
        const std::size_t dim = j.at("dim").get<std::size_t>();

        std::vector<GalleryEntry> entries;
        for (const auto& row : j.at("entries")) {
            GalleryEntry e{Embedding::from_unit(row.at("vector").get<std::vector<double>>()),
                           row.at("label").get<std::string>(),
                           row.at("source_id").get<std::string>(),
                           row.at("threshold").get<double>(),
                           row.at("reg_index").get<int>()};
            if (e.embedding.dim() != dim) {
                raise(errc::parse_error, "snapshot entry dimension disagrees with header dim");
            }
            entries.push_back(std::move(e));
        }
        return Gallery::restore(initial, std::move(entries));
    } catch (const nlohmann::json::exception& e) {
        raise(errc::parse_error, "malformed snapshot '" + path + "': " + e.what());
    } catch (const Error& e) {
        if (e.code() == errc::version_mismatch) throw;
        raise(errc::parse_error, "invalid snapshot '" + path + "': " + e.what());
    }
}

void save_report(const std::string& path, const EvalReport& report) {
    ordered_json j;
    j["kind"] = "protocol_run";
    j["format_version"] = 1;
    j["config"] = ordered_json{{"policy", policy_json(report.config.policy)},
                               {"initial_threshold", report.config.initial_threshold},
                               {"probe_count", report.config.probe_count},
                               {"dim", report.config.dim}};
    j.update(run_json(report));
    write_json(path, j);
}

void save_curve_csv(const std::string& path, const EvalReport& report) {
    std::ofstream out = open_for_write(path);
    out << "step,temporary_accuracy,outcome\n";
    write_curve_rows(out, report);
    finish_write(out, path);
}

void save_experiment_report(const std::string& path,
                            const std::vector<ExperimentReport>& experiments,
                            const EvaluateEcho& echo) {
    ordered_json j;
    j["kind"] = "evaluate_report";
    j["format_version"] = 1;
    j["config"] = ordered_json{{"dataset", echo.dataset_path},
                               {"policy", echo.policy_flag},
                               {"initial_threshold", echo.initial_threshold},
                               {"repetitions", echo.repetitions},
                               {"seed", echo.seed}};

    ordered_json list = ordered_json::array();
    for (const ExperimentReport& exp : experiments) {
        ordered_json e;
        e["policy"] = policy_json(exp.config.policy);
        e["initial_threshold"] = exp.config.initial_threshold;
        e["probe_count"] = exp.config.probe_count;
        e["dim"] = exp.config.dim;
        e["base_seed"] = exp.base_seed;
        e["repetitions"] = exp.repetitions;
        e["final_accs"] = exp.final_accs;
        e["mean_acc"] = exp.mean_acc;
        e["std_acc"] = exp.std_acc;
        e["mean_curve"] = exp.mean_curve;
        ordered_json runs = ordered_json::array();
        for (const EvalReport& run : exp.runs) runs.push_back(run_json(run));
        e["runs"] = std::move(runs);
        list.push_back(std::move(e));
    }
    j["experiments"] = std::move(list);
    write_json(path, j);
}

void save_curve_csv(const std::string& path,
                    const std::vector<ExperimentReport>& experiments) {
    std::ofstream out = open_for_write(path);
    out << "step,temporary_accuracy,outcome\n";
    for (const ExperimentReport& exp : experiments) {
        const std::string policy_name =
            exp.config.policy.kind == ThresholdPolicy::Kind::fixed ? "fixed" : "adaptive";
        for (std::size_t i = 0; i < exp.runs.size(); ++i) {
            out << "# policy=" << policy_name << ",run=" << i << ",seed=" << exp.runs[i].seed
                << '\n';
            write_curve_rows(out, exp.runs[i]);
        }
    }
    finish_write(out, path);
}

void save_calibration_report(const std::string& path, const CalibrationResult& result,
                             const CalibrationEcho& echo) {
    ordered_json j;
    j["kind"] = "calibration_report";
    j["format_version"] = 1;
    j["config"] = ordered_json{{"dataset", echo.dataset_path},
                               {"pairs", echo.pairs},
                               {"folds", echo.folds},
                               {"seed", echo.seed},
                               {"positive_fraction", echo.positive_fraction},
                               {"select_on", echo.select_on}};
    j["threshold"] = result.threshold;
    j["per_fold_thresholds"] = result.per_fold_thresholds;
    j["per_fold_accuracy"] = result.per_fold_accuracy;
    j["pair_count"] = result.pair_count;
    write_json(path, j);
}

} // namespace facegal
