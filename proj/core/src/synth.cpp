#include "facegal/synth.hpp"

#include <cmath>
#include <unordered_map>

#include "facegal/error.hpp"
#include "facegal/rng.hpp"

namespace facegal {

SamplesPerClass SamplesPerClass::fixed(int count) {
    SamplesPerClass s;
    s.kind = Kind::fixed;
    s.fixed_count = count;
    return s;
}

SamplesPerClass SamplesPerClass::geometric(double mean) {
    SamplesPerClass s;
    s.kind = Kind::geometric_mean;
    s.mean = mean;
    return s;
}

SamplesPerClass SamplesPerClass::empirical(std::vector<int> counts) {
    SamplesPerClass s;
    s.kind = Kind::empirical;
    s.counts = std::move(counts);
    return s;
}

namespace {

void validate(const SynthConfig& config) {
    if (config.num_classes < 1) raise(errc::invalid_config, "num_classes must be >= 1");
    if (config.dim < 2) raise(errc::invalid_config, "dim must be >= 2");
    if (!(config.concentration > 0.0) || !std::isfinite(config.concentration)) {
        raise(errc::invalid_config, "concentration must be positive");
    }
    switch (config.samples_per_class.kind) {
        case SamplesPerClass::Kind::fixed:
            if (config.samples_per_class.fixed_count < 1) {
                raise(errc::invalid_config, "fixed samples-per-class must be >= 1");
            }
            break;
        case SamplesPerClass::Kind::geometric_mean:
            if (!(config.samples_per_class.mean >= 1.0)) {
                raise(errc::invalid_config, "geometric samples-per-class mean must be >= 1");
            }
            break;
        case SamplesPerClass::Kind::empirical:
            if (config.samples_per_class.counts.empty()) {
                raise(errc::invalid_config, "empirical samples-per-class list is empty");
            }
            for (int c : config.samples_per_class.counts) {
                if (c < 1) raise(errc::invalid_config, "empirical samples-per-class values must be >= 1");
            }
            break;
    }
}

int draw_sample_count(const SamplesPerClass& spec, Rng& rng) {
    switch (spec.kind) {
        case SamplesPerClass::Kind::fixed:
            return spec.fixed_count;
        case SamplesPerClass::Kind::geometric_mean: {
            const double p = 1.0 / spec.mean;
            if (p >= 1.0) return 1;
            // inversion on {1, 2, ...} with mean 1/p
            const double u = rng.unit_double();
            return 1 + static_cast<int>(std::floor(std::log1p(-u) / std::log1p(-p)));
        }
        case SamplesPerClass::Kind::empirical:
            return spec.counts[static_cast<std::size_t>(rng.below(spec.counts.size()))];
    }
    return 1;
}

std::string class_label(int index, int width) {
    std::string digits = std::to_string(index);
    if (static_cast<int>(digits.size()) < width) {
        digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    }
    return "class_" + digits;
}

} // namespace

std::vector<LabeledEmbedding> generate(const SynthConfig& config) {
    validate(config);

    const int label_width =
        std::max<int>(4, static_cast<int>(std::to_string(config.num_classes).size()));
    const double sigma = 1.0 / std::sqrt(config.concentration * static_cast<double>(config.dim));

    std::vector<LabeledEmbedding> dataset;
    std::vector<double> raw(static_cast<std::size_t>(config.dim));
    for (int c = 0; c < config.num_classes; ++c) {
        Rng rng(config.seed + static_cast<std::uint64_t>(c));
        const int samples = draw_sample_count(config.samples_per_class, rng);

        for (double& v : raw) v = rng.normal();
        const Embedding center = normalize(raw);

        const std::string label = class_label(c + 1, label_width);
        for (int k = 0; k < samples; ++k) {
            for (std::size_t i = 0; i < raw.size(); ++i) {
                raw[i] = center[i] + sigma * rng.normal();
            }
            dataset.push_back(LabeledEmbedding{normalize(raw), label,
                                               label + "_" + std::to_string(k + 1)});
        }
    }
    return dataset;
}

DatasetStats summarize(const std::vector<LabeledEmbedding>& dataset) {
    if (dataset.empty()) raise(errc::empty_dataset, "cannot summarize an empty dataset");

    std::unordered_map<std::string, std::size_t> per_class;
    for (const LabeledEmbedding& item : dataset) ++per_class[item.label];

    DatasetStats stats;
    stats.num_images = dataset.size();
    stats.num_classes = per_class.size();
    stats.mean_per_class =
        static_cast<double>(stats.num_images) / static_cast<double>(stats.num_classes);

    double var = 0.0;
    for (const auto& [label, count] : per_class) {
        const double d = static_cast<double>(count) - stats.mean_per_class;
        var += d * d;
    }
    stats.std_per_class = std::sqrt(var / static_cast<double>(stats.num_classes));
    return stats;
}

} // namespace facegal
