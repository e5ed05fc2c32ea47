#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facegal/embedding.hpp"

namespace facegal {

// How many samples each synthetic class draws.
struct SamplesPerClass {
    enum class Kind { fixed, geometric_mean, empirical };

    Kind kind = Kind::fixed;
    int fixed_count = 1;
    double mean = 1.0;             // geometric distribution on {1,2,...}
    std::vector<int> counts;       // empirical: drawn uniformly from this list

    static SamplesPerClass fixed(int count);
    static SamplesPerClass geometric(double mean);
    static SamplesPerClass empirical(std::vector<int> counts);
};

struct SynthConfig {
    int num_classes = 1;
    int dim = 2;
    SamplesPerClass samples_per_class;
    double concentration = 1.0;    // within-class tightness; higher = tighter
    std::uint64_t seed = 0;
};

// Draws each class center uniformly on the unit sphere, then each sample as
// center + Gaussian noise with per-component sigma 1/sqrt(concentration*dim),
// renormalized to unit length. Labels are class_0001-style tokens, output is
// class-major, and everything is deterministic in the seed (class c uses the
// substream seed + c).
std::vector<LabeledEmbedding> generate(const SynthConfig& config);

struct DatasetStats {
    std::size_t num_images = 0;
    std::size_t num_classes = 0;
    double mean_per_class = 0.0;
    double std_per_class = 0.0;    // population standard deviation
};

DatasetStats summarize(const std::vector<LabeledEmbedding>& dataset);

} // namespace facegal
