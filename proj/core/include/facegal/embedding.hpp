#pragma once

#include <string>
#include <vector>

namespace facegal {

// Identity tokens compare by exact byte equality and are case-sensitive.
using IdentityLabel = std::string;

// Unit-norm feature vector. Instances always hold finite components with
// an L2 norm within 1e-6 of 1; construct through normalize() (rescales) or
// Embedding::from_unit() (validates without touching the components).
class Embedding {
public:
    static Embedding from_unit(std::vector<double> values);

    std::size_t dim() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    bool operator==(const Embedding& other) const { return values_ == other.values_; }

private:
    explicit Embedding(std::vector<double> values) : values_(std::move(values)) {}
    friend Embedding normalize(const std::vector<double>& raw);

    std::vector<double> values_;
};

// Rescales raw to unit L2 norm, preserving direction.
// Raises zero_vector when the norm is below 1e-12, non_finite on NaN/Inf
// components or a norm that overflows.
Embedding normalize(const std::vector<double>& raw);

// Inner product of two unit vectors, clamped to [-1, 1] so downstream
// threshold comparisons never see 1 + epsilon. Exactly symmetric in its
// arguments. Raises dimension_mismatch.
double similarity(const Embedding& a, const Embedding& b);

struct LabeledEmbedding {
    Embedding embedding;
    IdentityLabel label;
    std::string source_id; // provenance, e.g. dataset row id
};

} // namespace facegal
