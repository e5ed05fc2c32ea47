#include "facegal/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "facegal/error.hpp"

namespace facegal {

namespace {

double l2_norm(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(sum);
}

} // namespace

Embedding Embedding::from_unit(std::vector<double> values) {
    if (values.empty()) raise(errc::invalid_config, "embedding must have at least one component");
    for (double v : values) {
        if (!std::isfinite(v)) raise(errc::non_finite, "embedding component is not finite");
    }
    const double norm = l2_norm(values);
    if (std::abs(norm - 1.0) > 1e-6) {
        raise(errc::invalid_config,
              "vector is not unit-norm (|v| = " + std::to_string(norm) + ")");
    }
    return Embedding(std::move(values));
}

Embedding normalize(const std::vector<double>& raw) {
    if (raw.empty()) raise(errc::invalid_config, "cannot normalize an empty vector");
    for (double v : raw) {
        if (!std::isfinite(v)) raise(errc::non_finite, "vector component is not finite");
    }
    const double norm = l2_norm(raw);
    if (!std::isfinite(norm)) raise(errc::non_finite, "vector norm overflows");
    if (norm < 1e-12) raise(errc::zero_vector, "cannot normalize a zero vector");

    std::vector<double> unit(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) unit[i] = raw[i] / norm;
    return Embedding(std::move(unit));
}

double similarity(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        raise(errc::dimension_mismatch,
              "similarity of " + std::to_string(a.dim()) + "-dim and " +
                  std::to_string(b.dim()) + "-dim embeddings");
    }
    const double* pa = a.values().data();
    const double* pb = b.values().data();
    double dot = 0.0;
    for (std::size_t i = 0, n = a.dim(); i < n; ++i) dot += pa[i] * pb[i];
    return std::clamp(dot, -1.0, 1.0);
}

} // namespace facegal
