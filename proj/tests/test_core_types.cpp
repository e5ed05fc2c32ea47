#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "facegal/embedding.hpp"
#include "facegal/error.hpp"
#include "facegal/rng.hpp"

using namespace facegal;

namespace {

Embedding random_unit(Rng& rng, std::size_t dim) {
    std::vector<double> raw(dim);
    for (double& v : raw) v = rng.normal();
    return normalize(raw);
}

} // namespace

TEST_CASE("normalize rescales to unit length preserving direction") {
    const Embedding e = normalize({3.0, 4.0});
    CHECK(e[0] == 0.6);
    CHECK(e[1] == 0.8);

    const Embedding unit = normalize({1.0, 0.0, 0.0});
    CHECK(unit[0] == 1.0);
    CHECK(unit[1] == 0.0);
    CHECK(unit[2] == 0.0);
}

TEST_CASE("normalize rejects degenerate input") {
    CHECK_THROWS_WITH_AS(normalize({0.0, 0.0}), doctest::Contains("zero"), Error);
    try {
        normalize({0.0, 0.0});
    } catch (const Error& e) {
        CHECK(e.code() == errc::zero_vector);
    }

    try {
        normalize({1.0, std::numeric_limits<double>::quiet_NaN()});
        FAIL("expected non_finite");
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_finite);
    }

    try {
        normalize({1e300, 1e300});  // norm overflows to inf
        FAIL("expected non_finite");
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_finite);
    }

    CHECK_THROWS_AS(normalize({}), Error);
    CHECK_THROWS_AS(normalize({1e-13}), Error);
}

TEST_CASE("similarity is the clamped inner product") {
    const Embedding ex = normalize({1.0, 0.0});
    const Embedding ey = normalize({0.0, 1.0});
    CHECK(similarity(ex, ey) == 0.0);
    CHECK(similarity(ex, ex) == 1.0);

    const Embedding a = normalize({3.0, 4.0});   // (0.6, 0.8)
    const Embedding b = normalize({4.0, 3.0});   // (0.8, 0.6)
    CHECK(similarity(a, b) == doctest::Approx(0.96).epsilon(1e-12));

    const Embedding e3 = normalize({1.0, 0.0, 0.0});
    try {
        similarity(ex, e3);
        FAIL("expected dimension_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == errc::dimension_mismatch);
    }
}

TEST_CASE("from_unit validates without rescaling") {
    const Embedding e = Embedding::from_unit({0.6, 0.8});
    CHECK(e[0] == 0.6);
    CHECK(e[1] == 0.8);

    CHECK_THROWS_AS(Embedding::from_unit({0.5, 0.5}), Error);
    CHECK_THROWS_AS(Embedding::from_unit({std::numeric_limits<double>::infinity(), 0.0}), Error);
}

TEST_CASE("similarity properties on random unit vectors") {
    Rng rng(20240811);
    for (int iter = 0; iter < 500; ++iter) {
        const std::size_t dim = 2 + rng.below(31);
        const Embedding a = random_unit(rng, dim);
        const Embedding b = random_unit(rng, dim);

        const double s = similarity(a, b);
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
        CHECK(similarity(a, b) == similarity(b, a));  // exact symmetry
        CHECK(similarity(a, a) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("normalize is idempotent and scale-invariant") {
    Rng rng(77);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t dim = 2 + rng.below(15);
        std::vector<double> raw(dim);
        for (double& v : raw) v = rng.normal() * 10.0;

        const Embedding once = normalize(raw);
        const Embedding twice = normalize(once.values());
        for (std::size_t i = 0; i < dim; ++i) {
            CHECK(std::abs(once[i] - twice[i]) <= 1e-12);
        }

        const double scale = 0.5 + rng.unit_double() * 100.0;
        std::vector<double> scaled = raw;
        for (double& v : scaled) v *= scale;
        std::vector<double> other(dim);
        for (double& v : other) v = rng.normal();

        const double s1 = similarity(normalize(raw), normalize(other));
        const double s2 = similarity(normalize(scaled), normalize(other));
        CHECK(std::abs(s1 - s2) <= 1e-6);
    }
}
