#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "facegal/error.hpp"
#include "facegal/gallery.hpp"
#include "facegal/rng.hpp"

using namespace facegal;

namespace {

LabeledEmbedding item(std::vector<double> raw, const std::string& label,
                      const std::string& source = "") {
    return LabeledEmbedding{normalize(std::move(raw)), label, source};
}

// Random dataset with repeated identities: labels id_0..id_{pool-1}.
std::vector<LabeledEmbedding> random_items(Rng& rng, std::size_t count, std::size_t dim,
                                           std::size_t label_pool) {
    std::vector<LabeledEmbedding> items;
    items.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> raw(dim);
        for (double& v : raw) v = rng.normal();
        items.push_back(LabeledEmbedding{normalize(raw),
                                         "id_" + std::to_string(rng.below(label_pool)),
                                         "s" + std::to_string(i)});
    }
    return items;
}

} // namespace

TEST_CASE("first entry keeps the initial threshold") {
    Gallery g(0.3779);
    g.enroll(item({1.0, 0.0}, "A"));
    REQUIRE(g.size() == 1);
    CHECK(g.entries()[0].threshold == 0.3779);
    CHECK(g.entries()[0].reg_index == 1);
}

TEST_CASE("same-identity entries never move each other's thresholds") {
    Gallery g(0.3779);
    g.enroll(item({1.0, 0.0}, "A"));
    g.enroll(item({1.0, 0.0}, "A"));
    CHECK(g.entries()[0].threshold == 0.3779);
    CHECK(g.entries()[1].threshold == 0.3779);
    CHECK(g.distinct_labels() == 1);
}

TEST_CASE("first foreign entry replaces the initial threshold") {
    Gallery g(0.3779);
    g.enroll(item({1.0, 0.0}, "A"));
    g.enroll(item({0.6, 0.8}, "B"));
    CHECK(g.entries()[0].threshold == 0.6);
    CHECK(g.entries()[1].threshold == 0.6);

    // also when the foreign similarity is below the initial value
    Gallery h(0.9);
    h.enroll(item({1.0, 0.0}, "A"));
    h.enroll(item({0.0, 1.0}, "B"));
    CHECK(h.entries()[0].threshold == 0.0);
    CHECK(h.entries()[1].threshold == 0.0);
}

TEST_CASE("later foreign entries max-fold into existing thresholds") {
    Gallery g(0.3779);
    g.enroll(item({1.0, 0.0}, "A"));
    g.enroll(item({0.0, 1.0}, "B"));   // sim 0 -> both thresholds 0
    g.enroll(item({0.6, 0.8}, "C"));   // sims: 0.6 to A, 0.8 to B
    CHECK(g.entries()[0].threshold == 0.6);
    CHECK(g.entries()[1].threshold == 0.8);
    CHECK(g.entries()[2].threshold == 0.8);
}

TEST_CASE("enroll validates label and dimension") {
    Gallery g(0.5);
    try {
        g.enroll(item({1.0, 0.0}, ""));
        FAIL("expected empty_label");
    } catch (const Error& e) {
        CHECK(e.code() == errc::empty_label);
    }
    g.enroll(item({1.0, 0.0}, "A"));
    try {
        g.enroll(item({1.0, 0.0, 0.0}, "B"));
        FAIL("expected dimension_mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == errc::dimension_mismatch);
    }
}

TEST_CASE("recognize accepts at or above the matched entry's threshold") {
    Gallery g(0.4);
    g.enroll(item({1.0, 0.0}, "A"));  // sole identity keeps sigma = 0.4

    const RecognitionResult hit = g.recognize(normalize({0.6, 0.8}));
    REQUIRE(hit.accepted());
    CHECK(*hit.identified == "A");
    CHECK(hit.score == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(hit.threshold_used == 0.4);
    CHECK(*hit.best_index == 1);

    const RecognitionResult miss = g.recognize(normalize({0.3, 0.9539392014169457}));
    CHECK_FALSE(miss.accepted());
    CHECK(miss.score == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(*miss.best_index == 1);
}

TEST_CASE("recognize accepts exactly at the threshold") {
    Gallery g(0.6);
    g.enroll(item({1.0, 0.0}, "A"));
    const RecognitionResult r = g.recognize(Embedding::from_unit({0.6, 0.8}));
    REQUIRE(r.accepted());        // score 0.6 == threshold 0.6
    CHECK(r.score == 0.6);
    CHECK(r.threshold_used == 0.6);
}

TEST_CASE("argmax ties go to the smallest reg_index") {
    std::vector<GalleryEntry> entries;
    entries.push_back({Embedding::from_unit({1.0, 0.0}), "A", "a1", 0.5, 1});
    entries.push_back({Embedding::from_unit({1.0, 0.0}), "B", "b1", 0.5, 2});
    const Gallery g = Gallery::restore(0.5, std::move(entries));

    const RecognitionResult r = g.recognize(Embedding::from_unit({1.0, 0.0}));
    REQUIRE(r.accepted());
    CHECK(*r.best_index == 1);
    CHECK(*r.identified == "A");
    CHECK(r.score == 1.0);
}

TEST_CASE("empty gallery rejects with sentinel score") {
    const Gallery g(0.3779);
    const RecognitionResult r = g.recognize(normalize({1.0, 0.0}));
    CHECK_FALSE(r.accepted());
    CHECK_FALSE(r.best_index.has_value());
    CHECK(r.score == -1.0);
}

TEST_CASE("restore validates structure") {
    std::vector<GalleryEntry> entries;
    entries.push_back({Embedding::from_unit({1.0, 0.0}), "A", "a1", 0.5, 2});  // gap
    CHECK_THROWS_AS(Gallery::restore(0.5, std::move(entries)), Error);

    std::vector<GalleryEntry> bad_threshold;
    bad_threshold.push_back({Embedding::from_unit({1.0, 0.0}), "A", "a1", 1.5, 1});
    CHECK_THROWS_AS(Gallery::restore(0.5, std::move(bad_threshold)), Error);

    CHECK_THROWS_AS(Gallery(1.5), Error);
}

TEST_CASE("brute-force thresholds on trivial galleries") {
    Gallery g(0.25);
    CHECK(g.brute_force_thresholds().empty());
    g.enroll(item({1.0, 0.0}, "A"));
    const auto single = g.brute_force_thresholds();
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 0.25);
}

TEST_CASE("incremental thresholds equal the brute-force oracle bit-for-bit") {
    Rng rng(123);
    for (int sequence = 0; sequence < 20; ++sequence) {
        const auto items = random_items(rng, 40, 4, 6);
        Gallery g(0.3779);
        for (const auto& it : items) {
            g.enroll(it);
            const auto oracle = g.brute_force_thresholds();
            REQUIRE(oracle.size() == g.size());
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                CHECK(g.entries()[i].threshold == oracle[i]);
            }
        }
    }
}

TEST_CASE("thresholds are non-decreasing once a foreign peer exists") {
    Rng rng(456);
    for (int sequence = 0; sequence < 10; ++sequence) {
        const auto items = random_items(rng, 30, 3, 4);
        Gallery g(0.3779);
        std::vector<double> last;  // previous threshold per entry
        for (const auto& it : items) {
            const bool had_foreign = g.distinct_labels() >= 2;
            g.enroll(it);
            if (had_foreign) {
                for (std::size_t i = 0; i < last.size(); ++i) {
                    CHECK(g.entries()[i].threshold >= last[i]);
                }
            }
            last.clear();
            for (const auto& e : g.entries()) last.push_back(e.threshold);
        }
    }
}

TEST_CASE("final thresholds are independent of registration order") {
    Rng rng(789);
    for (int round = 0; round < 5; ++round) {
        auto items = random_items(rng, 20, 3, 5);

        auto final_state = [&](const std::vector<LabeledEmbedding>& order) {
            Gallery g(0.3779);
            for (const auto& it : order) g.enroll(it);
            std::map<std::string, double> by_source;
            for (const auto& e : g.entries()) by_source[e.source_id] = e.threshold;
            return by_source;
        };

        const auto reference = final_state(items);
        for (int perm = 0; perm < 3; ++perm) {
            rng.shuffle(items);
            const auto shuffled = final_state(items);
            REQUIRE(shuffled.size() == reference.size());
            for (const auto& [source, threshold] : reference) {
                CHECK(std::abs(shuffled.at(source) - threshold) <= 1e-12);
            }
        }
    }
}

TEST_CASE("entries sharing the enrolled label keep their thresholds") {
    Rng rng(1011);
    const auto items = random_items(rng, 15, 3, 3);
    Gallery g(0.2);
    for (const auto& it : items) g.enroll(it);

    // new item whose label matches an existing one
    const auto before = g.brute_force_thresholds();
    std::vector<double> raw{0.3, -0.4, 0.1};
    g.enroll(LabeledEmbedding{normalize(raw), g.entries()[0].label, "extra"});

    for (std::size_t i = 0; i < before.size(); ++i) {
        if (g.entries()[i].label == g.entries()[0].label) {
            CHECK(g.entries()[i].threshold == before[i]);
        }
    }
}
