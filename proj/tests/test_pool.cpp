#include <doctest.h>

#include <map>

#include "talkmix/error.hpp"
#include "talkmix/pool.hpp"

#include "helpers.hpp"

using namespace talkmix;

namespace {

Utterance plain(const std::string& id, double duration,
                std::optional<std::vector<PoolWord>> words = std::nullopt) {
    Utterance u;
    u.utterance_id = id;
    u.duration = duration;
    u.words = std::move(words);
    return u;
}

} // namespace

TEST_CASE("undersized source keeps every segment") {
    std::vector<Utterance> source = {plain("a", 1.0), plain("b", 2.0), plain("c", 0.5)};
    UtterancePool pool = build_pool(source, 10, 0.5, 1);
    CHECK(pool.utterances.size() == 3);
}

TEST_CASE("silence splitting re-bases segments") {
    Utterance u = plain("u", 1.4,
                        std::vector<PoolWord>{{"x", 0.0, 0.4}, {"y", 1.0, 1.4}});
    UtterancePool pool = build_pool({u}, 10, 0.5, 1);
    REQUIRE(pool.utterances.size() == 2);
    CHECK(pool.utterances[0].duration == doctest::Approx(0.4));
    CHECK(pool.utterances[1].duration == doctest::Approx(0.4));
    CHECK(pool.utterances[0].words->front().begin == doctest::Approx(0.0));
    CHECK(pool.utterances[1].words->front().begin == doctest::Approx(0.0));
    CHECK(pool.utterances[1].words->front().end == doctest::Approx(0.4));
}

TEST_CASE("utterance without timings passes through whole") {
    Utterance u = plain("u", 3.0);
    UtterancePool pool = build_pool({u}, 10, 0.5, 1);
    REQUIRE(pool.utterances.size() == 1);
    CHECK(pool.utterances[0].duration == doctest::Approx(3.0));
}

TEST_CASE("split audio follows the word cuts") {
    Utterance u = plain("u", 2.0,
                        std::vector<PoolWord>{{"x", 0.0, 0.5}, {"y", 1.5, 2.0}});
    u.audio = testutil::tone(2.0, 8000);
    UtterancePool pool = build_pool({u}, 10, 0.5, 1);
    REQUIRE(pool.utterances.size() == 2);
    CHECK(pool.utterances[0].audio->samples.size() == 4000);
    CHECK(pool.utterances[1].audio->samples.size() == 4000);
    // re-basing invariant: duration covers the last word end
    for (const auto& seg : pool.utterances)
        CHECK(seg.duration >= seg.words->back().end - 1e-9);
}

TEST_CASE("pool construction is seed-stable") {
    std::vector<Utterance> source;
    for (int i = 0; i < 50; ++i) source.push_back(plain("u" + std::to_string(i), 0.5 + i * 0.01));
    UtterancePool a = build_pool(source, 20, 0.5, 42);
    UtterancePool b = build_pool(source, 20, 0.5, 42);
    REQUIRE(a.utterances.size() == 20);
    for (size_t i = 0; i < a.utterances.size(); ++i)
        CHECK(a.utterances[i].utterance_id == b.utterances[i].utterance_id);

    UtterancePool c = build_pool(source, 20, 0.5, 43);
    bool same = true;
    for (size_t i = 0; i < a.utterances.size(); ++i)
        same = same && a.utterances[i].utterance_id == c.utterances[i].utterance_id;
    CHECK(!same);
}

TEST_CASE("duration sampling prefers the requested range") {
    UtterancePool pool = build_pool({plain("a", 0.4), plain("b", 0.9), plain("c", 2.0)}, 10, 0.5, 1);

    CHECK(duration_nearest_sample(pool, 0.8, 1.2, uint64_t{5}).utterance_id == "b");

    // midpoint 1.45: 0.9 and 2.0 tie at 0.55, smaller duration wins
    CHECK(duration_nearest_sample(pool, 1.3, 1.6, uint64_t{5}).utterance_id == "b");
}

TEST_CASE("in-range duration choice is uniform-ish and seeded") {
    UtterancePool pool = build_pool({plain("a", 1.0), plain("b", 1.1), plain("c", 5.0)}, 10, 0.5, 1);
    CHECK(duration_nearest_sample(pool, 0.9, 1.2, uint64_t{7}).utterance_id ==
          duration_nearest_sample(pool, 0.9, 1.2, uint64_t{7}).utterance_id);
    std::map<std::string, int> freq;
    for (uint64_t seed = 0; seed < 4000; ++seed)
        ++freq[duration_nearest_sample(pool, 0.9, 1.2, seed).utterance_id];
    CHECK(freq["c"] == 0);
    CHECK(std::abs(freq["a"] - 2000) < 200);
}

TEST_CASE("in-range never loses to the fallback") {
    Rng rng(67);
    for (int it = 0; it < 200; ++it) {
        std::vector<Utterance> source;
        int n = 1 + static_cast<int>(rng.uniform_int(8));
        for (int i = 0; i < n; ++i)
            source.push_back(plain("u" + std::to_string(i), rng.uniform(0.1, 3.0)));
        UtterancePool pool = build_pool(source, 100, 0.5, 1);
        double d_min = rng.uniform(0.0, 2.0);
        double d_max = d_min + rng.uniform(0.05, 1.0);
        bool any_in_range = false;
        for (const auto& u : pool.utterances)
            any_in_range = any_in_range || (u.duration >= d_min && u.duration <= d_max);
        const Utterance& picked = duration_nearest_sample(pool, d_min, d_max, rng);
        if (any_in_range) {
            CHECK(picked.duration >= d_min);
            CHECK(picked.duration <= d_max);
        }
    }
}

TEST_CASE("word count sampling") {
    auto with_words = [](const std::string& id, int n) {
        std::vector<PoolWord> words;
        for (int i = 0; i < n; ++i) words.push_back({"w", i * 0.2, i * 0.2 + 0.2});
        return plain(id, n * 0.2, std::move(words));
    };
    UtterancePool pool =
        build_pool({with_words("a", 2), with_words("b", 3), with_words("c", 5)}, 10, 0.5, 1);

    CHECK(word_count_nearest_sample(pool, 3, uint64_t{3}).utterance_id == "b");
    CHECK(word_count_nearest_sample(pool, 4, uint64_t{3}).utterance_id == "b");  // tie -> smaller
    CHECK(word_count_nearest_sample(pool, 9, uint64_t{3}).utterance_id == "c");

    UtterancePool no_words = build_pool({plain("x", 1.0)}, 10, 0.5, 1);
    CHECK_THROWS_AS(word_count_nearest_sample(no_words, 1, uint64_t{3}), DataError);
}

TEST_CASE("pool manifest round trip") {
    Utterance u = plain("m1", 1.2, std::vector<PoolWord>{{"hi", 0.0, 0.5}, {"yo", 0.6, 1.1}});
    u.audio_path = "audio/m1.wav";
    u.speaker_label = "s3";
    Utterance back = parse_utterance_jsonl(utterance_to_jsonl(u));
    CHECK(back.utterance_id == u.utterance_id);
    CHECK(back.audio_path == u.audio_path);
    CHECK(back.duration == u.duration);
    CHECK(back.speaker_label == u.speaker_label);
    REQUIRE(back.words.has_value());
    CHECK(back.words->size() == 2);
    CHECK(back.words->at(1).text == "yo");

    CHECK_THROWS_AS(parse_utterance_jsonl(R"({"utterance_id":"x","duration":-1})"), DataError);
}
