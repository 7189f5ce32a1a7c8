#include <doctest.h>

#include <algorithm>

#include "talkmix/error.hpp"
#include "talkmix/stats.hpp"

#include "helpers.hpp"

using namespace talkmix;
using testutil::make_transcript;

TEST_CASE("single-speaker corpus has zero overlap") {
    auto t = make_transcript({{"a", 0.0, 1.0, "A"}, {"b", 1.2, 2.0, "A"}});
    OverlapStats s = compute_stats({t}, 0.25);
    CHECK(s.overlap_ratio == 0.0);
    CHECK(s.overlapped_speech == 0.0);
    CHECK(s.total_speech == doctest::Approx(1.8));
    CHECK(s.union_speech == doctest::Approx(1.8));
}

TEST_CASE("identical speaker intervals overlap fully") {
    auto t = make_transcript({{"a", 0.0, 1.0, "A"}, {"b", 0.0, 1.0, "B"}});
    OverlapStats s = compute_stats({t}, 0.25);
    CHECK(s.overlap_ratio == doctest::Approx(1.0));
}

TEST_CASE("partial overlap worked example") {
    auto t = make_transcript({{"a", 0.0, 1.0, "A"}, {"b", 0.5, 1.5, "B"}});
    OverlapStats s = compute_stats({t}, 0.25);
    CHECK(s.total_speech == doctest::Approx(2.0));
    CHECK(s.overlapped_speech == doctest::Approx(0.5));
    CHECK(s.union_speech == doctest::Approx(1.5));
    CHECK(s.overlap_ratio == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("same-speaker overlap does not count") {
    auto t = make_transcript({{"a", 0.0, 1.0, "A"}, {"b", 0.5, 1.5, "A"}});
    OverlapStats s = compute_stats({t}, 0.25);
    CHECK(s.overlapped_speech == 0.0);
    CHECK(s.union_speech == doctest::Approx(1.5));
}

TEST_CASE("token histogram counts every window") {
    auto t = make_transcript({{"a", 0.0, 0.5, "A"}, {"b", 0.25, 0.75, "B"}});
    OverlapStats s = compute_stats({t}, 0.25);
    // discretize_time gives [1,3,2,0]
    CHECK(s.token_histogram == std::array<uint64_t, 4>{1, 1, 1, 1});
    uint64_t total = 0;
    for (auto v : s.token_histogram) total += v;
    CHECK(total == 4);
    // both channels run for 2 windows, trailing silence run of 1
    CHECK(s.run_length_histograms[0] == std::map<int, uint64_t>{{2, 1}});
    CHECK(s.run_length_histograms[1] == std::map<int, uint64_t>{{2, 1}});
    CHECK(s.silence_gap_histogram == std::map<int, uint64_t>{{1, 1}});
}

TEST_CASE("stats are order invariant") {
    Rng rng(89);
    std::vector<Transcript> corpus;
    for (int i = 0; i < 10; ++i) corpus.push_back(testutil::random_transcript(rng));
    OverlapStats a = compute_stats(corpus, 0.25);
    std::reverse(corpus.begin(), corpus.end());
    OverlapStats b = compute_stats(corpus, 0.25);
    CHECK(a.total_speech == doctest::Approx(b.total_speech));
    CHECK(a.overlap_ratio == doctest::Approx(b.overlap_ratio));
    CHECK(a.token_histogram == b.token_histogram);
}

TEST_CASE("compare identical reports") {
    auto t = make_transcript({{"a", 0.0, 1.0, "A"}, {"b", 0.5, 1.5, "B"}});
    OverlapStats s = compute_stats({t}, 0.25);
    StatsComparison c = compare_stats(s, s);
    CHECK(c.overlap_ratio.abs_diff == 0.0);
    CHECK(c.total_speech.abs_diff == 0.0);
    CHECK(c.token_histogram_tv == 0.0);
}

TEST_CASE("disjoint token histograms have TV distance one") {
    OverlapStats real;
    real.token_histogram = {10, 0, 0, 0};
    OverlapStats sim;
    sim.token_histogram = {0, 5, 5, 0};
    CHECK(compare_stats(real, sim).token_histogram_tv == doctest::Approx(1.0));
}

TEST_CASE("tv distance matches a hand computation") {
    OverlapStats real;
    real.token_histogram = {5, 3, 2, 0};  // 0.5, 0.3, 0.2, 0
    OverlapStats sim;
    sim.token_histogram = {4, 4, 1, 1};  // 0.4, 0.4, 0.1, 0.1
    // 0.5*(0.1+0.1+0.1+0.1) = 0.2
    CHECK(compare_stats(real, sim).token_histogram_tv == doctest::Approx(0.2));
}

TEST_CASE("compare rejects unit mismatch") {
    OverlapStats a;
    a.d = 0.25;
    OverlapStats b;
    b.d = 0.5;
    CHECK_THROWS_AS(compare_stats(a, b), DataError);
}

TEST_CASE("stats report round trips through json") {
    auto t = make_transcript({{"a", 0.0, 1.0, "A"}, {"b", 0.5, 1.5, "B"}, {"c", 2.5, 3.0, "A"}});
    OverlapStats s = compute_stats({t}, 0.25);
    OverlapStats back = parse_stats_json(stats_to_json(s));
    CHECK(back.d == s.d);
    CHECK(back.total_speech == s.total_speech);
    CHECK(back.overlap_ratio == s.overlap_ratio);
    CHECK(back.token_histogram == s.token_histogram);
    CHECK(back.run_length_histograms[0] == s.run_length_histograms[0]);
    CHECK(back.silence_gap_histogram == s.silence_gap_histogram);
}

TEST_CASE("empty input is rejected") {
    CHECK_THROWS_AS(compute_stats({}, 0.25), DataError);
}
