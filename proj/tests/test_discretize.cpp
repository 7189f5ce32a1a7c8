#include <doctest.h>

#include <set>

#include "talkmix/discretize.hpp"
#include "talkmix/error.hpp"

#include "helpers.hpp"

using namespace talkmix;
using testutil::make_transcript;

namespace {

ActivityMatrix matrix(std::vector<std::array<uint8_t, 2>> cols) {
    ActivityMatrix q;
    q.cols = std::move(cols);
    return q;
}

TokenSequence tokens(std::vector<int> t, TokenKind kind = TokenKind::Time) {
    TokenSequence s;
    s.tokens = std::move(t);
    s.kind = kind;
    return s;
}

} // namespace

TEST_CASE("token encoding table") {
    CHECK(encode_pair({0, 0}) == 0);
    CHECK(encode_pair({1, 0}) == 1);
    CHECK(encode_pair({0, 1}) == 2);
    CHECK(encode_pair({1, 1}) == 3);
    for (int x = 0; x <= 3; ++x) CHECK(encode_pair(decode_token(x)) == x);
}

TEST_CASE("decode_tokens") {
    ActivityMatrix q = decode_tokens(tokens({1, 3, 2}));
    REQUIRE(q.cols.size() == 3);
    CHECK(q.cols[0] == std::array<uint8_t, 2>{1, 0});
    CHECK(q.cols[1] == std::array<uint8_t, 2>{1, 1});
    CHECK(q.cols[2] == std::array<uint8_t, 2>{0, 1});

    CHECK(decode_tokens(tokens({})).cols.empty());
    ActivityMatrix zeros = decode_tokens(tokens({0, 0}));
    CHECK(zeros.cols[0] == std::array<uint8_t, 2>{0, 0});
    CHECK(zeros.cols[1] == std::array<uint8_t, 2>{0, 0});
}

TEST_CASE("discretize_time worked examples") {
    Transcript one = make_transcript({{"a", 0.0, 0.5, "A"}});
    CHECK(discretize_time(one, assign_channels(one), 0.25).tokens == std::vector<int>{1, 1, 0});

    Transcript two = make_transcript({{"a", 0.0, 0.5, "A"}, {"b", 0.25, 0.75, "B"}});
    CHECK(discretize_time(two, assign_channels(two), 0.25).tokens ==
          std::vector<int>{1, 3, 2, 0});

    Transcript gapped = make_transcript({{"a", 0.0, 0.25, "A"}, {"b", 0.5, 0.75, "A"}});
    CHECK(discretize_time(gapped, assign_channels(gapped), 0.25).tokens ==
          std::vector<int>{1, 0, 1, 0});
}

TEST_CASE("discretize_word worked examples") {
    Transcript solo =
        make_transcript({{"a", 0.0, 0.3, "A"}, {"b", 0.3, 0.6, "A"}, {"c", 0.6, 0.9, "A"}});
    CHECK(discretize_word(solo, assign_channels(solo)).tokens == std::vector<int>{1, 1, 1});

    Transcript crossed = make_transcript({{"a", 0.0, 1.0, "A"}, {"b", 0.5, 1.5, "B"}});
    CHECK(discretize_word(crossed, assign_channels(crossed)).tokens == std::vector<int>{3, 3});

    Transcript turn = make_transcript({{"a", 0.0, 1.0, "A"}, {"b", 1.2, 2.0, "B"}});
    CHECK(discretize_word(turn, assign_channels(turn)).tokens == std::vector<int>{1, 2});
}

TEST_CASE("discretize_word rejects unsegmented input") {
    Transcript gapped = make_transcript({{"a", 0.0, 0.4, "A"}, {"b", 1.2, 1.6, "A"}});
    CHECK_THROWS_AS(discretize_word(gapped, assign_channels(gapped), 0.5), DataError);
}

TEST_CASE("consecutive_one worked example and edges") {
    ActivityMatrix q = matrix({{1, 0}, {1, 0}, {1, 1}, {1, 1}, {0, 1}});
    auto runs = consecutive_one(q);
    REQUIRE(runs.size() == 2);
    CHECK(runs[0] == RunSpan{0, 0, 3});
    CHECK(runs[1] == RunSpan{1, 2, 4});

    CHECK(consecutive_one(matrix({{0, 0}, {0, 0}})).empty());

    auto tie = consecutive_one(matrix({{1, 1}}));
    REQUIRE(tie.size() == 2);
    CHECK(tie[0] == RunSpan{0, 0, 0});
    CHECK(tie[1] == RunSpan{1, 0, 0});
}

TEST_CASE("word_indices worked example") {
    ActivityMatrix q = matrix({{1, 0}, {1, 0}, {1, 1}, {1, 1}, {0, 1}});
    CHECK(word_indices(RunSpan{0, 0, 3}, q) == std::vector<int>{0, 1, 2});
    CHECK(word_indices(RunSpan{1, 2, 4}, q) == std::vector<int>{3, 4});
}

TEST_CASE("word_indices sole owner and odd split") {
    ActivityMatrix solo = matrix({{1, 0}, {1, 0}, {1, 0}, {1, 0}});
    CHECK(word_indices(RunSpan{0, 0, 3}, solo) == std::vector<int>{0, 1, 2, 3});

    // shared stretch of 3: 2 positions to the earlier run, 1 to the later
    ActivityMatrix odd = matrix({{1, 0}, {1, 1}, {1, 1}, {1, 1}, {0, 1}});
    CHECK(word_indices(RunSpan{0, 0, 3}, odd) == std::vector<int>{0, 1, 2});
    CHECK(word_indices(RunSpan{1, 1, 4}, odd) == std::vector<int>{3, 4});
}

TEST_CASE("runs cover channel activity exactly") {
    Rng rng(31);
    for (int it = 0; it < 300; ++it) {
        size_t n = rng.uniform_int(12);
        ActivityMatrix q;
        for (size_t i = 0; i < n; ++i)
            q.cols.push_back({static_cast<uint8_t>(rng.uniform_int(2)),
                              static_cast<uint8_t>(rng.uniform_int(2))});
        auto runs = consecutive_one(q);
        for (int ch = 0; ch < 2; ++ch) {
            std::set<int> covered;
            for (const auto& r : runs) {
                if (r.channel != ch) continue;
                REQUIRE(r.begin <= r.end);
                // maximality
                if (r.begin > 0) CHECK(!q.cols[r.begin - 1][ch]);
                if (r.end + 1 < static_cast<int>(n)) CHECK(!q.cols[r.end + 1][ch]);
                for (int i = r.begin; i <= r.end; ++i) {
                    CHECK(q.cols[i][ch]);
                    CHECK(!covered.count(i));  // disjoint
                    covered.insert(i);
                }
            }
            for (size_t i = 0; i < n; ++i)
                CHECK(covered.count(static_cast<int>(i)) == (q.cols[i][ch] ? 1u : 0u));
        }
    }
}

TEST_CASE("owned indices partition all positions") {
    Rng rng(37);
    for (int it = 0; it < 300; ++it) {
        size_t n = rng.uniform_int(12);
        ActivityMatrix q;
        for (size_t i = 0; i < n; ++i)
            q.cols.push_back({static_cast<uint8_t>(rng.uniform_int(2)),
                              static_cast<uint8_t>(rng.uniform_int(2))});
        auto owned = owned_indices(q);
        std::set<int> seen;
        size_t active_positions = 0;
        for (size_t i = 0; i < n; ++i)
            if (q.cols[i][0] || q.cols[i][1]) ++active_positions;
        for (const auto& indices : owned)
            for (int i : indices) {
                CHECK(!seen.count(i));
                seen.insert(i);
            }
        CHECK(seen.size() == active_positions);
    }
}

TEST_CASE("discretization agrees with brute-force oracles") {
    Rng rng(41);
    for (int it = 0; it < 500; ++it) {
        Transcript t = testutil::random_transcript(rng);
        auto c = assign_channels(t);
        CHECK(discretize_time(t, c, 0.25).tokens == testutil::oracle_time_tokens(t, c.channels, 0.25));
        for (const auto& seg : segment_by_silence(t, 0.5)) {
            auto sc = assign_channels(seg);
            CHECK(discretize_word(seg, sc).tokens ==
                  testutil::oracle_word_tokens(seg, sc.channels));
        }
    }
}

TEST_CASE("word tokens never contain zero") {
    Rng rng(43);
    for (int it = 0; it < 200; ++it) {
        Transcript t = testutil::random_transcript(rng);
        for (const auto& seg : segment_by_silence(t, 0.5))
            for (int tok : discretize_word(seg, assign_channels(seg)).tokens) CHECK(tok != 0);
    }
}

TEST_CASE("single-speaker tokens stay on channel 0") {
    Rng rng(47);
    for (int it = 0; it < 100; ++it) {
        Transcript t = testutil::random_transcript(rng, 12, 1);
        for (int tok : discretize_time(t, assign_channels(t), 0.25).tokens)
            CHECK((tok == 0 || tok == 1));
        for (const auto& seg : segment_by_silence(t, 0.5))
            for (int tok : discretize_word(seg, assign_channels(seg)).tokens) CHECK(tok == 1);
    }
}

TEST_CASE("token jsonl round trip") {
    TokenSequence seq = tokens({1, 3, 2, 0}, TokenKind::Time);
    seq.unit = 0.25;
    seq.source_id = "m1";
    TokenSequence back = parse_token_sequence_jsonl(token_sequence_to_jsonl(seq));
    CHECK(back.tokens == seq.tokens);
    CHECK(back.kind == seq.kind);
    CHECK(back.unit == seq.unit);
    CHECK(back.source_id == seq.source_id);

    CHECK_THROWS_AS(parse_token_sequence_jsonl(R"({"source_id":"x","kind":"word","tokens":[0]})"),
                    DataError);
}
