#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "talkmix/transcript.hpp"

namespace talkmix {

enum class TokenKind { Time, Word };

// Discretized speaker-overlap pattern. Tokens take values in {0,1,2,3}:
// token = q[0] + 2*q[1] where q[c] is the activity of virtual channel c.
// Word-kind sequences never contain 0.
struct TokenSequence {
    std::vector<int> tokens;
    TokenKind kind = TokenKind::Time;
    double unit = 0.25;         // window length d in seconds; meaningful for Time only
    std::string source_id;
};

// Per-position binary activity pair of the two virtual channels.
struct ActivityMatrix {
    std::vector<std::array<uint8_t, 2>> cols;
};

// Maximal run of consecutive activity on one channel, inclusive indices.
struct RunSpan {
    int channel = 0;
    int begin = 0;
    int end = 0;

    bool operator==(const RunSpan&) const = default;
};

inline int encode_pair(const std::array<uint8_t, 2>& q) { return q[0] + 2 * q[1]; }
inline std::array<uint8_t, 2> decode_token(int x) {
    return {static_cast<uint8_t>(x & 1), static_cast<uint8_t>((x >> 1) & 1)};
}

ActivityMatrix decode_tokens(const TokenSequence& seq);

// One token per d-second window, windows 0 .. floor(last_end / d) inclusive.
// A channel is active in a window when some word on that channel intersects
// it; all intervals are half-open [begin, end), so touching endpoints do not
// overlap. The loop bound keeps the trailing window even when the last end
// falls exactly on a window boundary, yielding a trailing 0 token.
TokenSequence discretize_time(const Transcript& t, const ChannelAssignment& c, double d);

// One token per word: a channel is active for word i when any word on that
// channel (including i itself) intersects [b_i, e_i). Requires a silence-free
// segment; a gap longer than `silence_threshold` is an error.
TokenSequence discretize_word(const Transcript& t, const ChannelAssignment& c,
                              double silence_threshold = 0.5);

// All maximal runs of 1s per channel, in chronological order of begin index;
// ties broken channel 0 first.
std::vector<RunSpan> consecutive_one(const ActivityMatrix& q);

// Pattern positions owned by each run, parallel to consecutive_one(q).
// A position where only one channel is active belongs to that channel's run.
// Each maximal both-active stretch of length k is split: the earlier ceil(k/2)
// positions go to the run that started earlier (ties: channel 0), the rest to
// the later run. Every position is owned by exactly one run.
std::vector<std::vector<int>> owned_indices(const ActivityMatrix& q);

// Owned positions of a single run produced by consecutive_one(q).
std::vector<int> word_indices(const RunSpan& run, const ActivityMatrix& q);

// Token sequence JSONL: {"source_id", "kind": "time"|"word", "d"?, "tokens"}.
std::string token_sequence_to_jsonl(const TokenSequence& seq);
TokenSequence parse_token_sequence_jsonl(const std::string& line);
std::vector<TokenSequence> read_token_sequences(const std::string& path);
void write_token_sequences(const std::vector<TokenSequence>& seqs, const std::string& path);

} // namespace talkmix
