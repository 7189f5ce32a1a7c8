#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "talkmix/audio.hpp"
#include "talkmix/rng.hpp"

namespace talkmix {

struct PoolWord {
    std::string text;
    double begin = 0.0;
    double end = 0.0;
};

// One single-talker segment of the source corpus. Audio is either inline or
// referenced by path; word timings are optional and, when present, are sorted,
// non-degenerate and within [0, duration].
struct Utterance {
    std::string utterance_id;
    std::string audio_path;                       // empty when audio is inline
    std::shared_ptr<const AudioBuffer> audio;     // null when path-backed
    double duration = 0.0;
    std::optional<std::vector<PoolWord>> words;
    std::string speaker_label;

    bool has_words() const { return words.has_value() && !words->empty(); }
    int word_count() const { return has_words() ? static_cast<int>(words->size()) : 0; }
};

// Mixing material indexed by duration and word count. Immutable after build;
// concurrent queries are safe, each query seeded independently.
struct UtterancePool {
    std::vector<Utterance> utterances;
    std::vector<size_t> duration_index;   // positions sorted by (duration, id)
    std::vector<size_t> wordcount_index;  // positions sorted by (word count, id)
    int sample_rate = 16000;

    bool all_have_words() const;
};

void build_indices(UtterancePool& pool);

// Splits every source utterance with word timings at internal silences longer
// than `silence_threshold`, re-bases audio and word times per segment, then
// samples `pool_size` segments uniformly without replacement (all of them if
// fewer). `boundary_pad` widens each cut at both ends, clamped to the source;
// 0 reproduces plain word-boundary cuts.
UtterancePool build_pool(const std::vector<Utterance>& source, size_t pool_size,
                         double silence_threshold, uint64_t seed,
                         double boundary_pad = 0.0);

// Uniform choice among utterances with duration in [d_min, d_max]; when none
// qualifies, the utterance closest in duration to (d_min+d_max)/2, ties broken
// by smaller duration then utterance_id.
const Utterance& duration_nearest_sample(const UtterancePool& pool, double d_min,
                                         double d_max, Rng& rng);
const Utterance& duration_nearest_sample(const UtterancePool& pool, double d_min,
                                         double d_max, uint64_t seed);

// Uniform choice among utterances with exactly n_words words; otherwise the
// closest word count, ties broken by smaller count then utterance_id.
// Requires a pool with word timings.
const Utterance& word_count_nearest_sample(const UtterancePool& pool, int n_words, Rng& rng);
const Utterance& word_count_nearest_sample(const UtterancePool& pool, int n_words,
                                           uint64_t seed);

// Inline audio or the WAV behind audio_path; validates the sample rate.
AudioBuffer fetch_audio(const Utterance& u, int expected_rate);

// Pool manifest JSONL:
// {"utterance_id", "audio": path, "duration", "words": [[w,b,e]]?, "speaker_label"}
std::string utterance_to_jsonl(const Utterance& u);
Utterance parse_utterance_jsonl(const std::string& line);
std::vector<Utterance> read_pool_manifest(const std::string& path);
void write_pool_manifest(const UtterancePool& pool, const std::string& path);

} // namespace talkmix
