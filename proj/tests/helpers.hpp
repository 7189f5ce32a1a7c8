#pragma once

// Shared fixtures for the test suites: tiny transcript builders, synthetic
// pools and independent brute-force oracles.

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "talkmix/discretize.hpp"
#include "talkmix/pool.hpp"
#include "talkmix/rng.hpp"
#include "talkmix/transcript.hpp"

namespace testutil {

using namespace talkmix;

inline Transcript make_transcript(
    const std::vector<std::tuple<std::string, double, double, std::string>>& words,
    const std::string& id = "t") {
    Transcript t;
    t.recording_id = id;
    for (const auto& [w, b, e, spk] : words) t.words.push_back({w, b, e, spk});
    t.normalize();
    return t;
}

// Random transcript with up to `max_words` words and `max_speakers` speakers.
inline Transcript random_transcript(Rng& rng, int max_words = 20, int max_speakers = 3) {
    int n = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(max_words)));
    int n_spk = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(max_speakers)));
    Transcript t;
    t.recording_id = "rand";
    double cursor = 0.0;
    for (int i = 0; i < n; ++i) {
        // mixture of sequential words, overlaps and occasional long silences
        double jump = rng.uniform(-0.3, 0.9);
        double begin = std::max(0.0, cursor + jump);
        double len = rng.uniform(0.08, 0.8);
        std::string spk = "spk" + std::to_string(rng.uniform_int(static_cast<uint64_t>(n_spk)));
        t.words.push_back({"w" + std::to_string(i), begin, begin + len, spk});
        cursor = std::max(cursor, begin + len);
    }
    t.normalize();
    return t;
}

// Brute-force oracle for time discretization: literal per-window, per-word
// scan with half-open interval tests, independent of the library path.
inline std::vector<int> oracle_time_tokens(const Transcript& t, const std::vector<int>& channels,
                                           double d) {
    double last_end = 0.0;
    for (const auto& w : t.words) last_end = std::max(last_end, w.end);
    long windows = static_cast<long>(std::floor(last_end / d + 1e-9)) + 1;
    std::vector<int> tokens;
    for (long win = 0; win < windows; ++win) {
        int q0 = 0, q1 = 0;
        for (size_t i = 0; i < t.words.size(); ++i) {
            bool hit = t.words[i].begin < d * (win + 1) && t.words[i].end > d * win;
            if (!hit) continue;
            if (channels[i] == 0) q0 = 1;
            else q1 = 1;
        }
        tokens.push_back(q0 + 2 * q1);
    }
    return tokens;
}

// Brute-force oracle for word discretization: pairwise interval scan.
inline std::vector<int> oracle_word_tokens(const Transcript& t,
                                           const std::vector<int>& channels) {
    std::vector<int> tokens;
    for (size_t i = 0; i < t.words.size(); ++i) {
        int q0 = 0, q1 = 0;
        for (size_t j = 0; j < t.words.size(); ++j) {
            bool hit = t.words[j].begin < t.words[i].end && t.words[j].end > t.words[i].begin;
            if (!hit) continue;
            if (channels[j] == 0) q0 = 1;
            else q1 = 1;
        }
        tokens.push_back(q0 + 2 * q1);
    }
    return tokens;
}

// Brute-force n-gram window counting, the oracle for NGramModel::train.
inline std::map<std::vector<int>, std::map<int, uint64_t>> oracle_ngram_counts(
    const std::vector<std::vector<int>>& corpus, int order) {
    std::map<std::vector<int>, std::map<int, uint64_t>> counts;
    for (const auto& seq : corpus) {
        std::vector<int> padded(static_cast<size_t>(order - 1), -1);
        for (int tok : seq) padded.push_back(tok);
        padded.push_back(-2);
        for (size_t pos = static_cast<size_t>(order - 1); pos < padded.size(); ++pos)
            for (int len = 0; len < order; ++len)
                counts[{padded.begin() + static_cast<long>(pos) - len,
                        padded.begin() + static_cast<long>(pos)}][padded[pos]] += 1;
    }
    return counts;
}

inline std::shared_ptr<AudioBuffer> tone(double duration, int rate, float amplitude = 0.1f) {
    auto buf = std::make_shared<AudioBuffer>();
    buf->sample_rate = rate;
    auto n = static_cast<size_t>(std::llround(duration * rate));
    buf->samples.resize(n);
    for (size_t i = 0; i < n; ++i)
        buf->samples[i] = amplitude * std::sin(2.0 * 3.14159265358979 * 440.0 * i / rate);
    return buf;
}

// Pool whose utterance k (k = 1..max_words) has exactly k words of
// `word_len` seconds each, contiguous from 0. Used by the word-based
// round-trip checks.
inline UtterancePool exact_word_pool(int max_words, int rate = 8000, double word_len = 1.0) {
    UtterancePool pool;
    pool.sample_rate = rate;
    for (int k = 1; k <= max_words; ++k) {
        Utterance u;
        u.utterance_id = "w" + std::to_string(k);
        u.duration = word_len * k;
        u.audio = tone(u.duration, rate);
        std::vector<PoolWord> words;
        for (int j = 0; j < k; ++j)
            words.push_back({"t" + std::to_string(j), word_len * j, word_len * (j + 1)});
        u.words = std::move(words);
        pool.utterances.push_back(std::move(u));
    }
    build_indices(pool);
    return pool;
}

// Pool with one utterance of duration (L - 0.5) * d for each run length
// L = 1..max_run, strictly inside [d*(L-1), d*L]. Used by the time-based
// round-trip checks.
inline UtterancePool exact_duration_pool(int max_run, double d, int rate = 8000) {
    UtterancePool pool;
    pool.sample_rate = rate;
    for (int len = 1; len <= max_run; ++len) {
        Utterance u;
        u.utterance_id = "d" + std::to_string(len);
        u.duration = d * (len - 0.5);
        u.audio = tone(u.duration, rate);
        pool.utterances.push_back(std::move(u));
    }
    build_indices(pool);
    return pool;
}

} // namespace testutil
