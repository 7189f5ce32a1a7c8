#include "talkmix/pool.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "talkmix/error.hpp"

namespace talkmix {

using nlohmann::json;

bool UtterancePool::all_have_words() const {
    return std::all_of(utterances.begin(), utterances.end(),
                       [](const Utterance& u) { return u.has_words(); });
}

namespace {

void validate_utterance(const Utterance& u) {
    if (!(u.duration > 0))
        throw DataError("utterance '" + u.utterance_id + "': duration must be positive");
    if (!u.words) return;
    double prev_end = 0.0;
    for (const auto& w : u.words.value()) {
        if (!(w.end > w.begin))
            throw DataError("utterance '" + u.utterance_id + "': degenerate word timing");
        if (w.begin < prev_end - 1e-9 || w.begin < 0 || w.end > u.duration + 1e-9)
            throw DataError("utterance '" + u.utterance_id + "': word timings out of order or range");
        prev_end = w.end;
    }
}

// Split one utterance at internal silences (gaps between consecutive words
// longer than threshold). Cuts run from word boundaries padded by `pad`,
// clamped to the source; audio and word times are re-based per segment.
std::vector<Utterance> split_utterance(const Utterance& u, double silence_threshold,
                                       double pad) {
    if (!u.has_words()) return {u};  // cannot locate silences without timings

    const auto& words = u.words.value();
    std::vector<std::pair<size_t, size_t>> groups;  // [first, last] word index
    size_t first = 0;
    for (size_t i = 1; i < words.size(); ++i) {
        if (words[i].begin - words[i - 1].end > silence_threshold) {
            groups.emplace_back(first, i - 1);
            first = i;
        }
    }
    groups.emplace_back(first, words.size() - 1);
    if (groups.size() == 1) return {u};

    std::shared_ptr<const AudioBuffer> source_audio = u.audio;
    if (!source_audio && !u.audio_path.empty())
        source_audio = std::make_shared<AudioBuffer>(read_wav(u.audio_path));

    std::vector<Utterance> segments;
    for (size_t g = 0; g < groups.size(); ++g) {
        auto [lo, hi] = groups[g];
        double cut_begin = std::max(0.0, words[lo].begin - pad);
        double cut_end = std::min(u.duration, words[hi].end + pad);

        Utterance seg;
        seg.utterance_id = u.utterance_id + "-" + std::to_string(g);
        seg.speaker_label = u.speaker_label;
        seg.duration = cut_end - cut_begin;
        std::vector<PoolWord> seg_words;
        for (size_t i = lo; i <= hi; ++i)
            seg_words.push_back({words[i].text, words[i].begin - cut_begin,
                                 words[i].end - cut_begin});
        seg.words = std::move(seg_words);

        if (source_audio) {
            auto sliced = std::make_shared<AudioBuffer>();
            sliced->sample_rate = source_audio->sample_rate;
            int64_t s0 = seconds_to_samples(cut_begin, sliced->sample_rate);
            int64_t s1 = seconds_to_samples(cut_end, sliced->sample_rate);
            s0 = std::clamp<int64_t>(s0, 0, static_cast<int64_t>(source_audio->samples.size()));
            s1 = std::clamp<int64_t>(s1, s0, static_cast<int64_t>(source_audio->samples.size()));
            sliced->samples.assign(source_audio->samples.begin() + s0,
                                   source_audio->samples.begin() + s1);
            seg.audio = std::move(sliced);
        }
        segments.push_back(std::move(seg));
    }
    return segments;
}

} // namespace

void build_indices(UtterancePool& pool) {
    auto& us = pool.utterances;
    pool.duration_index.resize(us.size());
    pool.wordcount_index.resize(us.size());
    std::iota(pool.duration_index.begin(), pool.duration_index.end(), size_t{0});
    std::iota(pool.wordcount_index.begin(), pool.wordcount_index.end(), size_t{0});
    std::sort(pool.duration_index.begin(), pool.duration_index.end(), [&](size_t a, size_t b) {
        if (us[a].duration != us[b].duration) return us[a].duration < us[b].duration;
        return us[a].utterance_id < us[b].utterance_id;
    });
    std::sort(pool.wordcount_index.begin(), pool.wordcount_index.end(), [&](size_t a, size_t b) {
        if (us[a].word_count() != us[b].word_count()) return us[a].word_count() < us[b].word_count();
        return us[a].utterance_id < us[b].utterance_id;
    });
}

UtterancePool build_pool(const std::vector<Utterance>& source, size_t pool_size,
                         double silence_threshold, uint64_t seed, double boundary_pad) {
    if (source.empty()) throw DataError("build_pool: empty source");
    if (pool_size < 1) throw DataError("build_pool: pool_size must be >= 1");

    std::vector<Utterance> segments;
    for (const auto& u : source) {
        validate_utterance(u);
        for (auto& seg : split_utterance(u, silence_threshold, boundary_pad))
            segments.push_back(std::move(seg));
    }

    UtterancePool pool;
    if (segments.size() <= pool_size) {
        pool.utterances = std::move(segments);
    } else {
        // Uniform subset without replacement; keep segment order stable.
        Rng rng(seed);
        std::vector<size_t> idx(segments.size());
        std::iota(idx.begin(), idx.end(), size_t{0});
        for (size_t i = 0; i < pool_size; ++i) {
            size_t j = i + static_cast<size_t>(rng.uniform_int(idx.size() - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(pool_size);
        std::sort(idx.begin(), idx.end());
        for (size_t i : idx) pool.utterances.push_back(std::move(segments[i]));
    }

    for (const auto& u : pool.utterances)
        if (u.audio) pool.sample_rate = u.audio->sample_rate;
    build_indices(pool);
    return pool;
}

namespace {

// Deterministic nearest-element fallback over a (key, id)-sorted index.
// Ties on |key - target| prefer the smaller key; equal keys are resolved by
// the index order (smaller utterance_id first). Distances within 1e-9 count
// as ties so that decimally symmetric cases are not broken by float noise.
size_t nearest_in_index(const UtterancePool& pool, const std::vector<size_t>& index,
                        double (*key_of)(const Utterance&), double target) {
    size_t best = index.front();
    double best_dist = 0.0;
    bool have = false;
    for (size_t pos : index) {
        double dist = std::abs(key_of(pool.utterances[pos]) - target);
        if (!have || dist < best_dist - 1e-9) {
            best = pos;
            best_dist = dist;
            have = true;
        }
        // index is sorted by key: on ties the earlier (smaller-key, then
        // smaller-id) entry wins
    }
    return best;
}

double duration_of(const Utterance& u) { return u.duration; }
double wordcount_of(const Utterance& u) { return static_cast<double>(u.word_count()); }

} // namespace

const Utterance& duration_nearest_sample(const UtterancePool& pool, double d_min, double d_max,
                                         Rng& rng) {
    if (pool.utterances.empty()) throw DataError("duration_nearest_sample: empty pool");
    if (!(d_min >= 0 && d_min < d_max))
        throw DataError("duration_nearest_sample: need 0 <= d_min < d_max");

    const auto& idx = pool.duration_index;
    auto lo = std::lower_bound(idx.begin(), idx.end(), d_min, [&](size_t pos, double v) {
        return pool.utterances[pos].duration < v;
    });
    auto hi = std::upper_bound(idx.begin(), idx.end(), d_max, [&](double v, size_t pos) {
        return v < pool.utterances[pos].duration;
    });
    if (lo < hi) {
        size_t pick = static_cast<size_t>(rng.uniform_int(static_cast<uint64_t>(hi - lo)));
        return pool.utterances[*(lo + static_cast<long>(pick))];
    }
    return pool.utterances[nearest_in_index(pool, idx, duration_of, (d_min + d_max) / 2.0)];
}

const Utterance& duration_nearest_sample(const UtterancePool& pool, double d_min, double d_max,
                                         uint64_t seed) {
    Rng rng(seed);
    return duration_nearest_sample(pool, d_min, d_max, rng);
}

const Utterance& word_count_nearest_sample(const UtterancePool& pool, int n_words, Rng& rng) {
    if (pool.utterances.empty()) throw DataError("word_count_nearest_sample: empty pool");
    if (n_words < 1) throw DataError("word_count_nearest_sample: n_words must be >= 1");
    if (!pool.all_have_words())
        throw DataError("word_count_nearest_sample: pool has utterances without word timings");

    const auto& idx = pool.wordcount_index;
    auto lo = std::lower_bound(idx.begin(), idx.end(), n_words, [&](size_t pos, int v) {
        return pool.utterances[pos].word_count() < v;
    });
    auto hi = std::upper_bound(idx.begin(), idx.end(), n_words, [&](int v, size_t pos) {
        return v < pool.utterances[pos].word_count();
    });
    if (lo < hi) {
        size_t pick = static_cast<size_t>(rng.uniform_int(static_cast<uint64_t>(hi - lo)));
        return pool.utterances[*(lo + static_cast<long>(pick))];
    }
    return pool.utterances[nearest_in_index(pool, idx, wordcount_of, n_words)];
}

const Utterance& word_count_nearest_sample(const UtterancePool& pool, int n_words,
                                           uint64_t seed) {
    Rng rng(seed);
    return word_count_nearest_sample(pool, n_words, rng);
}

AudioBuffer fetch_audio(const Utterance& u, int expected_rate) {
    AudioBuffer buf;
    if (u.audio) {
        buf = *u.audio;
    } else if (!u.audio_path.empty()) {
        buf = read_wav(u.audio_path);
    } else {
        throw DataError("utterance '" + u.utterance_id + "': no audio attached");
    }
    if (expected_rate > 0 && buf.sample_rate != expected_rate)
        throw DataError("utterance '" + u.utterance_id + "': sample rate " +
                        std::to_string(buf.sample_rate) + " != expected " +
                        std::to_string(expected_rate));
    return buf;
}

std::string utterance_to_jsonl(const Utterance& u) {
    json j;
    j["utterance_id"] = u.utterance_id;
    j["audio"] = u.audio_path;
    j["duration"] = u.duration;
    if (u.words) {
        json words = json::array();
        for (const auto& w : u.words.value()) words.push_back({w.text, w.begin, w.end});
        j["words"] = std::move(words);
    }
    j["speaker_label"] = u.speaker_label;
    return j.dump();
}

Utterance parse_utterance_jsonl(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(std::string("pool manifest: ") + e.what());
    }
    Utterance u;
    try {
        u.utterance_id = j.at("utterance_id").get<std::string>();
        u.audio_path = j.value("audio", std::string());
        u.duration = j.at("duration").get<double>();
        if (j.contains("words") && !j.at("words").is_null()) {
            std::vector<PoolWord> words;
            for (const auto& jw : j.at("words"))
                words.push_back({jw.at(0).get<std::string>(), jw.at(1).get<double>(),
                                 jw.at(2).get<double>()});
            u.words = std::move(words);
        }
        u.speaker_label = j.value("speaker_label", std::string());
    } catch (const json::exception& e) {
        throw DataError(std::string("pool manifest: ") + e.what());
    }
    validate_utterance(u);
    return u;
}

std::vector<Utterance> read_pool_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open pool manifest: " + path);
    std::vector<Utterance> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(parse_utterance_jsonl(line));
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_pool_manifest(const UtterancePool& pool, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    for (const auto& u : pool.utterances) out << utterance_to_jsonl(u) << '\n';
}

} // namespace talkmix
