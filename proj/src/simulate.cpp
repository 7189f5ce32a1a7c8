#include "talkmix/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "talkmix/error.hpp"

namespace talkmix {

using nlohmann::json;

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Random: return "random";
        case Algorithm::Time: return "time";
        case Algorithm::Word: return "word";
    }
    return "random";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "random") return Algorithm::Random;
    if (name == "time") return Algorithm::Time;
    if (name == "word") return Algorithm::Word;
    throw DataError("unknown algorithm '" + name + "'");
}

namespace {

std::string synthetic_speaker(size_t n) { return "spk" + std::to_string(n); }

// Appends the utterance's words shifted to absolute time `offset`; an
// utterance without word timings contributes its full span as one pseudo-word.
void append_annotation(std::vector<AnnotatedWord>& annotation, const Utterance& u,
                       double audio_duration, double offset, const std::string& speaker,
                       int channel) {
    if (u.has_words()) {
        for (const auto& w : u.words.value())
            annotation.push_back(
                {w.text, offset + w.begin, offset + w.end, speaker, channel, u.utterance_id});
    } else {
        annotation.push_back(
            {"<speech>", offset, offset + audio_duration, speaker, channel, u.utterance_id});
    }
}

void sort_annotation(std::vector<AnnotatedWord>& annotation) {
    std::stable_sort(annotation.begin(), annotation.end(),
                     [](const AnnotatedWord& a, const AnnotatedWord& b) {
                         if (a.end != b.end) return a.end < b.end;
                         return a.begin < b.begin;
                     });
}

// Annotation times are exact; audio placement rounds to the sample grid, so
// the buffer may fall short of the last word end by a fraction of a sample.
void cover_annotation(AudioBuffer& audio, const std::vector<AnnotatedWord>& annotation) {
    double last = 0.0;
    for (const auto& w : annotation) last = std::max(last, w.end);
    auto needed = static_cast<size_t>(std::ceil(last * audio.sample_rate - 1e-9));
    if (audio.samples.size() < needed) audio.samples.resize(needed, 0.0f);
}

} // namespace

MixedSample simulate_time_based(const NGramModel& model, const UtterancePool& pool,
                                uint64_t seed, int max_tokens) {
    if (model.kind() != TokenKind::Time)
        throw DataError("simulate_time_based: model is not time-kind");
    if (pool.utterances.empty()) throw DataError("simulate_time_based: empty pool");

    Rng rng(seed);
    const double d = model.unit();
    TokenSequence pattern =
        model.sample(rng, max_tokens > 0 ? max_tokens : NGramModel::default_max_tokens(model.kind()));
    ActivityMatrix q = decode_tokens(pattern);

    MixedSample out;
    out.audio.sample_rate = pool.sample_rate;
    out.provenance = {Algorithm::Time, seed, pattern, {}};

    size_t placed = 0;
    for (const RunSpan& run : consecutive_one(q)) {
        double d_min = d * (run.end - run.begin);
        double d_max = d * (run.end - run.begin + 1);
        const Utterance& u = duration_nearest_sample(pool, d_min, d_max, rng);
        AudioBuffer ubuf = fetch_audio(u, pool.sample_rate);
        double len_u = ubuf.duration();

        // Place inside the run's window span; an overshooting nearest sample
        // is anchored at the run start and runs long.
        double gamma = d * run.begin;
        if (len_u <= d_max) gamma += rng.uniform(0.0, d_max - len_u);

        out.audio = mix_at(out.audio, ubuf, gamma);
        append_annotation(out.annotation, u, len_u, gamma, synthetic_speaker(placed), run.channel);
        out.provenance.source_utterance_ids.push_back(u.utterance_id);
        ++placed;
    }

    // The timeline spans the whole pattern even when it ends in silence.
    size_t span_samples =
        static_cast<size_t>(seconds_to_samples(d * static_cast<double>(pattern.tokens.size()),
                                               out.audio.sample_rate));
    if (out.audio.samples.size() < span_samples) out.audio.samples.resize(span_samples, 0.0f);

    sort_annotation(out.annotation);
    cover_annotation(out.audio, out.annotation);
    return out;
}

MixedSample simulate_word_based(const NGramModel& model, const UtterancePool& pool,
                                uint64_t seed, int max_tokens) {
    if (model.kind() != TokenKind::Word)
        throw DataError("simulate_word_based: model is not word-kind");
    if (pool.utterances.empty()) throw DataError("simulate_word_based: empty pool");
    if (!pool.all_have_words())
        throw DataError("simulate_word_based: pool utterances need word timings");

    Rng rng(seed);
    TokenSequence pattern =
        model.sample(rng, max_tokens > 0 ? max_tokens : NGramModel::default_max_tokens(model.kind()));
    ActivityMatrix q = decode_tokens(pattern);

    MixedSample out;
    out.audio.sample_rate = pool.sample_rate;
    out.provenance = {Algorithm::Word, seed, pattern, {}};

    const std::vector<RunSpan> runs = consecutive_one(q);
    const std::vector<std::vector<int>> owned = owned_indices(q);
    EndTimeBuffer ends;

    size_t placed = 0;
    for (size_t r = 0; r < runs.size(); ++r) {
        const std::vector<int>& indices = owned[r];
        if (indices.empty()) continue;  // run fully absorbed by the earlier run's share

        const Utterance& u =
            word_count_nearest_sample(pool, static_cast<int>(indices.size()), rng);
        AudioBuffer ubuf = fetch_audio(u, pool.sample_rate);

        long i0 = indices.front();
        double lo = ends.get(i0 - 2);
        double hi = ends.get(i0 - 1);
        double gamma = lo + rng.uniform(0.0, hi - lo);

        out.audio = mix_at(out.audio, ubuf, gamma);
        append_annotation(out.annotation, u, ubuf.duration(), gamma, synthetic_speaker(placed),
                          runs[r].channel);
        out.provenance.source_utterance_ids.push_back(u.utterance_id);
        ++placed;

        // Pattern-position end times for the words just placed. On a word
        // count mismatch (nearest fallback) the first len(words) indices get
        // real end times, remaining indices carry the last end forward, and
        // surplus words extend past the run unrecorded.
        const auto& words = u.words.value();
        double carry = 0.0;
        for (size_t j = 0; j < indices.size(); ++j) {
            if (j < words.size()) carry = gamma + words[j].end;
            ends.set(indices[j], carry);
        }
    }

    sort_annotation(out.annotation);
    cover_annotation(out.audio, out.annotation);
    return out;
}

MixedSample simulate_random(const UtterancePool& pool, int max_utterances, uint64_t seed) {
    if (max_utterances < 1) throw DataError("simulate_random: max_utterances must be >= 1");
    if (pool.utterances.empty()) throw DataError("simulate_random: empty pool");

    Rng rng(seed);
    int count = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(max_utterances)));

    MixedSample out;
    out.audio.sample_rate = pool.sample_rate;
    out.provenance = {Algorithm::Random, seed, std::nullopt, {}};

    std::vector<double> utterance_ends;  // in placement order
    double timeline = 0.0;
    for (int k = 0; k < count; ++k) {
        const Utterance& u =
            pool.utterances[static_cast<size_t>(rng.uniform_int(pool.utterances.size()))];
        AudioBuffer ubuf = fetch_audio(u, pool.sample_rate);

        // Delay bounded below by the end of the penultimate mixed utterance:
        // utterances placed two apart never overlap, capping concurrency at 2.
        double offset = 0.0;
        if (k > 0) {
            double end2 =
                utterance_ends.size() >= 2 ? utterance_ends[utterance_ends.size() - 2] : 0.0;
            offset = rng.uniform(end2, timeline);
        }

        out.audio = mix_at(out.audio, ubuf, offset);
        append_annotation(out.annotation, u, ubuf.duration(), offset,
                          synthetic_speaker(static_cast<size_t>(k)), 0);
        out.provenance.source_utterance_ids.push_back(u.utterance_id);
        utterance_ends.push_back(offset + ubuf.duration());
        timeline = std::max(timeline, utterance_ends.back());
    }

    sort_annotation(out.annotation);
    // Baseline runs carry no pattern channels; recompute them with the t-SOT
    // toggle over the end-sorted words so downstream serialization is uniform.
    int channel = 0;
    for (size_t i = 0; i < out.annotation.size(); ++i) {
        if (i > 0 && out.annotation[i].speaker != out.annotation[i - 1].speaker)
            channel = 1 - channel;
        out.annotation[i].channel = channel;
    }
    cover_annotation(out.audio, out.annotation);
    return out;
}

std::pair<Transcript, ChannelAssignment> annotation_transcript(const MixedSample& sample) {
    if (sample.annotation.empty()) throw DataError("annotation_transcript: empty annotation");
    std::vector<AnnotatedWord> sorted = sample.annotation;
    sort_annotation(sorted);

    Transcript t;
    t.recording_id = sample.sample_id;
    ChannelAssignment c;
    for (const auto& w : sorted) {
        t.words.push_back({w.text, w.begin, w.end, w.speaker});
        c.channels.push_back(w.channel);
    }
    t.normalize();  // already sorted; fills duration
    return {std::move(t), std::move(c)};
}

namespace {

void validate_batch_config(const BatchConfig& config) {
    double sum = config.ratio_random + config.ratio_word + config.ratio_time;
    if (std::abs(sum - 1.0) > 1e-9)
        throw DataError("batch config: algorithm ratios must sum to 1");
    if (config.ratio_random < 0 || config.ratio_word < 0 || config.ratio_time < 0)
        throw DataError("batch config: negative ratio");
    if (!config.pool) throw DataError("batch config: pool required");
    if (config.ratio_time > 0 && !config.time_model)
        throw DataError("batch config: time model required by ratios");
    if (config.ratio_word > 0 && !config.word_model)
        throw DataError("batch config: word model required by ratios");
}

std::string format_sample_id(uint64_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "s%06llu", static_cast<unsigned long long>(index));
    return buf;
}

} // namespace

MixedSample generate_sample(const BatchConfig& config, uint64_t master_seed, uint64_t index) {
    validate_batch_config(config);
    uint64_t seed = mix_seed(master_seed, index);

    // The algorithm draw uses a derived stream so that a pure-ratio config
    // and a mixed config produce identical samples for the same seed.
    Rng algo_rng(mix_seed(seed, 0xA19C));
    double u = algo_rng.uniform01();
    Algorithm algo;
    if (u < config.ratio_random) algo = Algorithm::Random;
    else if (u < config.ratio_random + config.ratio_word) algo = Algorithm::Word;
    else algo = Algorithm::Time;

    MixedSample sample;
    switch (algo) {
        case Algorithm::Random:
            sample = simulate_random(*config.pool, config.max_utterances, seed);
            break;
        case Algorithm::Word:
            sample = simulate_word_based(*config.word_model, *config.pool, seed,
                                         config.max_tokens);
            break;
        case Algorithm::Time:
            sample = simulate_time_based(*config.time_model, *config.pool, seed,
                                         config.max_tokens);
            break;
    }
    sample.sample_id = format_sample_id(index);
    return sample;
}

void generate_batch(const BatchConfig& config, uint64_t count, uint64_t master_seed,
                    const std::function<void(MixedSample&&)>& sink) {
    validate_batch_config(config);
    for (uint64_t i = 0; i < count; ++i) sink(generate_sample(config, master_seed, i));
}

std::string sample_annotation_jsonl(const MixedSample& sample) {
    json j;
    j["sample_id"] = sample.sample_id;
    j["algorithm"] = algorithm_name(sample.provenance.algorithm);
    j["seed"] = sample.provenance.seed;
    if (sample.provenance.sampled_tokens)
        j["tokens"] = sample.provenance.sampled_tokens->tokens;
    json words = json::array();
    for (const auto& w : sample.annotation)
        words.push_back({{"w", w.text},
                         {"b", w.begin},
                         {"e", w.end},
                         {"spk", w.speaker},
                         {"ch", w.channel},
                         {"utt", w.utterance_id}});
    j["words"] = std::move(words);
    return j.dump();
}

MixedSample parse_sample_annotation_jsonl(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(std::string("annotation jsonl: ") + e.what());
    }
    MixedSample s;
    try {
        s.sample_id = j.at("sample_id").get<std::string>();
        s.provenance.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
        s.provenance.seed = j.at("seed").get<uint64_t>();
        if (j.contains("tokens")) {
            TokenSequence seq;
            seq.tokens = j.at("tokens").get<std::vector<int>>();
            seq.kind = s.provenance.algorithm == Algorithm::Word ? TokenKind::Word
                                                                 : TokenKind::Time;
            seq.source_id = s.sample_id;
            s.provenance.sampled_tokens = std::move(seq);
        }
        for (const auto& jw : j.at("words")) {
            AnnotatedWord w;
            w.text = jw.at("w").get<std::string>();
            w.begin = jw.at("b").get<double>();
            w.end = jw.at("e").get<double>();
            w.speaker = jw.at("spk").get<std::string>();
            w.channel = jw.at("ch").get<int>();
            w.utterance_id = jw.at("utt").get<std::string>();
            s.annotation.push_back(std::move(w));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("annotation jsonl: ") + e.what());
    }
    return s;
}

std::vector<MixedSample> read_sample_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open annotation file: " + path);
    std::vector<MixedSample> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(parse_sample_annotation_jsonl(line));
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

} // namespace talkmix
