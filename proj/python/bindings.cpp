#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "talkmix/audio.hpp"
#include "talkmix/cli.hpp"
#include "talkmix/discretize.hpp"
#include "talkmix/error.hpp"
#include "talkmix/ngram.hpp"
#include "talkmix/pool.hpp"
#include "talkmix/simulate.hpp"
#include "talkmix/stats.hpp"
#include "talkmix/transcript.hpp"
#include "talkmix/tsot.hpp"

namespace py = pybind11;
using namespace talkmix;

namespace {

TokenSequence make_token_sequence(const std::vector<int>& tokens, const std::string& kind,
                                  double d, const std::string& source_id) {
    TokenSequence seq;
    seq.tokens = tokens;
    if (kind == "time") seq.kind = TokenKind::Time;
    else if (kind == "word") seq.kind = TokenKind::Word;
    else throw DataError("kind must be 'time' or 'word'");
    seq.unit = d;
    seq.source_id = source_id;
    return seq;
}

std::vector<std::vector<int>> matrix_to_lists(const ActivityMatrix& q) {
    std::vector<std::vector<int>> out;
    for (const auto& col : q.cols) out.push_back({col[0], col[1]});
    return out;
}

ActivityMatrix matrix_from_lists(const std::vector<std::vector<int>>& cols) {
    ActivityMatrix q;
    for (const auto& col : cols) {
        if (col.size() != 2 || col[0] < 0 || col[0] > 1 || col[1] < 0 || col[1] > 1)
            throw DataError("activity column must be a [0/1, 0/1] pair");
        q.cols.push_back({static_cast<uint8_t>(col[0]), static_cast<uint8_t>(col[1])});
    }
    return q;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-talker overlapping speech simulation core";

    py::register_exception<DataError>(m, "DataError");

    py::class_<TimedWord>(m, "TimedWord")
        .def(py::init<>())
        .def(py::init([](std::string w, double b, double e, std::string spk) {
                 return TimedWord{std::move(w), b, e, std::move(spk)};
             }),
             py::arg("text"), py::arg("begin"), py::arg("end"), py::arg("speaker"))
        .def_readwrite("text", &TimedWord::text)
        .def_readwrite("begin", &TimedWord::begin)
        .def_readwrite("end", &TimedWord::end)
        .def_readwrite("speaker", &TimedWord::speaker);

    py::class_<Transcript>(m, "Transcript")
        .def(py::init<>())
        .def_readwrite("recording_id", &Transcript::recording_id)
        .def_readwrite("words", &Transcript::words)
        .def_readwrite("duration", &Transcript::duration)
        .def("normalize", &Transcript::normalize)
        .def("to_jsonl", [](const Transcript& t) { return transcript_to_jsonl(t); });

    m.def("parse_transcript_jsonl", &parse_transcript_jsonl, py::arg("line"));
    m.def(
        "assign_channels",
        [](const Transcript& t) { return assign_channels(t).channels; },
        py::arg("transcript"));
    m.def("segment_by_silence", &segment_by_silence, py::arg("transcript"),
          py::arg("threshold"));

    py::class_<TokenSequence>(m, "TokenSequence")
        .def(py::init(&make_token_sequence), py::arg("tokens"), py::arg("kind") = "time",
             py::arg("d") = 0.25, py::arg("source_id") = "")
        .def_readwrite("tokens", &TokenSequence::tokens)
        .def_property_readonly(
            "kind",
            [](const TokenSequence& s) { return s.kind == TokenKind::Time ? "time" : "word"; })
        .def_readwrite("d", &TokenSequence::unit)
        .def_readwrite("source_id", &TokenSequence::source_id);

    m.def("encode_pair", [](int a, int b) {
        if (a < 0 || a > 1 || b < 0 || b > 1) throw DataError("pair entries must be 0 or 1");
        return encode_pair({static_cast<uint8_t>(a), static_cast<uint8_t>(b)});
    });
    m.def("decode_token", [](int x) {
        if (x < 0 || x > 3) throw DataError("token must be in 0..3");
        auto q = decode_token(x);
        return std::vector<int>{q[0], q[1]};
    });
    m.def(
        "decode_tokens",
        [](const TokenSequence& seq) { return matrix_to_lists(decode_tokens(seq)); },
        py::arg("sequence"));

    m.def(
        "discretize_time",
        [](const Transcript& t, double d) {
            return discretize_time(t, assign_channels(t), d);
        },
        py::arg("transcript"), py::arg("d") = 0.25);
    m.def(
        "discretize_word",
        [](const Transcript& t, double silence_threshold) {
            return discretize_word(t, assign_channels(t), silence_threshold);
        },
        py::arg("transcript"), py::arg("silence_threshold") = 0.5);

    m.def(
        "consecutive_one",
        [](const std::vector<std::vector<int>>& cols) {
            std::vector<std::tuple<int, int, int>> out;
            for (const auto& r : consecutive_one(matrix_from_lists(cols)))
                out.emplace_back(r.channel, r.begin, r.end);
            return out;
        },
        py::arg("matrix"), "Runs as (channel, begin, end) tuples");
    m.def(
        "word_indices",
        [](std::tuple<int, int, int> run, const std::vector<std::vector<int>>& cols) {
            RunSpan span{std::get<0>(run), std::get<1>(run), std::get<2>(run)};
            return word_indices(span, matrix_from_lists(cols));
        },
        py::arg("run"), py::arg("matrix"));

    py::class_<NGramModel>(m, "NGramModel")
        .def_property_readonly("order", &NGramModel::order)
        .def_property_readonly(
            "kind",
            [](const NGramModel& m_) { return m_.kind() == TokenKind::Time ? "time" : "word"; })
        .def_property_readonly("d", &NGramModel::unit)
        .def_static("train", &NGramModel::train, py::arg("corpus"), py::arg("order") = 30)
        .def(
            "sample",
            [](const NGramModel& m_, uint64_t seed, int max_tokens) {
                return m_.sample(seed, max_tokens > 0
                                           ? max_tokens
                                           : NGramModel::default_max_tokens(m_.kind()));
            },
            py::arg("seed"), py::arg("max_tokens") = 0)
        .def("log_prob", &NGramModel::log_prob, py::arg("sequence"))
        .def("save", [](const NGramModel& m_) { return m_.save(); })
        .def_static("load", &NGramModel::load, py::arg("text"))
        .def("save_file", &NGramModel::save_file, py::arg("path"))
        .def_static("load_file", &NGramModel::load_file, py::arg("path"))
        .def("__eq__",
             [](const NGramModel& a, const NGramModel& b) { return a == b; });

    py::class_<PoolWord>(m, "PoolWord")
        .def(py::init([](std::string t, double b, double e) {
                 return PoolWord{std::move(t), b, e};
             }),
             py::arg("text"), py::arg("begin"), py::arg("end"))
        .def_readwrite("text", &PoolWord::text)
        .def_readwrite("begin", &PoolWord::begin)
        .def_readwrite("end", &PoolWord::end);

    py::class_<Utterance>(m, "Utterance")
        .def(py::init([](std::string id, std::vector<float> samples, int sample_rate,
                         std::optional<std::vector<PoolWord>> words, std::string speaker) {
                 Utterance u;
                 u.utterance_id = std::move(id);
                 auto buf = std::make_shared<AudioBuffer>();
                 buf->samples = std::move(samples);
                 buf->sample_rate = sample_rate;
                 u.duration = buf->duration();
                 u.audio = std::move(buf);
                 u.words = std::move(words);
                 u.speaker_label = std::move(speaker);
                 return u;
             }),
             py::arg("utterance_id"), py::arg("samples"), py::arg("sample_rate") = 16000,
             py::arg("words") = std::nullopt, py::arg("speaker_label") = "")
        .def_readonly("utterance_id", &Utterance::utterance_id)
        .def_readonly("duration", &Utterance::duration)
        .def_readonly("words", &Utterance::words)
        .def_readonly("speaker_label", &Utterance::speaker_label);

    py::class_<UtterancePool>(m, "UtterancePool")
        .def_property_readonly(
            "size", [](const UtterancePool& p) { return p.utterances.size(); })
        .def_readonly("sample_rate", &UtterancePool::sample_rate)
        .def_property_readonly(
            "utterances", [](const UtterancePool& p) { return p.utterances; });

    m.def("build_pool", &build_pool, py::arg("source"), py::arg("pool_size"),
          py::arg("silence_threshold") = 0.5, py::arg("seed") = 0,
          py::arg("boundary_pad") = 0.0);
    m.def(
        "duration_nearest_sample",
        [](const UtterancePool& pool, double d_min, double d_max, uint64_t seed) {
            return duration_nearest_sample(pool, d_min, d_max, seed);
        },
        py::arg("pool"), py::arg("d_min"), py::arg("d_max"), py::arg("seed"));
    m.def(
        "word_count_nearest_sample",
        [](const UtterancePool& pool, int n_words, uint64_t seed) {
            return word_count_nearest_sample(pool, n_words, seed);
        },
        py::arg("pool"), py::arg("n_words"), py::arg("seed"));

    py::class_<AnnotatedWord>(m, "AnnotatedWord")
        .def_readonly("text", &AnnotatedWord::text)
        .def_readonly("begin", &AnnotatedWord::begin)
        .def_readonly("end", &AnnotatedWord::end)
        .def_readonly("speaker", &AnnotatedWord::speaker)
        .def_readonly("channel", &AnnotatedWord::channel)
        .def_readonly("utterance_id", &AnnotatedWord::utterance_id);

    py::class_<MixedSample>(m, "MixedSample")
        .def_readonly("sample_id", &MixedSample::sample_id)
        .def_property_readonly("samples",
                               [](const MixedSample& s) { return s.audio.samples; })
        .def_property_readonly("sample_rate",
                               [](const MixedSample& s) { return s.audio.sample_rate; })
        .def_property_readonly("duration",
                               [](const MixedSample& s) { return s.audio.duration(); })
        .def_readonly("annotation", &MixedSample::annotation)
        .def_property_readonly("algorithm",
                               [](const MixedSample& s) {
                                   return algorithm_name(s.provenance.algorithm);
                               })
        .def_property_readonly("seed",
                               [](const MixedSample& s) { return s.provenance.seed; })
        .def_property_readonly("tokens",
                               [](const MixedSample& s) -> std::optional<std::vector<int>> {
                                   if (!s.provenance.sampled_tokens) return std::nullopt;
                                   return s.provenance.sampled_tokens->tokens;
                               })
        .def("annotation_jsonl",
             [](const MixedSample& s) { return sample_annotation_jsonl(s); });

    m.def("simulate_time_based", &simulate_time_based, py::arg("model"), py::arg("pool"),
          py::arg("seed"), py::arg("max_tokens") = 0);
    m.def("simulate_word_based", &simulate_word_based, py::arg("model"), py::arg("pool"),
          py::arg("seed"), py::arg("max_tokens") = 0);
    m.def("simulate_random", &simulate_random, py::arg("pool"), py::arg("max_utterances"),
          py::arg("seed"));

    m.def(
        "serialize_tsot",
        [](const std::vector<TimedWord>& words, const std::string& sample_id) {
            return serialize_tsot(words, sample_id).tokens;
        },
        py::arg("words"), py::arg("sample_id") = "");
    m.def(
        "deserialize_tsot",
        [](const std::vector<std::string>& tokens) {
            SerializedTranscript s;
            s.tokens = tokens;
            auto channels = deserialize_tsot(s);
            return std::make_pair(channels[0], channels[1]);
        },
        py::arg("tokens"));

    py::class_<OverlapStats>(m, "OverlapStats")
        .def_readonly("d", &OverlapStats::d)
        .def_readonly("total_speech", &OverlapStats::total_speech)
        .def_readonly("union_speech", &OverlapStats::union_speech)
        .def_readonly("overlapped_speech", &OverlapStats::overlapped_speech)
        .def_readonly("overlap_ratio", &OverlapStats::overlap_ratio)
        .def_readonly("token_histogram", &OverlapStats::token_histogram)
        .def("to_json", [](const OverlapStats& s) { return stats_to_json(s); });

    m.def("compute_stats", &compute_stats, py::arg("annotations"), py::arg("d") = 0.25);

    m.def("read_wav", &read_wav, py::arg("path"));
    m.def(
        "write_wav",
        [](const std::vector<float>& samples, int sample_rate, const std::string& path) {
            AudioBuffer buf;
            buf.samples = samples;
            buf.sample_rate = sample_rate;
            write_wav(buf, path);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("path"));

    py::class_<AudioBuffer>(m, "AudioBuffer")
        .def_readonly("samples", &AudioBuffer::samples)
        .def_readonly("sample_rate", &AudioBuffer::sample_rate)
        .def_property_readonly("duration", &AudioBuffer::duration);

    m.def("run_cli", [](const std::vector<std::string>& args) { return run_cli(args); },
          py::arg("args"));
}
