#include "talkmix/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "talkmix/error.hpp"

namespace talkmix {

using nlohmann::json;

namespace {

// Half-open interval intersection; touching endpoints do not overlap.
bool intersects(double b1, double e1, double b2, double e2) {
    return b1 < e2 && e1 > b2;
}

void check_inputs(const Transcript& t, const ChannelAssignment& c) {
    if (t.words.empty()) throw DataError("discretize: empty transcript");
    if (c.channels.size() != t.words.size())
        throw DataError("discretize: channel assignment length mismatch");
}

} // namespace

ActivityMatrix decode_tokens(const TokenSequence& seq) {
    ActivityMatrix q;
    q.cols.reserve(seq.tokens.size());
    for (int x : seq.tokens) {
        if (x < 0 || x > 3) throw DataError("decode: token out of range: " + std::to_string(x));
        q.cols.push_back(decode_token(x));
    }
    return q;
}

TokenSequence discretize_time(const Transcript& t, const ChannelAssignment& c, double d) {
    check_inputs(t, c);
    if (!(d > 0)) throw DataError("discretize_time: unit must be positive");

    double last_end = 0.0;
    for (const auto& w : t.words) last_end = std::max(last_end, w.end);
    // Loop bound floor(e_last / d) inclusive; the epsilon keeps exact
    // multiples stable against floating point division.
    long n_windows = static_cast<long>(std::floor(last_end / d + 1e-9)) + 1;

    TokenSequence seq;
    seq.kind = TokenKind::Time;
    seq.unit = d;
    seq.source_id = t.recording_id;
    seq.tokens.reserve(static_cast<size_t>(n_windows));
    for (long win = 0; win < n_windows; ++win) {
        double win_begin = d * static_cast<double>(win);
        double win_end = d * static_cast<double>(win + 1);
        std::array<uint8_t, 2> q{0, 0};
        for (size_t i = 0; i < t.words.size(); ++i)
            if (intersects(t.words[i].begin, t.words[i].end, win_begin, win_end))
                q[static_cast<size_t>(c.channels[i])] = 1;
        seq.tokens.push_back(encode_pair(q));
    }
    return seq;
}

TokenSequence discretize_word(const Transcript& t, const ChannelAssignment& c,
                              double silence_threshold) {
    check_inputs(t, c);
    for (const auto& [gb, ge] : silence_gaps(t))
        if (ge - gb > silence_threshold)
            throw DataError("discretize_word: transcript contains a silence gap of " +
                            std::to_string(ge - gb) + "s; segment it first");

    TokenSequence seq;
    seq.kind = TokenKind::Word;
    seq.source_id = t.recording_id;
    seq.tokens.reserve(t.words.size());
    for (size_t i = 0; i < t.words.size(); ++i) {
        std::array<uint8_t, 2> q{0, 0};
        for (size_t j = 0; j < t.words.size(); ++j)
            if (intersects(t.words[j].begin, t.words[j].end, t.words[i].begin, t.words[i].end))
                q[static_cast<size_t>(c.channels[j])] = 1;
        seq.tokens.push_back(encode_pair(q));
    }
    return seq;
}

std::vector<RunSpan> consecutive_one(const ActivityMatrix& q) {
    std::vector<RunSpan> runs;
    const int n = static_cast<int>(q.cols.size());
    for (int ch = 0; ch < 2; ++ch) {
        int begin = -1;
        for (int i = 0; i <= n; ++i) {
            bool active = i < n && q.cols[static_cast<size_t>(i)][static_cast<size_t>(ch)];
            if (active && begin < 0) begin = i;
            if (!active && begin >= 0) {
                runs.push_back({ch, begin, i - 1});
                begin = -1;
            }
        }
    }
    std::sort(runs.begin(), runs.end(), [](const RunSpan& a, const RunSpan& b) {
        if (a.begin != b.begin) return a.begin < b.begin;
        return a.channel < b.channel;
    });
    return runs;
}

std::vector<std::vector<int>> owned_indices(const ActivityMatrix& q) {
    const std::vector<RunSpan> runs = consecutive_one(q);
    const int n = static_cast<int>(q.cols.size());

    // run covering position i on channel ch, by index into `runs`
    auto run_at = [&](int ch, int pos) -> size_t {
        for (size_t r = 0; r < runs.size(); ++r)
            if (runs[r].channel == ch && runs[r].begin <= pos && pos <= runs[r].end) return r;
        throw DataError("owned_indices: no covering run");
    };

    std::vector<std::vector<int>> owned(runs.size());
    for (int i = 0; i < n; ++i) {
        const auto& col = q.cols[static_cast<size_t>(i)];
        if (col[0] && !col[1]) owned[run_at(0, i)].push_back(i);
        else if (col[1] && !col[0]) owned[run_at(1, i)].push_back(i);
    }

    // Split each maximal both-active stretch: earlier ceil(k/2) positions to
    // the earlier-starting run (ties: channel 0), the rest to the later one.
    for (int i = 0; i < n;) {
        if (!(q.cols[static_cast<size_t>(i)][0] && q.cols[static_cast<size_t>(i)][1])) {
            ++i;
            continue;
        }
        int stretch_begin = i;
        while (i < n && q.cols[static_cast<size_t>(i)][0] && q.cols[static_cast<size_t>(i)][1]) ++i;
        int stretch_end = i - 1;

        size_t r0 = run_at(0, stretch_begin);
        size_t r1 = run_at(1, stretch_begin);
        size_t earlier = r0, later = r1;
        if (runs[r1].begin < runs[r0].begin) std::swap(earlier, later);

        int k = stretch_end - stretch_begin + 1;
        int first_half = (k + 1) / 2;
        for (int p = stretch_begin; p <= stretch_end; ++p)
            owned[p - stretch_begin < first_half ? earlier : later].push_back(p);
    }

    for (auto& v : owned) std::sort(v.begin(), v.end());
    return owned;
}

std::vector<int> word_indices(const RunSpan& run, const ActivityMatrix& q) {
    const std::vector<RunSpan> runs = consecutive_one(q);
    const std::vector<std::vector<int>> owned = owned_indices(q);
    for (size_t r = 0; r < runs.size(); ++r)
        if (runs[r] == run) return owned[r];
    throw DataError("word_indices: run not produced by consecutive_one on this matrix");
}

std::string token_sequence_to_jsonl(const TokenSequence& seq) {
    json j;
    j["source_id"] = seq.source_id;
    j["kind"] = seq.kind == TokenKind::Time ? "time" : "word";
    if (seq.kind == TokenKind::Time) j["d"] = seq.unit;
    j["tokens"] = seq.tokens;
    return j.dump();
}

TokenSequence parse_token_sequence_jsonl(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(std::string("token jsonl: ") + e.what());
    }
    TokenSequence seq;
    try {
        seq.source_id = j.at("source_id").get<std::string>();
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "time") {
            seq.kind = TokenKind::Time;
            seq.unit = j.at("d").get<double>();
        } else if (kind == "word") {
            seq.kind = TokenKind::Word;
        } else {
            throw DataError("token jsonl: unknown kind '" + kind + "'");
        }
        seq.tokens = j.at("tokens").get<std::vector<int>>();
    } catch (const json::exception& e) {
        throw DataError(std::string("token jsonl: ") + e.what());
    }
    for (int x : seq.tokens) {
        if (x < 0 || x > 3) throw DataError("token jsonl: token out of range");
        if (seq.kind == TokenKind::Word && x == 0)
            throw DataError("token jsonl: word-kind sequence contains 0");
    }
    return seq;
}

std::vector<TokenSequence> read_token_sequences(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open token file: " + path);
    std::vector<TokenSequence> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(parse_token_sequence_jsonl(line));
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_token_sequences(const std::vector<TokenSequence>& seqs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    for (const auto& s : seqs) out << token_sequence_to_jsonl(s) << '\n';
}

} // namespace talkmix
