#include "talkmix/transcript.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "talkmix/error.hpp"

namespace talkmix {

using nlohmann::json;

void Transcript::normalize() {
    std::stable_sort(words.begin(), words.end(), [](const TimedWord& a, const TimedWord& b) {
        if (a.end != b.end) return a.end < b.end;
        return a.begin < b.begin;
    });
    double max_end = 0.0;
    for (const auto& w : words) max_end = std::max(max_end, w.end);
    duration = std::max(duration, max_end);
}

namespace {

void validate_word(const TimedWord& w, const std::string& where) {
    if (!(w.end > w.begin))
        throw DataError(where + ": word '" + w.text + "' has end <= begin (" +
                        std::to_string(w.begin) + ", " + std::to_string(w.end) + ")");
    if (w.begin < 0) throw DataError(where + ": word '" + w.text + "' has negative begin time");
}

Transcript transcript_from_json(const json& j, const std::string& where) {
    Transcript t;
    if (!j.is_object() || !j.contains("recording_id") || !j.contains("words"))
        throw DataError(where + ": expected {recording_id, words} object");
    t.recording_id = j.at("recording_id").get<std::string>();
    if (j.contains("duration") && !j.at("duration").is_null())
        t.duration = j.at("duration").get<double>();
    for (const auto& jw : j.at("words")) {
        TimedWord w;
        w.text = jw.at("w").get<std::string>();
        w.begin = jw.at("b").get<double>();
        w.end = jw.at("e").get<double>();
        w.speaker = jw.at("spk").get<std::string>();
        validate_word(w, where);
        t.words.push_back(std::move(w));
    }
    t.normalize();
    return t;
}

} // namespace

Transcript parse_transcript_jsonl(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw DataError(std::string("transcript jsonl: ") + e.what());
    }
    return transcript_from_json(j, "transcript jsonl");
}

std::string transcript_to_jsonl(const Transcript& t) {
    json j;
    j["recording_id"] = t.recording_id;
    j["duration"] = t.duration;
    json words = json::array();
    for (const auto& w : t.words)
        words.push_back({{"w", w.text}, {"b", w.begin}, {"e", w.end}, {"spk", w.speaker}});
    j["words"] = std::move(words);
    return j.dump();
}

namespace {

std::vector<Transcript> parse_jsonl_stream(std::istream& in) {
    std::vector<Transcript> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(parse_transcript_jsonl(line));
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

// CTM import: "recording_id channel begin duration word speaker", one word
// per line. '#' starts a comment.
std::vector<Transcript> parse_ctm_stream(std::istream& in) {
    std::vector<Transcript> out;
    std::vector<std::string> order;  // recording ids in first-seen order
    std::map<std::string, Transcript> by_id;

    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string rec, chan, word, speaker;
        double begin = 0, dur = 0;
        if (!(ss >> rec >> chan >> begin >> dur >> word >> speaker))
            throw DataError("ctm line " + std::to_string(line_no) + ": malformed record");
        TimedWord w{word, begin, begin + dur, speaker};
        validate_word(w, "ctm line " + std::to_string(line_no));
        if (!by_id.count(rec)) {
            order.push_back(rec);
            by_id[rec].recording_id = rec;
        }
        by_id[rec].words.push_back(std::move(w));
    }
    for (const auto& id : order) {
        Transcript t = std::move(by_id[id]);
        t.normalize();
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace

std::vector<Transcript> parse_transcripts(std::istream& in, TranscriptFormat format) {
    return format == TranscriptFormat::Jsonl ? parse_jsonl_stream(in) : parse_ctm_stream(in);
}

std::vector<Transcript> read_transcripts(const std::string& path, TranscriptFormat format) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open transcript file: " + path);
    return parse_transcripts(in, format);
}

void write_transcripts_jsonl(const std::vector<Transcript>& ts, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    for (const auto& t : ts) out << transcript_to_jsonl(t) << '\n';
}

ChannelAssignment assign_channels(const Transcript& t) {
    if (t.words.empty()) throw DataError("assign_channels: empty transcript");
    ChannelAssignment c;
    c.channels.reserve(t.words.size());
    int cur = 0;
    c.channels.push_back(0);
    for (size_t i = 1; i < t.words.size(); ++i) {
        if (t.words[i].speaker != t.words[i - 1].speaker) cur = 1 - cur;
        c.channels.push_back(cur);
    }
    return c;
}

std::vector<std::pair<double, double>> silence_gaps(const Transcript& t) {
    std::vector<std::pair<double, double>> gaps;
    if (t.words.empty()) return gaps;

    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(t.words.size());
    for (const auto& w : t.words) intervals.emplace_back(w.begin, w.end);
    std::sort(intervals.begin(), intervals.end());

    double cover_end = intervals.front().second;
    for (size_t i = 1; i < intervals.size(); ++i) {
        if (intervals[i].first > cover_end) gaps.emplace_back(cover_end, intervals[i].first);
        cover_end = std::max(cover_end, intervals[i].second);
    }
    return gaps;
}

std::vector<Transcript> segment_by_silence(const Transcript& t, double threshold) {
    if (t.words.empty()) throw DataError("segment_by_silence: empty transcript");
    if (!(threshold > 0)) throw DataError("segment_by_silence: threshold must be positive");

    std::vector<double> split_points;  // a word is in segment k when begin >= split k-1
    for (const auto& [gap_begin, gap_end] : silence_gaps(t))
        if (gap_end - gap_begin > threshold) split_points.push_back(gap_begin);

    std::vector<Transcript> segments;
    size_t next_split = 0;
    for (const auto& w : t.words) {
        while (next_split < split_points.size() && w.begin >= split_points[next_split]) {
            ++next_split;
        }
        size_t seg = next_split;
        // Words never straddle a qualifying gap, so begin-based bucketing is
        // consistent with end-time order.
        while (segments.size() <= seg) segments.emplace_back();
        segments[seg].words.push_back(w);
    }
    for (size_t k = 0; k < segments.size(); ++k) {
        segments[k].recording_id = t.recording_id + "#" + std::to_string(k);
        segments[k].normalize();
    }
    return segments;
}

} // namespace talkmix
