#include "talkmix/tsot.hpp"

#include <algorithm>
#include <sstream>

#include "talkmix/error.hpp"

namespace talkmix {

SerializedTranscript serialize_tsot(const std::vector<TimedWord>& annotation,
                                    const std::string& sample_id) {
    if (annotation.empty()) throw DataError("serialize: empty annotation");

    std::vector<TimedWord> sorted = annotation;
    std::stable_sort(sorted.begin(), sorted.end(), [](const TimedWord& a, const TimedWord& b) {
        if (a.end != b.end) return a.end < b.end;
        if (a.begin != b.begin) return a.begin < b.begin;
        return a.speaker < b.speaker;
    });

    SerializedTranscript out;
    out.sample_id = sample_id;
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i].speaker != sorted[i - 1].speaker)
            out.tokens.push_back(kChannelChange);
        out.tokens.push_back(sorted[i].text);
    }
    return out;
}

std::array<std::vector<std::string>, 2> deserialize_tsot(const SerializedTranscript& s) {
    std::array<std::vector<std::string>, 2> channels;
    int channel = 0;
    bool last_was_marker = true;  // also rejects a leading marker
    for (size_t i = 0; i < s.tokens.size(); ++i) {
        if (s.tokens[i] == kChannelChange) {
            if (last_was_marker)
                throw DataError("deserialize: misplaced channel-change marker");
            channel = 1 - channel;
            last_was_marker = true;
        } else {
            channels[static_cast<size_t>(channel)].push_back(s.tokens[i]);
            last_was_marker = false;
        }
    }
    if (!s.tokens.empty() && s.tokens.back() == kChannelChange)
        throw DataError("deserialize: trailing channel-change marker");
    return channels;
}

std::string tsot_to_line(const SerializedTranscript& s) {
    std::string line = s.sample_id;
    line += '\t';
    for (size_t i = 0; i < s.tokens.size(); ++i) {
        if (i > 0) line += ' ';
        line += s.tokens[i];
    }
    return line;
}

SerializedTranscript parse_tsot_line(const std::string& line) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError("tsot line: missing tab separator");
    SerializedTranscript s;
    s.sample_id = line.substr(0, tab);
    std::istringstream ss(line.substr(tab + 1));
    std::string tok;
    while (ss >> tok) s.tokens.push_back(tok);
    return s;
}

} // namespace talkmix
