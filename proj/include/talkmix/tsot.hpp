#pragma once

#include <array>
#include <string>
#include <vector>

#include "talkmix/transcript.hpp"

namespace talkmix {

// The channel-change marker inserted between adjacent words of different
// speakers in a serialized transcript.
inline const std::string kChannelChange = "<cc>";

// Single chronological token stream: word strings interleaved with "<cc>".
// Never begins or ends with the marker, and no two markers are adjacent.
struct SerializedTranscript {
    std::string sample_id;
    std::vector<std::string> tokens;
};

// Sorts words ascending by end time (ties: begin time, then speaker id) and
// inserts "<cc>" between adjacent words of different speakers.
SerializedTranscript serialize_tsot(const std::vector<TimedWord>& annotation,
                                    const std::string& sample_id = "");

// Splits a token stream back into the two virtual channels: channel 0 first,
// toggling at each "<cc>".
std::array<std::vector<std::string>, 2> deserialize_tsot(const SerializedTranscript& s);

// Wire format: one sample per line, "sample_id<TAB>token token <cc> token ...".
std::string tsot_to_line(const SerializedTranscript& s);
SerializedTranscript parse_tsot_line(const std::string& line);

} // namespace talkmix
