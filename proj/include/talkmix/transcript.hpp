#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace talkmix {

struct TimedWord {
    std::string text;
    double begin = 0.0;
    double end = 0.0;
    std::string speaker;
};

// Word-level time- and speaker-annotated transcription of one recording.
// After normalize(), words are sorted ascending by end time (ties broken by
// begin time, then original input order).
struct Transcript {
    std::string recording_id;
    std::vector<TimedWord> words;
    double duration = 0.0;

    void normalize();
};

// Virtual channel index per word, parallel to Transcript::words.
struct ChannelAssignment {
    std::vector<int> channels;
};

enum class TranscriptFormat { Jsonl, Ctm };

// Parses transcripts from a whole input stream. JSONL carries one recording
// per line; CTM (import only) is one word per line, grouped by recording id.
std::vector<Transcript> parse_transcripts(std::istream& in, TranscriptFormat format);
std::vector<Transcript> read_transcripts(const std::string& path, TranscriptFormat format);

// Parses a single JSONL record.
Transcript parse_transcript_jsonl(const std::string& line);

std::string transcript_to_jsonl(const Transcript& t);
void write_transcripts_jsonl(const std::vector<Transcript>& ts, const std::string& path);

// First word gets channel 0; the channel toggles whenever two adjacent words
// (in end-time order) belong to different speakers.
ChannelAssignment assign_channels(const Transcript& t);

// Splits wherever the gap between consecutive speech regions (union of all
// word intervals) exceeds `threshold` seconds. Segments keep absolute times.
std::vector<Transcript> segment_by_silence(const Transcript& t, double threshold);

// Maximal intervals covered by no word, between the first word begin and the
// last word end. Exposed for segmentation checks and silence statistics.
std::vector<std::pair<double, double>> silence_gaps(const Transcript& t);

} // namespace talkmix
