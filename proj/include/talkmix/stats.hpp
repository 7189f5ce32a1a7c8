#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "talkmix/transcript.hpp"

namespace talkmix {

// Overlap statistics of a corpus of annotated recordings.
//
// overlap_ratio = duration with >= 2 simultaneous speakers / duration of the
// speech union (diarization convention). total_speech sums per-speaker
// durations, so it can exceed the union.
struct OverlapStats {
    double d = 0.25;                 // discretization unit of token_histogram
    double total_speech = 0.0;
    double union_speech = 0.0;
    double overlapped_speech = 0.0;
    double overlap_ratio = 0.0;
    std::array<uint64_t, 4> token_histogram{0, 0, 0, 0};
    std::array<std::map<int, uint64_t>, 2> run_length_histograms;  // per channel, in windows
    std::map<int, uint64_t> silence_gap_histogram;                 // 0-token run lengths
    uint64_t recordings = 0;
};

OverlapStats compute_stats(const std::vector<Transcript>& annotations, double d);

struct FieldDiff {
    double real = 0.0;
    double sim = 0.0;
    double abs_diff = 0.0;
    double rel_diff = 0.0;  // abs_diff / |real|, 0 when real == 0
};

struct StatsComparison {
    FieldDiff total_speech;
    FieldDiff union_speech;
    FieldDiff overlapped_speech;
    FieldDiff overlap_ratio;
    double token_histogram_tv = 0.0;  // total-variation distance, 0..1
};

// Requires both reports to share the same d.
StatsComparison compare_stats(const OverlapStats& real, const OverlapStats& sim);

std::string stats_to_json(const OverlapStats& s);
OverlapStats parse_stats_json(const std::string& text);
std::string comparison_to_json(const StatsComparison& c);

// Human-readable one-screen summaries.
std::string stats_summary(const OverlapStats& s);
std::string comparison_summary(const StatsComparison& c);

} // namespace talkmix
