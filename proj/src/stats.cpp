#include "talkmix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "talkmix/discretize.hpp"
#include "talkmix/error.hpp"

namespace talkmix {

using nlohmann::json;

namespace {

// Sweep over word boundaries: accumulates per-speaker total, speech-union and
// >=2-speaker durations of one recording.
void sweep_recording(const Transcript& t, double& total, double& union_dur, double& overlap) {
    // A speaker's own overlapping words must not count twice, so merge each
    // speaker's intervals first. At equal event times -1 sorts before +1,
    // keeping the half-open convention (touching intervals do not overlap).
    std::vector<std::pair<double, int>> events;
    std::map<std::string, std::vector<std::pair<double, double>>> by_speaker;
    for (const auto& w : t.words) {
        by_speaker[w.speaker].emplace_back(w.begin, w.end);
        total += w.end - w.begin;
    }
    for (auto& [spk, iv] : by_speaker) {
        std::sort(iv.begin(), iv.end());
        double cb = iv.front().first, ce = iv.front().second;
        for (size_t i = 1; i < iv.size(); ++i) {
            if (iv[i].first > ce) {
                events.emplace_back(cb, +1);
                events.emplace_back(ce, -1);
                cb = iv[i].first;
                ce = iv[i].second;
            } else {
                ce = std::max(ce, iv[i].second);
            }
        }
        events.emplace_back(cb, +1);
        events.emplace_back(ce, -1);
    }
    std::sort(events.begin(), events.end());
    int active = 0;
    double prev = 0.0;
    for (const auto& [time, delta] : events) {
        if (active >= 1) union_dur += time - prev;
        if (active >= 2) overlap += time - prev;
        active += delta;
        prev = time;
    }
}

void accumulate_runs(const TokenSequence& seq, OverlapStats& s) {
    ActivityMatrix q = decode_tokens(seq);
    for (const RunSpan& run : consecutive_one(q))
        ++s.run_length_histograms[static_cast<size_t>(run.channel)][run.end - run.begin + 1];
    // Silence gaps as runs of token 0.
    int zero_run = 0;
    for (int tok : seq.tokens) {
        if (tok == 0) {
            ++zero_run;
        } else if (zero_run > 0) {
            ++s.silence_gap_histogram[zero_run];
            zero_run = 0;
        }
    }
    if (zero_run > 0) ++s.silence_gap_histogram[zero_run];
}

} // namespace

OverlapStats compute_stats(const std::vector<Transcript>& annotations, double d) {
    if (annotations.empty()) throw DataError("compute_stats: empty input");
    if (!(d > 0)) throw DataError("compute_stats: d must be positive");

    OverlapStats s;
    s.d = d;
    s.recordings = annotations.size();
    for (const auto& t : annotations) {
        if (t.words.empty()) throw DataError("compute_stats: empty transcript " + t.recording_id);
        sweep_recording(t, s.total_speech, s.union_speech, s.overlapped_speech);
        TokenSequence seq = discretize_time(t, assign_channels(t), d);
        for (int tok : seq.tokens) ++s.token_histogram[static_cast<size_t>(tok)];
        accumulate_runs(seq, s);
    }
    s.overlap_ratio = s.union_speech > 0 ? s.overlapped_speech / s.union_speech : 0.0;
    return s;
}

namespace {

FieldDiff diff_field(double real, double sim) {
    FieldDiff f;
    f.real = real;
    f.sim = sim;
    f.abs_diff = std::abs(sim - real);
    f.rel_diff = real != 0.0 ? f.abs_diff / std::abs(real) : 0.0;
    return f;
}

} // namespace

StatsComparison compare_stats(const OverlapStats& real, const OverlapStats& sim) {
    if (real.d != sim.d) throw DataError("compare_stats: discretization units differ");

    StatsComparison c;
    c.total_speech = diff_field(real.total_speech, sim.total_speech);
    c.union_speech = diff_field(real.union_speech, sim.union_speech);
    c.overlapped_speech = diff_field(real.overlapped_speech, sim.overlapped_speech);
    c.overlap_ratio = diff_field(real.overlap_ratio, sim.overlap_ratio);

    uint64_t n_real = 0, n_sim = 0;
    for (auto v : real.token_histogram) n_real += v;
    for (auto v : sim.token_histogram) n_sim += v;
    double tv = 0.0;
    for (size_t i = 0; i < 4; ++i) {
        double p = n_real ? double(real.token_histogram[i]) / double(n_real) : 0.0;
        double q = n_sim ? double(sim.token_histogram[i]) / double(n_sim) : 0.0;
        tv += std::abs(p - q);
    }
    c.token_histogram_tv = tv / 2.0;
    return c;
}

namespace {

json histogram_to_json(const std::map<int, uint64_t>& h) {
    json j = json::object();
    for (const auto& [k, v] : h) j[std::to_string(k)] = v;
    return j;
}

std::map<int, uint64_t> histogram_from_json(const json& j) {
    std::map<int, uint64_t> h;
    for (const auto& [k, v] : j.items()) h[std::stoi(k)] = v.get<uint64_t>();
    return h;
}

json field_to_json(const FieldDiff& f) {
    return {{"real", f.real}, {"sim", f.sim}, {"abs", f.abs_diff}, {"rel", f.rel_diff}};
}

} // namespace

std::string stats_to_json(const OverlapStats& s) {
    json j;
    j["d"] = s.d;
    j["recordings"] = s.recordings;
    j["total_speech"] = s.total_speech;
    j["union_speech"] = s.union_speech;
    j["overlapped_speech"] = s.overlapped_speech;
    j["overlap_ratio"] = s.overlap_ratio;
    j["token_histogram"] = s.token_histogram;
    j["run_length_histograms"] = {histogram_to_json(s.run_length_histograms[0]),
                                  histogram_to_json(s.run_length_histograms[1])};
    j["silence_gap_histogram"] = histogram_to_json(s.silence_gap_histogram);
    return j.dump(2);
}

OverlapStats parse_stats_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("stats json: ") + e.what());
    }
    OverlapStats s;
    try {
        s.d = j.at("d").get<double>();
        s.recordings = j.at("recordings").get<uint64_t>();
        s.total_speech = j.at("total_speech").get<double>();
        s.union_speech = j.at("union_speech").get<double>();
        s.overlapped_speech = j.at("overlapped_speech").get<double>();
        s.overlap_ratio = j.at("overlap_ratio").get<double>();
        s.token_histogram = j.at("token_histogram").get<std::array<uint64_t, 4>>();
        s.run_length_histograms[0] = histogram_from_json(j.at("run_length_histograms").at(0));
        s.run_length_histograms[1] = histogram_from_json(j.at("run_length_histograms").at(1));
        s.silence_gap_histogram = histogram_from_json(j.at("silence_gap_histogram"));
    } catch (const json::exception& e) {
        throw DataError(std::string("stats json: ") + e.what());
    }
    return s;
}

std::string comparison_to_json(const StatsComparison& c) {
    json j;
    j["total_speech"] = field_to_json(c.total_speech);
    j["union_speech"] = field_to_json(c.union_speech);
    j["overlapped_speech"] = field_to_json(c.overlapped_speech);
    j["overlap_ratio"] = field_to_json(c.overlap_ratio);
    j["token_histogram_tv"] = c.token_histogram_tv;
    return j.dump(2);
}

std::string stats_summary(const OverlapStats& s) {
    std::ostringstream out;
    uint64_t tokens = 0;
    for (auto v : s.token_histogram) tokens += v;
    out << "recordings:        " << s.recordings << "\n"
        << "total speech:      " << s.total_speech << " s\n"
        << "speech union:      " << s.union_speech << " s\n"
        << "overlapped speech: " << s.overlapped_speech << " s\n"
        << "overlap ratio:     " << s.overlap_ratio << "\n"
        << "tokens (d=" << s.d << "): " << tokens << "  [0]=" << s.token_histogram[0]
        << " [1]=" << s.token_histogram[1] << " [2]=" << s.token_histogram[2]
        << " [3]=" << s.token_histogram[3] << "\n";
    return out.str();
}

std::string comparison_summary(const StatsComparison& c) {
    std::ostringstream out;
    auto line = [&](const char* name, const FieldDiff& f) {
        out << name << ": real=" << f.real << " sim=" << f.sim << " abs=" << f.abs_diff
            << " rel=" << f.rel_diff << "\n";
    };
    line("total_speech     ", c.total_speech);
    line("union_speech     ", c.union_speech);
    line("overlapped_speech", c.overlapped_speech);
    line("overlap_ratio    ", c.overlap_ratio);
    out << "token histogram TV distance: " << c.token_histogram_tv << "\n";
    return out.str();
}

} // namespace talkmix
