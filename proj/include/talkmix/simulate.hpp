#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "talkmix/audio.hpp"
#include "talkmix/discretize.hpp"
#include "talkmix/ngram.hpp"
#include "talkmix/pool.hpp"
#include "talkmix/transcript.hpp"

namespace talkmix {

enum class Algorithm { Random, Time, Word };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct AnnotatedWord {
    std::string text;
    double begin = 0.0;
    double end = 0.0;
    std::string speaker;       // synthetic per mixed utterance
    int channel = 0;
    std::string utterance_id;  // source pool utterance
};

struct Provenance {
    Algorithm algorithm = Algorithm::Random;
    uint64_t seed = 0;
    std::optional<TokenSequence> sampled_tokens;
    std::vector<std::string> source_utterance_ids;
};

// Synthesized multi-talker sample: audio plus exact ground-truth annotation.
// At any instant at most two distinct utterances are active.
struct MixedSample {
    std::string sample_id;
    AudioBuffer audio;
    std::vector<AnnotatedWord> annotation;
    Provenance provenance;
};

// End times of already-placed pattern words, keyed by pattern position.
// Undefined indices (including negative ones) read as 0.
class EndTimeBuffer {
public:
    double get(long index) const {
        auto it = entries_.find(index);
        return it == entries_.end() ? 0.0 : it->second;
    }
    void set(long index, double end_time) { entries_[index] = end_time; }

private:
    std::map<long, double> entries_;
};

// Pattern-driven generation: samples a token sequence from the model, decodes
// it, and places one pool utterance per activity run.
MixedSample simulate_time_based(const NGramModel& model, const UtterancePool& pool,
                                uint64_t seed, int max_tokens = 0);
MixedSample simulate_word_based(const NGramModel& model, const UtterancePool& pool,
                                uint64_t seed, int max_tokens = 0);

// Baseline mixer: K~U{1..max_utterances} utterances mixed with random delays,
// each delay drawn from U(end2(a), len(a)) so at most two overlap.
MixedSample simulate_random(const UtterancePool& pool, int max_utterances, uint64_t seed);

// End-sorted transcript plus the channel labels carried by the annotation,
// for re-discretization and serialization of simulated samples.
std::pair<Transcript, ChannelAssignment> annotation_transcript(const MixedSample& sample);

struct BatchConfig {
    // Share of each algorithm; must sum to 1 (tolerance 1e-9).
    double ratio_random = 1.0;
    double ratio_word = 0.0;
    double ratio_time = 0.0;

    const NGramModel* time_model = nullptr;  // required when ratio_time > 0
    const NGramModel* word_model = nullptr;  // required when ratio_word > 0
    const UtterancePool* pool = nullptr;
    int max_utterances = 5;                  // K of the baseline mixer
    int max_tokens = 0;                      // 0 = per-kind default
};

// Sample i is a pure function of (config, master_seed, i): its seed is
// mix_seed(master_seed, i) and the algorithm is drawn from the ratio
// distribution with that same stream.
MixedSample generate_sample(const BatchConfig& config, uint64_t master_seed, uint64_t index);
void generate_batch(const BatchConfig& config, uint64_t count, uint64_t master_seed,
                    const std::function<void(MixedSample&&)>& sink);

// Sidecar annotation line:
// {"sample_id", "algorithm", "seed", "tokens"?, "words": [{"w","b","e","spk","ch","utt"}]}
std::string sample_annotation_jsonl(const MixedSample& sample);
MixedSample parse_sample_annotation_jsonl(const std::string& line);  // audio not restored
std::vector<MixedSample> read_sample_annotations(const std::string& path);

} // namespace talkmix
