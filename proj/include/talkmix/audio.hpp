#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace talkmix {

// Mono audio, float32 samples with nominal range [-1, 1]. Quantization to
// 16-bit PCM happens only when writing WAV files.
struct AudioBuffer {
    std::vector<float> samples;
    int sample_rate = 16000;

    double duration() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

// Seconds -> sample index, round-half-to-even. All offset placement goes
// through this so annotations and audio agree to the sample.
int64_t seconds_to_samples(double seconds, int sample_rate);

// Reads a RIFF WAVE file. Only PCM 16-bit mono is accepted.
AudioBuffer read_wav(const std::string& path);

// Writes PCM 16-bit mono, saturating samples outside [-1, 1].
void write_wav(const AudioBuffer& buf, const std::string& path);

// In-memory WAV encoding, same format as write_wav.
std::vector<uint8_t> encode_wav(const AudioBuffer& buf);

AudioBuffer silence(double duration, int sample_rate);

// Additive mix of `u` into `a` starting at `offset` seconds. The result is
// extended to max(len(a), offset + len(u)); `a` is unchanged elsewhere.
AudioBuffer mix_at(const AudioBuffer& a, const AudioBuffer& u, double offset);

} // namespace talkmix
