#include "talkmix/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "talkmix/error.hpp"

namespace talkmix {

int64_t seconds_to_samples(double seconds, int sample_rate) {
    return static_cast<int64_t>(std::nearbyint(seconds * sample_rate));
}

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(v & 0xff);
    out.push_back((v >> 8) & 0xff);
    out.push_back((v >> 16) & 0xff);
    out.push_back((v >> 24) & 0xff);
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(v & 0xff);
    out.push_back((v >> 8) & 0xff);
}

uint32_t get_u32(const uint8_t* p) {
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}

uint16_t get_u16(const uint8_t* p) { return uint16_t(p[0]) | uint16_t(p[1]) << 8; }

int16_t quantize(float x) {
    double scaled = std::nearbyint(double(x) * 32768.0);
    if (scaled > 32767.0) return 32767;
    if (scaled < -32768.0) return -32768;
    return static_cast<int16_t>(scaled);
}

} // namespace

std::vector<uint8_t> encode_wav(const AudioBuffer& buf) {
    if (buf.sample_rate <= 0) throw DataError("wav write: sample rate must be positive");
    const uint32_t data_bytes = static_cast<uint32_t>(buf.samples.size() * 2);

    std::vector<uint8_t> out;
    out.reserve(44 + data_bytes);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_bytes);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, 1);                               // PCM
    put_u16(out, 1);                               // mono
    put_u32(out, static_cast<uint32_t>(buf.sample_rate));
    put_u32(out, static_cast<uint32_t>(buf.sample_rate * 2));  // byte rate
    put_u16(out, 2);                               // block align
    put_u16(out, 16);                              // bits per sample
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_bytes);
    for (float s : buf.samples) {
        int16_t q = quantize(s);
        out.push_back(static_cast<uint8_t>(q & 0xff));
        out.push_back(static_cast<uint8_t>((q >> 8) & 0xff));
    }
    return out;
}

void write_wav(const AudioBuffer& buf, const std::string& path) {
    std::vector<uint8_t> bytes = encode_wav(buf);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("wav write: cannot open " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("wav write: failed writing " + path);
}

AudioBuffer read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("wav read: cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());

    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw DataError("wav read: not a RIFF WAVE file: " + path);

    bool have_fmt = false;
    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    const uint8_t* data = nullptr;
    uint32_t data_size = 0;

    size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const uint8_t* chunk = bytes.data() + pos;
        uint32_t size = get_u32(chunk + 4);
        if (pos + 8 + size > bytes.size())
            throw DataError("wav read: truncated chunk in " + path);
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (size < 16) throw DataError("wav read: short fmt chunk in " + path);
            format = get_u16(chunk + 8);
            channels = get_u16(chunk + 10);
            rate = get_u32(chunk + 12);
            bits = get_u16(chunk + 22);
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = chunk + 8;
            data_size = size;
        }
        pos += 8 + size + (size & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr) throw DataError("wav read: missing fmt/data chunk: " + path);
    if (format != 1) throw DataError("wav read: unsupported format (PCM only): " + path);
    if (channels != 1) throw DataError("wav read: unsupported channel count (mono only): " + path);
    if (bits != 16) throw DataError("wav read: unsupported bit depth (16-bit only): " + path);

    AudioBuffer buf;
    buf.sample_rate = static_cast<int>(rate);
    buf.samples.resize(data_size / 2);
    for (size_t i = 0; i < buf.samples.size(); ++i) {
        int16_t s = static_cast<int16_t>(get_u16(data + 2 * i));
        buf.samples[i] = static_cast<float>(s) / 32768.0f;
    }
    return buf;
}

AudioBuffer silence(double duration, int sample_rate) {
    if (duration < 0) throw DataError("silence: negative duration");
    AudioBuffer buf;
    buf.sample_rate = sample_rate;
    buf.samples.assign(static_cast<size_t>(seconds_to_samples(duration, sample_rate)), 0.0f);
    return buf;
}

AudioBuffer mix_at(const AudioBuffer& a, const AudioBuffer& u, double offset) {
    if (offset < 0) throw DataError("mix_at: negative offset");
    if (!a.samples.empty() && !u.samples.empty() && a.sample_rate != u.sample_rate)
        throw DataError("mix_at: sample rate mismatch");

    AudioBuffer out;
    out.sample_rate = a.samples.empty() ? u.sample_rate : a.sample_rate;
    size_t off = static_cast<size_t>(seconds_to_samples(offset, out.sample_rate));
    out.samples.assign(std::max(a.samples.size(), off + u.samples.size()), 0.0f);
    std::copy(a.samples.begin(), a.samples.end(), out.samples.begin());
    for (size_t i = 0; i < u.samples.size(); ++i) out.samples[off + i] += u.samples[i];
    return out;
}

} // namespace talkmix
