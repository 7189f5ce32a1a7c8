#include "talkmix/cli.hpp"

#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "talkmix/audio.hpp"
#include "talkmix/discretize.hpp"
#include "talkmix/error.hpp"
#include "talkmix/ngram.hpp"
#include "talkmix/pool.hpp"
#include "talkmix/simulate.hpp"
#include "talkmix/stats.hpp"
#include "talkmix/transcript.hpp"
#include "talkmix/tsot.hpp"

namespace talkmix {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

uint32_t crc32(const std::vector<uint8_t>& bytes) {
    static std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t c = 0xFFFFFFFFu;
    for (uint8_t b : bytes) c = table[(c ^ b) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::string hex32(uint32_t v) {
    char buf[9];
    std::snprintf(buf, sizeof(buf), "%08x", v);
    return buf;
}

std::string sanitize_filename(const std::string& id) {
    std::string out;
    for (char ch : id)
        out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' ||
                ch == '_')
                   ? ch
                   : '_';
    return out.empty() ? "u" : out;
}

// Transcript or annotation JSONL, detected per line by its id field.
std::vector<Transcript> read_annotated_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);
    std::vector<Transcript> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            if (j.contains("recording_id")) {
                out.push_back(parse_transcript_jsonl(line));
            } else if (j.contains("sample_id")) {
                MixedSample s = parse_sample_annotation_jsonl(line);
                s.sample_id = j.at("sample_id").get<std::string>();
                out.push_back(annotation_transcript(s).first);
            } else {
                throw DataError("expected recording_id or sample_id");
            }
        } catch (const json::exception& e) {
            throw DataError(path + " line " + std::to_string(line_no) + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError(path + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void resolve_audio_paths(std::vector<Utterance>& utterances, const fs::path& manifest_path) {
    fs::path base = manifest_path.parent_path();
    for (auto& u : utterances) {
        if (!u.audio_path.empty() && fs::path(u.audio_path).is_relative())
            u.audio_path = (base / u.audio_path).string();
    }
}

UtterancePool load_pool(const std::string& manifest_path) {
    UtterancePool pool;
    pool.utterances = read_pool_manifest(manifest_path);
    if (pool.utterances.empty()) throw DataError("pool manifest is empty: " + manifest_path);
    resolve_audio_paths(pool.utterances, manifest_path);
    build_indices(pool);
    pool.sample_rate = fetch_audio(pool.utterances.front(), 0).sample_rate;
    return pool;
}

int cmd_discretize(const std::string& input, const std::string& format, const std::string& mode,
                   double d, double silence_threshold, const std::string& output) {
    auto fmt = format == "ctm" ? TranscriptFormat::Ctm : TranscriptFormat::Jsonl;
    std::vector<Transcript> transcripts = read_transcripts(input, fmt);
    std::vector<TokenSequence> out;
    for (const auto& t : transcripts) {
        if (mode == "time") {
            out.push_back(discretize_time(t, assign_channels(t), d));
        } else {
            for (const auto& seg : segment_by_silence(t, silence_threshold))
                out.push_back(discretize_word(seg, assign_channels(seg), silence_threshold));
        }
    }
    write_token_sequences(out, output);
    std::cout << "wrote " << out.size() << " token sequence(s) to " << output << "\n";
    return 0;
}

int cmd_train_slm(const std::string& input, int order, const std::string& output) {
    std::vector<TokenSequence> corpus = read_token_sequences(input);
    NGramModel model = NGramModel::train(corpus, order);
    model.save_file(output);
    std::cout << "trained order-" << order << " model on " << corpus.size()
              << " sequence(s), saved to " << output << "\n";
    return 0;
}

int cmd_build_pool(const std::string& input, size_t size, double silence_threshold,
                   uint64_t seed, double pad, const std::string& out_dir) {
    std::vector<Utterance> source = read_pool_manifest(input);
    if (source.empty()) throw DataError("corpus manifest is empty: " + input);
    resolve_audio_paths(source, input);
    UtterancePool pool = build_pool(source, size, silence_threshold, seed, pad);

    fs::create_directories(fs::path(out_dir) / "audio");
    std::map<std::string, int> used_names;
    for (auto& u : pool.utterances) {
        AudioBuffer buf = fetch_audio(u, 0);
        std::string name = sanitize_filename(u.utterance_id);
        int n = used_names[name]++;
        if (n > 0) name += "-" + std::to_string(n + 1);
        std::string rel = "audio/" + name + ".wav";
        write_wav(buf, (fs::path(out_dir) / rel).string());
        u.audio_path = rel;
        u.audio.reset();
    }
    write_pool_manifest(pool, (fs::path(out_dir) / "pool.jsonl").string());
    std::cout << "built pool of " << pool.utterances.size() << " utterance(s) in " << out_dir
              << "\n";
    return 0;
}

int cmd_simulate(const std::vector<std::string>& model_paths, const std::string& pool_path,
                 const std::string& algorithm, const std::string& ratios_arg, uint64_t count,
                 uint64_t seed, const std::string& out_dir, int max_speakers, int max_tokens) {
    UtterancePool pool = load_pool(pool_path);

    std::optional<NGramModel> time_model, word_model;
    for (const auto& path : model_paths) {
        NGramModel m = NGramModel::load_file(path);
        if (m.kind() == TokenKind::Time) time_model = std::move(m);
        else word_model = std::move(m);
    }

    BatchConfig config;
    config.pool = &pool;
    config.max_utterances = max_speakers;
    config.max_tokens = max_tokens;
    config.time_model = time_model ? &*time_model : nullptr;
    config.word_model = word_model ? &*word_model : nullptr;

    if (algorithm == "random") {
        config.ratio_random = 1.0;
    } else if (algorithm == "time") {
        config.ratio_random = 0.0;
        config.ratio_time = 1.0;
    } else if (algorithm == "word") {
        config.ratio_random = 0.0;
        config.ratio_word = 1.0;
    } else if (algorithm == "mix") {
        double r = 0, w = 0, t = 0;
        if (std::sscanf(ratios_arg.c_str(), "%lf,%lf,%lf", &r, &w, &t) != 3)
            throw DataError("--ratios expects 'random,word,time', e.g. 0.3,0.3,0.4");
        config.ratio_random = r;
        config.ratio_word = w;
        config.ratio_time = t;
    } else {
        throw DataError("unknown algorithm '" + algorithm + "'");
    }

    fs::create_directories(out_dir);
    std::ofstream annotations((fs::path(out_dir) / "annotations.jsonl").string());
    std::ofstream manifest((fs::path(out_dir) / "manifest.jsonl").string());
    if (!annotations || !manifest) throw DataError("cannot write into " + out_dir);

    generate_batch(config, count, seed, [&](MixedSample&& sample) {
        std::string wav_rel = sample.sample_id + ".wav";
        std::vector<uint8_t> wav_bytes = encode_wav(sample.audio);
        std::ofstream wav((fs::path(out_dir) / wav_rel).string(), std::ios::binary);
        wav.write(reinterpret_cast<const char*>(wav_bytes.data()),
                  static_cast<std::streamsize>(wav_bytes.size()));
        if (!wav) throw DataError("cannot write wav for sample " + sample.sample_id);

        annotations << sample_annotation_jsonl(sample) << '\n';
        json m;
        m["sample_id"] = sample.sample_id;
        m["wav"] = wav_rel;
        m["algorithm"] = algorithm_name(sample.provenance.algorithm);
        m["seed"] = sample.provenance.seed;
        m["wav_crc32"] = hex32(crc32(wav_bytes));
        manifest << m.dump() << '\n';
    });
    std::cout << "wrote " << count << " sample(s) to " << out_dir << "\n";
    return 0;
}

int cmd_serialize(const std::string& input, const std::string& output) {
    std::vector<Transcript> inputs = read_annotated_input(input);
    std::ofstream out(output);
    if (!out) throw DataError("cannot open output file: " + output);
    for (const auto& t : inputs) {
        std::vector<TimedWord> words(t.words.begin(), t.words.end());
        out << tsot_to_line(serialize_tsot(words, t.recording_id)) << '\n';
    }
    std::cout << "serialized " << inputs.size() << " sample(s) to " << output << "\n";
    return 0;
}

int cmd_stats(const std::string& input, double d, const std::string& output) {
    OverlapStats s = compute_stats(read_annotated_input(input), d);
    if (!output.empty()) {
        std::ofstream out(output);
        if (!out) throw DataError("cannot open output file: " + output);
        out << stats_to_json(s) << '\n';
    }
    std::cout << stats_summary(s);
    return 0;
}

int cmd_compare(const std::string& real_path, const std::string& sim_path,
                const std::string& output) {
    auto read_report = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open report: " + path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return parse_stats_json(text);
    };
    StatsComparison c = compare_stats(read_report(real_path), read_report(sim_path));
    if (!output.empty()) {
        std::ofstream out(output);
        if (!out) throw DataError("cannot open output file: " + output);
        out << comparison_to_json(c) << '\n';
    }
    std::cout << comparison_summary(c);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"talkmix: multi-talker overlapping speech simulation", "talkmix"};
    app.require_subcommand(1);
    app.set_config("--config");

    // discretize
    auto* disc = app.add_subcommand("discretize", "Convert transcripts to overlap tokens");
    std::string disc_input, disc_output = "tokens.jsonl", disc_format = "jsonl",
                disc_mode = "time";
    double disc_d = 0.25, disc_sil = 0.5;
    disc->add_option("--input,-i", disc_input, "Transcript file")->required();
    disc->add_option("--format", disc_format, "Input format")
        ->check(CLI::IsMember({"jsonl", "ctm"}));
    disc->add_option("--mode", disc_mode, "Discretization mode")
        ->check(CLI::IsMember({"time", "word"}));
    disc->add_option("--d", disc_d, "Window length in seconds (time mode)");
    disc->add_option("--silence-threshold", disc_sil, "Silence split threshold in seconds");
    disc->add_option("--output,-o", disc_output, "Output token JSONL");

    // train-slm
    auto* train = app.add_subcommand("train-slm", "Train the overlap n-gram model");
    std::string train_input, train_output = "model.json";
    int train_order = 30;
    train->add_option("--input,-i", train_input, "Token JSONL")->required();
    train->add_option("--order", train_order, "N-gram order")->check(CLI::PositiveNumber);
    train->add_option("--output,-o", train_output, "Output model file");

    // build-pool
    auto* bpool = app.add_subcommand("build-pool", "Segment a corpus into an utterance pool");
    std::string bpool_input, bpool_out_dir = "pool";
    size_t bpool_size = 10000;
    double bpool_sil = 0.5, bpool_pad = 0.0;
    uint64_t bpool_seed = 0;
    bpool->add_option("--input,-i", bpool_input, "Corpus manifest JSONL")->required();
    bpool->add_option("--size", bpool_size, "Pool size")->check(CLI::PositiveNumber);
    bpool->add_option("--silence-threshold", bpool_sil, "Silence split threshold in seconds");
    bpool->add_option("--pad", bpool_pad, "Cut padding around word boundaries in seconds");
    bpool->add_option("--seed", bpool_seed, "Sampling seed");
    bpool->add_option("--out-dir", bpool_out_dir, "Output directory");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate multi-talker samples");
    std::vector<std::string> sim_models;
    std::string sim_pool, sim_algorithm = "random", sim_ratios = "0.3,0.3,0.4",
                sim_out_dir = "out";
    uint64_t sim_count = 1, sim_seed = 0;
    int sim_max_speakers = 5, sim_max_tokens = 0;
    sim->add_option("--model", sim_models, "Model file(s); time and/or word kind");
    sim->add_option("--pool", sim_pool, "Pool manifest")->required();
    sim->add_option("--algorithm", sim_algorithm, "Simulation algorithm")
        ->check(CLI::IsMember({"random", "time", "word", "mix"}));
    sim->add_option("--ratios", sim_ratios, "random,word,time shares for --algorithm mix");
    sim->add_option("--count", sim_count, "Number of samples");
    sim->add_option("--seed", sim_seed, "Master seed");
    sim->add_option("--out-dir", sim_out_dir, "Output directory");
    sim->add_option("--max-speakers", sim_max_speakers,
                    "Max utterances K of the random baseline")
        ->check(CLI::PositiveNumber);
    sim->add_option("--max-tokens", sim_max_tokens, "Sampled pattern length cap (0 = default)");

    // serialize
    auto* ser = app.add_subcommand("serialize", "Serialize annotations to t-SOT text");
    std::string ser_input, ser_output = "tsot.txt";
    ser->add_option("--input,-i", ser_input, "Annotation or transcript JSONL")->required();
    ser->add_option("--output,-o", ser_output, "Output text file");

    // stats
    auto* st = app.add_subcommand("stats", "Overlap statistics of a corpus");
    std::string st_input, st_output;
    double st_d = 0.25;
    st->add_option("--input,-i", st_input, "Annotation or transcript JSONL")->required();
    st->add_option("--d", st_d, "Window length for the token histogram");
    st->add_option("--output,-o", st_output, "Write the JSON report here");

    // compare
    auto* cmp = app.add_subcommand("compare", "Compare two stats reports");
    std::string cmp_real, cmp_sim, cmp_output;
    cmp->add_option("real", cmp_real, "Reference report JSON")->required();
    cmp->add_option("sim", cmp_sim, "Candidate report JSON")->required();
    cmp->add_option("--output,-o", cmp_output, "Write the comparison JSON here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (disc->parsed())
            return cmd_discretize(disc_input, disc_format, disc_mode, disc_d, disc_sil,
                                  disc_output);
        if (train->parsed()) return cmd_train_slm(train_input, train_order, train_output);
        if (bpool->parsed())
            return cmd_build_pool(bpool_input, bpool_size, bpool_sil, bpool_seed, bpool_pad,
                                  bpool_out_dir);
        if (sim->parsed())
            return cmd_simulate(sim_models, sim_pool, sim_algorithm, sim_ratios, sim_count,
                                sim_seed, sim_out_dir, sim_max_speakers, sim_max_tokens);
        if (ser->parsed()) return cmd_serialize(ser_input, ser_output);
        if (st->parsed()) return cmd_stats(st_input, st_d, st_output);
        if (cmp->parsed()) return cmd_compare(cmp_real, cmp_sim, cmp_output);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

} // namespace talkmix
