#include "talkmix/ngram.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "talkmix/error.hpp"

namespace talkmix {

using nlohmann::json;

NGramModel NGramModel::train(const std::vector<TokenSequence>& corpus, int order) {
    if (corpus.empty()) throw DataError("ngram train: empty corpus");
    if (order < 1) throw DataError("ngram train: order must be >= 1");

    NGramModel m;
    m.order_ = order;
    m.kind_ = corpus.front().kind;
    if (m.kind_ == TokenKind::Time) m.unit_ = corpus.front().unit;
    for (const auto& seq : corpus) {
        if (seq.kind != m.kind_)
            throw DataError("ngram train: mixed time/word kinds in corpus");
        if (seq.kind == TokenKind::Time && seq.unit != m.unit_)
            throw DataError("ngram train: mixed discretization units in corpus");
    }

    for (const auto& seq : corpus) {
        std::vector<int> padded(static_cast<size_t>(order - 1), kBos);
        padded.insert(padded.end(), seq.tokens.begin(), seq.tokens.end());
        padded.push_back(kEos);
        for (size_t pos = static_cast<size_t>(order - 1); pos < padded.size(); ++pos) {
            for (int ctx_len = 0; ctx_len < order; ++ctx_len) {
                Context ctx(padded.begin() + static_cast<long>(pos) - ctx_len,
                            padded.begin() + static_cast<long>(pos));
                ++m.counts_[ctx][padded[pos]];
            }
        }
    }
    return m;
}

const std::map<int, uint64_t>* NGramModel::backoff_counts(const Context& history) const {
    size_t start = history.size() > static_cast<size_t>(order_ - 1)
                       ? history.size() - static_cast<size_t>(order_ - 1)
                       : 0;
    for (size_t s = start; s <= history.size(); ++s) {
        Context ctx(history.begin() + static_cast<long>(s), history.end());
        auto it = counts_.find(ctx);
        if (it != counts_.end()) return &it->second;
    }
    return nullptr;
}

std::map<int, double> NGramModel::conditional(const Context& history) const {
    const auto* next = backoff_counts(history);
    std::map<int, double> probs;
    if (!next) return probs;
    uint64_t total = 0;
    for (const auto& [tok, cnt] : *next) total += cnt;
    for (const auto& [tok, cnt] : *next)
        probs[tok] = static_cast<double>(cnt) / static_cast<double>(total);
    return probs;
}

int NGramModel::sample_next(const Context& history, Rng& rng) const {
    const auto* next = backoff_counts(history);
    if (!next || next->empty()) throw DataError("ngram sample: untrained model");
    uint64_t total = 0;
    for (const auto& [tok, cnt] : *next) total += cnt;
    uint64_t draw = rng.uniform_int(total);
    for (const auto& [tok, cnt] : *next) {
        if (draw < cnt) return tok;
        draw -= cnt;
    }
    return next->rbegin()->first;  // unreachable
}

TokenSequence NGramModel::sample(Rng& rng, int max_tokens) const {
    if (max_tokens < 1) throw DataError("ngram sample: max_tokens must be >= 1");
    TokenSequence seq;
    seq.kind = kind_;
    seq.unit = unit_;

    Context history(static_cast<size_t>(order_ - 1), kBos);
    while (static_cast<int>(seq.tokens.size()) < max_tokens) {
        int tok = sample_next(history, rng);
        if (tok == kEos) break;
        seq.tokens.push_back(tok);
        if (order_ > 1) {
            history.erase(history.begin());
            history.push_back(tok);
        }
    }
    return seq;
}

TokenSequence NGramModel::sample(uint64_t seed, int max_tokens) const {
    Rng rng(seed);
    return sample(rng, max_tokens);
}

double NGramModel::log_prob(const TokenSequence& seq) const {
    if (seq.kind != kind_) throw DataError("ngram log_prob: kind mismatch");

    Context history(static_cast<size_t>(order_ - 1), kBos);
    double lp = 0.0;
    auto step = [&](int tok) {
        const auto* next = backoff_counts(history);
        double p = 0.0;
        if (next) {
            uint64_t total = 0;
            for (const auto& [t, c] : *next) total += c;
            auto it = next->find(tok);
            if (it != next->end()) p = static_cast<double>(it->second) / static_cast<double>(total);
        }
        if (p == 0.0) {
            lp = -std::numeric_limits<double>::infinity();
            return false;
        }
        lp += std::log(p);
        if (order_ > 1) {
            history.erase(history.begin());
            history.push_back(tok);
        }
        return true;
    };
    for (int tok : seq.tokens)
        if (!step(tok)) return lp;
    step(kEos);
    return lp;
}

std::string NGramModel::save() const {
    json j;
    j["version"] = 1;
    j["order"] = order_;
    j["kind"] = kind_ == TokenKind::Time ? "time" : "word";
    if (kind_ == TokenKind::Time) j["d"] = unit_;
    json contexts = json::array();
    for (const auto& [ctx, next] : counts_) {
        json entry;
        entry["ctx"] = ctx;
        json next_j = json::object();
        for (const auto& [tok, cnt] : next) next_j[std::to_string(tok)] = cnt;
        entry["next"] = std::move(next_j);
        contexts.push_back(std::move(entry));
    }
    j["contexts"] = std::move(contexts);
    return j.dump();
}

NGramModel NGramModel::load(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::exception& e) {
        throw DataError(std::string("model load: corrupt payload: ") + e.what());
    }
    NGramModel m;
    try {
        int version = j.at("version").get<int>();
        if (version != 1)
            throw DataError("model load: unsupported version " + std::to_string(version));
        m.order_ = j.at("order").get<int>();
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "time") {
            m.kind_ = TokenKind::Time;
            m.unit_ = j.at("d").get<double>();
        } else if (kind == "word") {
            m.kind_ = TokenKind::Word;
        } else {
            throw DataError("model load: unknown kind '" + kind + "'");
        }
        if (m.order_ < 1) throw DataError("model load: bad order");
        for (const auto& entry : j.at("contexts")) {
            Context ctx = entry.at("ctx").get<Context>();
            for (const auto& [tok_s, cnt] : entry.at("next").items())
                m.counts_[ctx][std::stoi(tok_s)] = cnt.get<uint64_t>();
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("model load: corrupt payload: ") + e.what());
    }
    return m;
}

void NGramModel::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open model file for writing: " + path);
    out << save() << '\n';
}

NGramModel NGramModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load(bytes);
}

} // namespace talkmix
