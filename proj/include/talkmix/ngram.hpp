#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "talkmix/discretize.hpp"
#include "talkmix/rng.hpp"

namespace talkmix {

// Sentinel symbols used in contexts and continuations. Overlap tokens are
// 0..3; BOS pads the left context, EOS terminates every training sequence.
constexpr int kBos = -1;
constexpr int kEos = -2;

// Order-N statistical language model over overlap tokens, maximum-likelihood
// counts with longest-suffix backoff (no discounting: with a 4-symbol
// alphabet unseen-token mass is not a concern, while N=30 contexts routinely
// need backoff). Immutable after train/load; concurrent sampling is safe as
// each call carries its own seed.
class NGramModel {
public:
    using Context = std::vector<int>;
    using Counts = std::map<Context, std::map<int, uint64_t>>;

    NGramModel() = default;

    int order() const { return order_; }
    TokenKind kind() const { return kind_; }
    double unit() const { return unit_; }
    const Counts& counts() const { return counts_; }

    // Counts every n-gram window, n = 1..order, of each sequence padded with
    // order-1 BOS tokens at the start and one EOS at the end.
    static NGramModel train(const std::vector<TokenSequence>& corpus, int order);

    // Ancestral sampling from the BOS context. Each step conditions on the
    // longest stored suffix of the history and stops at EOS or max_tokens.
    TokenSequence sample(uint64_t seed, int max_tokens) const;
    TokenSequence sample(Rng& rng, int max_tokens) const;

    // One draw from the conditional at the longest stored suffix of `history`.
    int sample_next(const Context& history, Rng& rng) const;

    // Conditional distribution (token -> probability) at the longest stored
    // suffix of `history`.
    std::map<int, double> conditional(const Context& history) const;

    // Natural-log probability of the sequence including its EOS step; -inf
    // when any step has zero probability under the backoff-MLE rule.
    double log_prob(const TokenSequence& seq) const;

    // Versioned JSON persistence; BOS = -1, EOS = -2 in serialized form.
    std::string save() const;
    static NGramModel load(const std::string& bytes);
    void save_file(const std::string& path) const;
    static NGramModel load_file(const std::string& path);

    bool operator==(const NGramModel&) const = default;

    // Default sampled-sequence caps: ~10 min of pattern at d=0.25 for time
    // kind, 600 words for word kind.
    static int default_max_tokens(TokenKind kind) {
        return kind == TokenKind::Time ? 2400 : 600;
    }

private:
    // Longest suffix of `history` stored as a context; empty context is
    // always stored for a trained model.
    const std::map<int, uint64_t>* backoff_counts(const Context& history) const;

    int order_ = 0;
    TokenKind kind_ = TokenKind::Time;
    double unit_ = 0.25;
    Counts counts_;
};

} // namespace talkmix
