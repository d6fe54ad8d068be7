#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"
#include "lossmatrix.hpp"

namespace atr {

// Tag-conditioned bigram model with add-k smoothing:
//   P(w | prev, tags) = lambda * P_bigram(w | prev)
//                     + (1 - lambda) * mean over tags of P_tag(w | tag)
// where each factor is add-k smoothed over the full vocabulary. Immutable
// once trained; implements the Scorer contract with per-token CE that
// includes the end-of-sequence prediction.
class TagBigramLM : public Scorer {
 public:
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";
  static constexpr const char* kUnk = "<unk>";

  static TagBigramLM train(const Corpus& corpus, double lambda,
                           double smooth_k);

  static TagBigramLM load(const std::string& path);
  void save(const std::string& path) const;

  double score(const Tokens& tags, const Tokens& caption) const override;

  // P(next | prev, tags) over the full vocabulary, sums to 1.
  double prob(std::size_t next, std::size_t prev, const Tokens& tags) const;

  // Length-bounded beam search maximizing mean log-probability; candidate
  // expansions repeating a non-stopword already in the hypothesis are
  // pruned. Deterministic, ties broken by token index.
  Tokens generate(const Tokens& tags, std::size_t beam_width,
                  std::size_t max_len) const;

  const std::vector<std::string>& vocab() const { return vocab_; }
  std::size_t token_index(const std::string& token) const;  // UNK fallback
  double lambda() const { return lambda_; }
  double smooth_k() const { return smooth_k_; }

  static const std::vector<std::string>& stopwords();

 private:
  TagBigramLM() = default;
  void rebuild_lookup();

  std::vector<std::string> vocab_;  // [0]=BOS, [1]=EOS, [2]=UNK
  std::unordered_map<std::string, std::size_t> vocab_index_;
  // bigram_counts_[prev][next], bigram_totals_[prev] = sum over next
  std::vector<std::map<std::size_t, long long>> bigram_counts_;
  std::vector<long long> bigram_totals_;
  // per-tag emission counts over caption tokens
  std::map<std::string, std::map<std::size_t, long long>> tag_counts_;
  std::map<std::string, long long> tag_totals_;
  double lambda_ = 0.5;
  double smooth_k_ = 0.1;
};

}  // namespace atr
