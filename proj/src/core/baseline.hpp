#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"
#include "retrieval.hpp"
#include "toylm.hpp"

namespace atr {

// Generate-then-compare baseline: one generated caption per audio,
// TF-IDF vectors with IDF = ln(N/df), L2-normalized, ranked by cosine.
class TfIdfIndex {
 public:
  static TfIdfIndex build(
      const std::vector<std::pair<std::string, Tokens>>& generated);

  // Audios by descending cosine similarity to the query caption; ties by
  // document index. Scores are the similarities.
  RankedList rank(const Tokens& query) const;

  std::size_t size() const { return doc_ids_.size(); }

 private:
  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, double> idf_;
  // sparse unit vectors, term -> weight
  std::vector<std::unordered_map<std::string, double>> vectors_;
};

struct BaselineComparison {
  RetrievalEval generate_compare;  // TF-IDF over generated captions
  RetrievalEval loss_based;        // CE loss ranking, same corpus and model
};

// Runs both T2A pipelines with the same toy LM so they can be compared.
BaselineComparison compare_baseline(const Corpus& corpus,
                                    const TagBigramLM& model,
                                    std::size_t beam_width,
                                    std::size_t max_len,
                                    const std::vector<int>& ks);

}  // namespace atr
