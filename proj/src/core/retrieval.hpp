#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "lossmatrix.hpp"

namespace atr {

// One query's full ordering over the candidate set, best first. For
// loss-based rankings scores are ascending losses; the TF-IDF baseline
// stores descending similarities instead.
struct RankedList {
  std::string query_id;
  std::vector<std::string> item_ids;
  std::vector<double> scores;
};

enum class A2tScale { Raw, MinMax };

// Audios sorted ascending by the query caption's column; ties broken by
// row index.
RankedList t2a_rank(const LossMatrix& matrix, const std::string& caption_id);

// Per-column (v - min) / (max - min); constant columns map to 0.5.
LossMatrix minmax_scale_columns(const LossMatrix& matrix);

// Captions sorted ascending by the audio's row. MinMax mode sorts by
// (scaled value, raw value, column index) and reports the scaled values.
RankedList a2t_rank(const LossMatrix& matrix, const std::string& audio_id,
                    A2tScale scale);

// Fraction of queries whose top-k contains at least one relevant item.
double recall_at_k(
    const std::vector<RankedList>& rankings,
    const std::map<std::string, std::set<std::string>>& relevant, int k);

struct RetrievalEval {
  std::string mode;  // "t2a", "a2t_raw" or "a2t_scaled"
  std::map<int, double> recall_at;
  std::size_t n_queries = 0;
};

enum class RetrievalMode { T2A, A2T };

// T2A: one query per caption, relevant = its audio. A2T: one query per
// audio, relevant = all of its captions.
RetrievalEval evaluate(const LossMatrix& matrix, const Corpus& corpus,
                       RetrievalMode mode, A2tScale scale,
                       const std::vector<int>& ks);

}  // namespace atr
