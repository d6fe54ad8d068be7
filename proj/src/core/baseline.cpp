#include "baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "lossmatrix.hpp"

namespace atr {

TfIdfIndex TfIdfIndex::build(
    const std::vector<std::pair<std::string, Tokens>>& generated) {
  if (generated.empty()) {
    throw Error(ErrorCode::InvalidArgument, "EmptyInput: no generated captions");
  }

  TfIdfIndex index;
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& [id, tokens] : generated) {
    std::unordered_map<std::string, bool> seen;
    for (const std::string& tok : tokens) {
      if (!seen[tok]) {
        seen[tok] = true;
        ++df[tok];
      }
    }
  }
  const double n = static_cast<double>(generated.size());
  for (const auto& [term, count] : df) {
    index.idf_[term] = std::log(n / static_cast<double>(count));
  }

  for (const auto& [id, tokens] : generated) {
    std::unordered_map<std::string, double> vec;
    for (const std::string& tok : tokens) vec[tok] += 1.0;
    double norm_sq = 0.0;
    for (auto& [term, w] : vec) {
      w *= index.idf_[term];
      norm_sq += w * w;
    }
    if (norm_sq > 0.0) {
      const double norm = std::sqrt(norm_sq);
      for (auto& [term, w] : vec) w /= norm;
    }
    index.doc_ids_.push_back(id);
    index.vectors_.push_back(std::move(vec));
  }
  return index;
}

RankedList TfIdfIndex::rank(const Tokens& query) const {
  std::unordered_map<std::string, double> qvec;
  for (const std::string& tok : query) {
    auto it = idf_.find(tok);
    if (it != idf_.end()) qvec[tok] += 1.0;
  }
  double norm_sq = 0.0;
  for (auto& [term, w] : qvec) {
    w *= idf_.at(term);
    norm_sq += w * w;
  }
  if (norm_sq > 0.0) {
    const double norm = std::sqrt(norm_sq);
    for (auto& [term, w] : qvec) w /= norm;
  }

  std::vector<double> sims(doc_ids_.size(), 0.0);
  for (std::size_t d = 0; d < vectors_.size(); ++d) {
    double dot = 0.0;
    for (const auto& [term, w] : qvec) {
      auto it = vectors_[d].find(term);
      if (it != vectors_[d].end()) dot += w * it->second;
    }
    sims[d] = dot;
  }

  std::vector<std::size_t> order(doc_ids_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sims[a] > sims[b]; });

  RankedList out;
  for (std::size_t d : order) {
    out.item_ids.push_back(doc_ids_[d]);
    out.scores.push_back(sims[d]);
  }
  return out;
}

BaselineComparison compare_baseline(const Corpus& corpus,
                                    const TagBigramLM& model,
                                    std::size_t beam_width,
                                    std::size_t max_len,
                                    const std::vector<int>& ks) {
  std::vector<std::pair<std::string, Tokens>> generated;
  for (const CorpusItem& item : corpus.items()) {
    generated.emplace_back(item.audio_id,
                           model.generate(item.tags, beam_width, max_len));
  }
  TfIdfIndex index = TfIdfIndex::build(generated);

  std::vector<RankedList> rankings;
  std::map<std::string, std::set<std::string>> relevant;
  for (const CaptionRef& cap : corpus.caption_index()) {
    RankedList ranking = index.rank(cap.tokens);
    ranking.query_id = std::to_string(cap.caption_id);
    relevant[ranking.query_id] = {corpus.items()[cap.item_index].audio_id};
    rankings.push_back(std::move(ranking));
  }

  BaselineComparison cmp;
  cmp.generate_compare.mode = "t2a_gencompare";
  cmp.generate_compare.n_queries = rankings.size();
  for (int k : ks) {
    cmp.generate_compare.recall_at[k] = recall_at_k(rankings, relevant, k);
  }

  LossMatrix matrix = build_loss_matrix(corpus, model);
  cmp.loss_based = evaluate(matrix, corpus, RetrievalMode::T2A, A2tScale::Raw, ks);
  return cmp;
}

}  // namespace atr
