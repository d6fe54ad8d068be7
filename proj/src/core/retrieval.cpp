#include "retrieval.hpp"

#include <algorithm>
#include <numeric>

#include "error.hpp"

namespace atr {

RankedList t2a_rank(const LossMatrix& matrix, const std::string& caption_id) {
  const std::size_t col = matrix.col_of(caption_id);
  std::vector<std::size_t> order(matrix.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return matrix.at(a, col) < matrix.at(b, col);
  });

  RankedList out;
  out.query_id = caption_id;
  for (std::size_t i : order) {
    out.item_ids.push_back(matrix.audio_ids()[i]);
    out.scores.push_back(matrix.at(i, col));
  }
  return out;
}

LossMatrix minmax_scale_columns(const LossMatrix& matrix) {
  const std::size_t n = matrix.rows();
  const std::size_t m = matrix.cols();
  std::vector<double> scaled(n * m);
  for (std::size_t j = 0; j < m; ++j) {
    double lo = matrix.at(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, matrix.at(i, j));
      hi = std::max(hi, matrix.at(i, j));
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i * m + j] = range > 0.0 ? (matrix.at(i, j) - lo) / range : 0.5;
    }
  }
  return LossMatrix(matrix.audio_ids(), matrix.caption_ids(),
                    std::move(scaled), matrix.meta());
}

RankedList a2t_rank(const LossMatrix& matrix, const std::string& audio_id,
                    A2tScale scale) {
  const std::size_t row = matrix.row_of(audio_id);
  const std::size_t m = matrix.cols();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);

  RankedList out;
  out.query_id = audio_id;
  if (scale == A2tScale::Raw) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return matrix.at(row, a) < matrix.at(row, b);
                     });
    for (std::size_t j : order) {
      out.item_ids.push_back(matrix.caption_ids()[j]);
      out.scores.push_back(matrix.at(row, j));
    }
  } else {
    LossMatrix scaled = minmax_scale_columns(matrix);
    // Equal scaled values fall back to the column index (stable sort).
    // Breaking ties by raw loss instead would make the ranking depend on
    // per-column affine offsets, defeating the point of the scaling.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return scaled.at(row, a) < scaled.at(row, b);
                     });
    for (std::size_t j : order) {
      out.item_ids.push_back(matrix.caption_ids()[j]);
      out.scores.push_back(scaled.at(row, j));
    }
  }
  return out;
}

double recall_at_k(
    const std::vector<RankedList>& rankings,
    const std::map<std::string, std::set<std::string>>& relevant, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (rankings.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no rankings to evaluate");
  }
  std::size_t hits = 0;
  for (const RankedList& ranking : rankings) {
    auto it = relevant.find(ranking.query_id);
    if (it == relevant.end()) {
      throw Error(ErrorCode::NotFound,
                  "UnknownId: no relevant set for query " + ranking.query_id);
    }
    const std::set<std::string>& rel = it->second;
    if (rel.empty()) {
      throw Error(ErrorCode::InvalidArgument,
                  "EmptyRelevantSet for query " + ranking.query_id);
    }
    for (const std::string& id : rel) {
      if (std::find(ranking.item_ids.begin(), ranking.item_ids.end(), id) ==
          ranking.item_ids.end()) {
        throw Error(ErrorCode::NotFound,
                    "UnknownId: relevant item " + id + " not a candidate");
      }
    }
    const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                  ranking.item_ids.size());
    for (std::size_t i = 0; i < top; ++i) {
      if (rel.count(ranking.item_ids[i])) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

RetrievalEval evaluate(const LossMatrix& matrix, const Corpus& corpus,
                       RetrievalMode mode, A2tScale scale,
                       const std::vector<int>& ks) {
  // Matrix ids must cover the corpus exactly as built from it.
  for (const CorpusItem& item : corpus.items()) {
    if (!matrix.has_row(item.audio_id)) {
      throw Error(ErrorCode::Data, "IdMismatch: audio " + item.audio_id +
                                       " missing from matrix rows");
    }
  }
  for (const CaptionRef& cap : corpus.caption_index()) {
    if (!matrix.has_col(std::to_string(cap.caption_id))) {
      throw Error(ErrorCode::Data,
                  "IdMismatch: caption " + std::to_string(cap.caption_id) +
                      " missing from matrix columns");
    }
  }

  std::vector<RankedList> rankings;
  std::map<std::string, std::set<std::string>> relevant;
  RetrievalEval eval;

  if (mode == RetrievalMode::T2A) {
    eval.mode = "t2a";
    for (const CaptionRef& cap : corpus.caption_index()) {
      const std::string cid = std::to_string(cap.caption_id);
      rankings.push_back(t2a_rank(matrix, cid));
      relevant[cid] = {corpus.items()[cap.item_index].audio_id};
    }
  } else {
    eval.mode = scale == A2tScale::Raw ? "a2t_raw" : "a2t_scaled";
    for (const CorpusItem& item : corpus.items()) {
      rankings.push_back(a2t_rank(matrix, item.audio_id, scale));
    }
    for (const CaptionRef& cap : corpus.caption_index()) {
      relevant[corpus.items()[cap.item_index].audio_id].insert(
          std::to_string(cap.caption_id));
    }
  }

  eval.n_queries = rankings.size();
  for (int k : ks) eval.recall_at[k] = recall_at_k(rankings, relevant, k);
  return eval;
}

}  // namespace atr
