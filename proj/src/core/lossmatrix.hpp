#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"

namespace atr {

// A conditional caption scorer: cross-entropy per token, lower = better
// match. Must be deterministic and nonnegative.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(const Tokens& tags, const Tokens& caption) const = 0;
};

// Dense N_audio x M_caption grid of pair losses; the exchange format
// between scorers and retrieval. Immutable after construction.
class LossMatrix {
 public:
  LossMatrix(std::vector<std::string> audio_ids,
             std::vector<std::string> caption_ids, std::vector<double> values,
             std::string meta = {});

  std::size_t rows() const { return audio_ids_.size(); }
  std::size_t cols() const { return caption_ids_.size(); }
  double at(std::size_t row, std::size_t col) const {
    return values_[row * cols() + col];
  }

  const std::vector<std::string>& audio_ids() const { return audio_ids_; }
  const std::vector<std::string>& caption_ids() const { return caption_ids_; }
  const std::vector<double>& values() const { return values_; }
  const std::string& meta() const { return meta_; }

  std::size_t row_of(const std::string& audio_id) const;
  std::size_t col_of(const std::string& caption_id) const;
  bool has_row(const std::string& audio_id) const;
  bool has_col(const std::string& caption_id) const;

  static LossMatrix read(const std::string& path);
  void write(const std::string& path) const;

 private:
  std::vector<std::string> audio_ids_;
  std::vector<std::string> caption_ids_;
  std::vector<double> values_;  // row-major
  std::string meta_;
  std::unordered_map<std::string, std::size_t> row_index_;
  std::unordered_map<std::string, std::size_t> col_index_;
};

// values[i][j] = scorer(tags of audio i, caption j). Cells are independent;
// with threads > 1 rows are scored concurrently, output is identical to the
// serial schedule.
LossMatrix build_loss_matrix(const Corpus& corpus, const Scorer& scorer,
                             unsigned threads = 1);

}  // namespace atr
