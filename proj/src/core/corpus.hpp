#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace atr {

using Tokens = std::vector<std::string>;

// Lowercases, strips ASCII punctuation, splits on whitespace runs.
// Throws Error(Data, "EmptyCaption...") if nothing survives.
Tokens normalize_caption(std::string_view raw);

std::string join_tokens(const Tokens& tokens);

struct CorpusItem {
  std::string audio_id;
  Tokens tags;                    // >= 1; in ordered-events corpora the
                                  // first two tags are the ordered pair
  std::vector<Tokens> captions;   // >= 1, normalized
};

// Flattened view of one caption. caption_id is the zero-based position in
// flattened corpus order, which is also the matrix column label.
struct CaptionRef {
  std::size_t caption_id;
  std::size_t item_index;
  Tokens tokens;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<CorpusItem> items);

  static Corpus load(const std::string& path);
  void save(const std::string& path) const;

  const std::vector<CorpusItem>& items() const { return items_; }
  const std::vector<CaptionRef>& caption_index() const { return captions_; }

  std::size_t num_items() const { return items_.size(); }
  std::size_t num_captions() const { return captions_.size(); }

  const CorpusItem& item_of_caption(std::size_t caption_id) const;
  std::size_t item_index_of(const std::string& audio_id) const;

 private:
  std::vector<CorpusItem> items_;
  std::vector<CaptionRef> captions_;
  std::unordered_map<std::string, std::size_t> by_audio_id_;
};

struct SynthParams {
  std::size_t n_audio = 2;
  std::size_t tag_vocab_size = 4;
  std::size_t tags_per_audio = 1;
  std::size_t captions_per_audio = 1;
  std::uint64_t seed = 0;
  bool ordered_events = false;
};

// Deterministic synthetic corpus; a pure function of its parameters.
Corpus synth_corpus(const SynthParams& params);

}  // namespace atr
