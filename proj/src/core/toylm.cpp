#include "toylm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "error.hpp"
#include "fmt.hpp"

namespace atr {

namespace {
constexpr std::size_t kBosIdx = 0;
constexpr std::size_t kEosIdx = 1;
constexpr std::size_t kUnkIdx = 2;
}  // namespace

const std::vector<std::string>& TagBigramLM::stopwords() {
  static const std::vector<std::string> words = {
      "a",    "an",   "the",  "and",   "or",    "of",    "in",   "on",
      "at",   "to",   "is",   "are",   "was",   "were",  "it",   "its",
      "as",   "by",   "for",  "with",  "from",  "then",  "than", "this",
      "that", "these", "those", "be",   "been",  "but",   "if",   "so",
      "not",  "no",   "off",  "up",    "down",  "out",   "over", "under",
      "while", "after", "before"};
  return words;
}

void TagBigramLM::rebuild_lookup() {
  vocab_index_.clear();
  for (std::size_t i = 0; i < vocab_.size(); ++i) vocab_index_[vocab_[i]] = i;
  bigram_totals_.assign(vocab_.size(), 0);
  for (std::size_t prev = 0; prev < bigram_counts_.size(); ++prev) {
    for (const auto& [next, count] : bigram_counts_[prev]) {
      bigram_totals_[prev] += count;
    }
  }
  tag_totals_.clear();
  for (const auto& [tag, counts] : tag_counts_) {
    long long total = 0;
    for (const auto& [tok, count] : counts) total += count;
    tag_totals_[tag] = total;
  }
}

std::size_t TagBigramLM::token_index(const std::string& token) const {
  auto it = vocab_index_.find(token);
  return it == vocab_index_.end() ? kUnkIdx : it->second;
}

TagBigramLM TagBigramLM::train(const Corpus& corpus, double lambda,
                               double smooth_k) {
  if (corpus.num_items() == 0) {
    throw Error(ErrorCode::InvalidArgument, "EmptyCorpus");
  }
  if (lambda < 0.0 || lambda > 1.0 || !(smooth_k > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "need 0 <= lambda <= 1 and smooth_k > 0");
  }

  TagBigramLM lm;
  lm.lambda_ = lambda;
  lm.smooth_k_ = smooth_k;
  lm.vocab_ = {kBos, kEos, kUnk};
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < lm.vocab_.size(); ++i) index[lm.vocab_[i]] = i;

  auto intern = [&](const std::string& tok) {
    auto it = index.find(tok);
    if (it != index.end()) return it->second;
    std::size_t idx = lm.vocab_.size();
    lm.vocab_.push_back(tok);
    index[tok] = idx;
    return idx;
  };

  lm.bigram_counts_.resize(3);
  for (const CorpusItem& item : corpus.items()) {
    for (const Tokens& caption : item.captions) {
      std::size_t prev = kBosIdx;
      for (const std::string& tok : caption) {
        std::size_t cur = intern(tok);
        lm.bigram_counts_.resize(lm.vocab_.size());
        lm.bigram_counts_[prev][cur] += 1;
        for (const std::string& tag : item.tags) {
          lm.tag_counts_[tag][cur] += 1;
        }
        prev = cur;
      }
      lm.bigram_counts_[prev][kEosIdx] += 1;
    }
  }
  lm.bigram_counts_.resize(lm.vocab_.size());
  lm.rebuild_lookup();
  return lm;
}

double TagBigramLM::prob(std::size_t next, std::size_t prev,
                         const Tokens& tags) const {
  const double v = static_cast<double>(vocab_.size());
  long long bi_count = 0;
  if (prev < bigram_counts_.size()) {
    auto it = bigram_counts_[prev].find(next);
    if (it != bigram_counts_[prev].end()) bi_count = it->second;
  }
  const long long bi_total = prev < bigram_totals_.size() ? bigram_totals_[prev] : 0;
  const double p_bigram = (static_cast<double>(bi_count) + smooth_k_) /
                          (static_cast<double>(bi_total) + smooth_k_ * v);

  double p_tags = 1.0 / v;  // uniform when no tags given
  if (!tags.empty()) {
    double sum = 0.0;
    for (const std::string& tag : tags) {
      long long count = 0;
      long long total = 0;
      auto it = tag_counts_.find(tag);
      if (it != tag_counts_.end()) {
        auto jt = it->second.find(next);
        if (jt != it->second.end()) count = jt->second;
        total = tag_totals_.at(tag);
      }
      sum += (static_cast<double>(count) + smooth_k_) /
             (static_cast<double>(total) + smooth_k_ * v);
    }
    p_tags = sum / static_cast<double>(tags.size());
  }
  return lambda_ * p_bigram + (1.0 - lambda_) * p_tags;
}

double TagBigramLM::score(const Tokens& tags, const Tokens& caption) const {
  if (caption.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot score an empty caption");
  }
  double log_sum = 0.0;
  std::size_t prev = kBosIdx;
  for (const std::string& tok : caption) {
    std::size_t cur = token_index(tok);
    log_sum += std::log(prob(cur, prev, tags));
    prev = cur;
  }
  log_sum += std::log(prob(kEosIdx, prev, tags));
  double ce = -log_sum / static_cast<double>(caption.size() + 1);
  return ce < 0.0 ? 0.0 : ce;  // guard against -0.0
}

Tokens TagBigramLM::generate(const Tokens& tags, std::size_t beam_width,
                             std::size_t max_len) const {
  if (beam_width < 1 || max_len < 1) {
    throw Error(ErrorCode::InvalidArgument, "need beam_width, max_len >= 1");
  }

  std::set<std::size_t> stop_indices;
  for (const std::string& w : stopwords()) {
    auto it = vocab_index_.find(w);
    if (it != vocab_index_.end()) stop_indices.insert(it->second);
  }

  struct Hyp {
    std::vector<std::size_t> toks;
    double log_sum = 0.0;
    bool done = false;
    double mean() const {
      std::size_t n = toks.size() + (done ? 1 : 0);
      return n == 0 ? 0.0 : log_sum / static_cast<double>(n);
    }
  };

  std::vector<Hyp> live = {Hyp{}};
  std::vector<Hyp> completed;

  for (std::size_t step = 0; step < max_len && !live.empty(); ++step) {
    std::vector<Hyp> candidates;
    for (const Hyp& hyp : live) {
      std::size_t prev = hyp.toks.empty() ? kBosIdx : hyp.toks.back();
      for (std::size_t w = 0; w < vocab_.size(); ++w) {
        if (w == kBosIdx || w == kUnkIdx) continue;
        if (w != kEosIdx && !stop_indices.count(w) &&
            std::find(hyp.toks.begin(), hyp.toks.end(), w) != hyp.toks.end()) {
          continue;  // no repeated non-stopword
        }
        Hyp cand = hyp;
        cand.log_sum += std::log(prob(w, prev, tags));
        if (w == kEosIdx) {
          cand.done = true;
        } else {
          cand.toks.push_back(w);
        }
        candidates.push_back(std::move(cand));
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Hyp& a, const Hyp& b) {
                       return a.mean() > b.mean();
                     });
    live.clear();
    std::size_t kept = 0;
    for (Hyp& cand : candidates) {
      if (kept >= beam_width) break;
      ++kept;
      if (cand.done) {
        completed.push_back(std::move(cand));
      } else {
        live.push_back(std::move(cand));
      }
    }
  }

  // Hypotheses cut off at max_len compete with completed ones.
  for (Hyp& hyp : live) completed.push_back(std::move(hyp));
  if (completed.empty()) return {};
  const Hyp* best = &completed[0];
  for (const Hyp& hyp : completed) {
    if (hyp.mean() > best->mean()) best = &hyp;
  }
  Tokens out;
  for (std::size_t idx : best->toks) out.push_back(vocab_[idx]);
  return out;
}

void TagBigramLM::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write model file: " + path);
  out << "toylm-model 1\n";
  out << "lambda " << format_double_compact(lambda_) << "\n";
  out << "smooth_k " << format_double_compact(smooth_k_) << "\n";
  out << "vocab " << vocab_.size() << "\n";
  for (const std::string& tok : vocab_) out << tok << "\n";
  std::size_t n_bigrams = 0;
  for (const auto& row : bigram_counts_) n_bigrams += row.size();
  out << "bigrams " << n_bigrams << "\n";
  for (std::size_t prev = 0; prev < bigram_counts_.size(); ++prev) {
    for (const auto& [next, count] : bigram_counts_[prev]) {
      out << prev << " " << next << " " << count << "\n";
    }
  }
  out << "tags " << tag_counts_.size() << "\n";
  for (const auto& [tag, counts] : tag_counts_) {
    out << "tag " << tag << " " << counts.size() << "\n";
    for (const auto& [tok, count] : counts) {
      out << tok << " " << count << "\n";
    }
  }
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

namespace {

std::string expect_line(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::Parse, path + ": truncated model file");
  }
  return line;
}

}  // namespace

TagBigramLM TagBigramLM::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open model file: " + path);

  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorCode::Parse, path + ": " + what);
  };

  TagBigramLM lm;
  if (expect_line(in, path) != "toylm-model 1") throw fail("bad magic line");

  std::string key;
  {
    std::istringstream ls(expect_line(in, path));
    if (!(ls >> key >> lm.lambda_) || key != "lambda") throw fail("bad lambda");
  }
  {
    std::istringstream ls(expect_line(in, path));
    if (!(ls >> key >> lm.smooth_k_) || key != "smooth_k") {
      throw fail("bad smooth_k");
    }
  }
  std::size_t n_vocab = 0;
  {
    std::istringstream ls(expect_line(in, path));
    if (!(ls >> key >> n_vocab) || key != "vocab" || n_vocab < 3) {
      throw fail("bad vocab header");
    }
  }
  for (std::size_t i = 0; i < n_vocab; ++i) {
    lm.vocab_.push_back(expect_line(in, path));
  }
  if (lm.vocab_[0] != kBos || lm.vocab_[1] != kEos || lm.vocab_[2] != kUnk) {
    throw fail("missing sentinel tokens");
  }

  std::size_t n_bigrams = 0;
  {
    std::istringstream ls(expect_line(in, path));
    if (!(ls >> key >> n_bigrams) || key != "bigrams") {
      throw fail("bad bigrams header");
    }
  }
  lm.bigram_counts_.resize(n_vocab);
  for (std::size_t i = 0; i < n_bigrams; ++i) {
    std::istringstream ls(expect_line(in, path));
    std::size_t prev = 0, next = 0;
    long long count = 0;
    if (!(ls >> prev >> next >> count) || prev >= n_vocab || next >= n_vocab ||
        count < 0) {
      throw fail("bad bigram entry");
    }
    lm.bigram_counts_[prev][next] = count;
  }

  std::size_t n_tags = 0;
  {
    std::istringstream ls(expect_line(in, path));
    if (!(ls >> key >> n_tags) || key != "tags") throw fail("bad tags header");
  }
  for (std::size_t t = 0; t < n_tags; ++t) {
    std::istringstream ls(expect_line(in, path));
    std::string tag;
    std::size_t n_entries = 0;
    if (!(ls >> key >> tag >> n_entries) || key != "tag") {
      throw fail("bad tag header");
    }
    auto& counts = lm.tag_counts_[tag];
    for (std::size_t e = 0; e < n_entries; ++e) {
      std::istringstream es(expect_line(in, path));
      std::size_t tok = 0;
      long long count = 0;
      if (!(es >> tok >> count) || tok >= n_vocab || count < 0) {
        throw fail("bad tag count entry");
      }
      counts[tok] = count;
    }
  }
  if (lm.lambda_ < 0.0 || lm.lambda_ > 1.0 || !(lm.smooth_k_ > 0.0)) {
    throw fail("hyperparameters out of range");
  }
  lm.rebuild_lookup();
  return lm;
}

}  // namespace atr
