#include "corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace atr {

Tokens normalize_caption(std::string_view raw) {
  std::string cleaned;
  cleaned.reserve(raw.size());
  for (unsigned char c : raw) {
    if (std::ispunct(c)) continue;
    cleaned.push_back(static_cast<char>(std::tolower(c)));
  }
  Tokens tokens;
  std::istringstream in(cleaned);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  if (tokens.empty()) {
    throw Error(ErrorCode::Data,
                "EmptyCaption: no tokens survive normalization of \"" +
                    std::string(raw) + "\"");
  }
  return tokens;
}

std::string join_tokens(const Tokens& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

Corpus::Corpus(std::vector<CorpusItem> items) : items_(std::move(items)) {
  std::size_t caption_id = 0;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const CorpusItem& item = items_[i];
    if (item.audio_id.empty()) {
      throw Error(ErrorCode::Data, "empty audio_id at item " + std::to_string(i));
    }
    if (!by_audio_id_.emplace(item.audio_id, i).second) {
      throw Error(ErrorCode::Data, "DuplicateAudioId: " + item.audio_id);
    }
    if (item.tags.empty()) {
      throw Error(ErrorCode::Data, "item " + item.audio_id + " has no tags");
    }
    if (item.captions.empty()) {
      throw Error(ErrorCode::Data, "item " + item.audio_id + " has no captions");
    }
    for (const Tokens& cap : item.captions) {
      if (cap.empty()) {
        throw Error(ErrorCode::Data, "EmptyCaption in item " + item.audio_id);
      }
      captions_.push_back(CaptionRef{caption_id++, i, cap});
    }
  }
}

const CorpusItem& Corpus::item_of_caption(std::size_t caption_id) const {
  if (caption_id >= captions_.size()) {
    throw Error(ErrorCode::NotFound,
                "unknown caption_id " + std::to_string(caption_id));
  }
  return items_[captions_[caption_id].item_index];
}

std::size_t Corpus::item_index_of(const std::string& audio_id) const {
  auto it = by_audio_id_.find(audio_id);
  if (it == by_audio_id_.end()) {
    throw Error(ErrorCode::NotFound, "unknown audio_id " + audio_id);
  }
  return it->second;
}

Corpus Corpus::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open corpus file: " + path);

  std::vector<CorpusItem> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    try {
      CorpusItem item;
      item.audio_id = rec.at("audio_id").get<std::string>();
      for (const auto& t : rec.at("tags")) {
        std::string tag = t.get<std::string>();
        if (tag.empty()) throw Error(ErrorCode::Parse, "empty tag");
        item.tags.push_back(std::move(tag));
      }
      for (const auto& c : rec.at("captions")) {
        item.captions.push_back(normalize_caption(c.get<std::string>()));
      }
      if (item.tags.empty() || item.captions.empty()) {
        throw Error(ErrorCode::Parse, "tags and captions must be non-empty");
      }
      items.push_back(std::move(item));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(),
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return Corpus(std::move(items));
}

void Corpus::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write corpus file: " + path);
  for (const CorpusItem& item : items_) {
    nlohmann::json rec;
    rec["audio_id"] = item.audio_id;
    rec["tags"] = item.tags;
    std::vector<std::string> caps;
    for (const Tokens& c : item.captions) caps.push_back(join_tokens(c));
    rec["captions"] = caps;
    out << rec.dump() << "\n";
  }
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

namespace {

const std::array<std::string_view, 48> kTagWords = {
    "alarm",  "bell",     "bird",     "car",     "cat",     "chatter",
    "clock",  "crowd",    "dog",      "door",    "drill",   "drum",
    "engine", "fire",     "flute",    "footsteps", "fountain", "frog",
    "glass",  "guitar",   "hammer",   "horn",    "horse",   "insect",
    "keyboard", "knock",  "laughter", "machine", "motor",   "owl",
    "piano",  "rain",     "river",    "rooster", "saw",     "siren",
    "speech", "stream",   "thunder",  "traffic", "train",   "truck",
    "violin", "water",    "whistle",  "wind",    "wave",    "wood"};

const std::array<std::string_view, 5> kAdjectives = {"faint", "loud", "distant",
                                                     "soft", "steady"};

std::string tag_name(std::size_t index) {
  if (index < kTagWords.size()) return std::string(kTagWords[index]);
  return "event" + std::to_string(index);
}

// Plain-mode caption templates; every caption mentions up to three of the
// item's tags so the tag-conditioned LM has signal to retrieve on.
Tokens plain_caption(const Tokens& tags, std::mt19937_64& rng) {
  // Distinct tag picks a, b, c (wrapping when the item has fewer tags).
  std::size_t start = draw_below(rng, tags.size());
  const std::string& a = tags[start];
  const std::string& b = tags[(start + 1) % tags.size()];
  const std::string& c = tags[(start + 2) % tags.size()];
  const std::string adj(kAdjectives[draw_below(rng, kAdjectives.size())]);
  switch (draw_below(rng, 5)) {
    case 0: return {"a", adj, a, "sound", "can", "be", "heard", "with", "a", b};
    case 1: return {"the", a, "and", "the", b, "are", "audible", "near", "a", c};
    case 2: return {"someone", "records", "a", a, "a", b, "and", "a", c};
    case 3: return {"the", adj, a, "keeps", "going", "near", "a", b};
    default: return {"a", b, "a", c, "and", "a", a, "can", "be", "heard"};
  }
}

// Ordered-events templates. The first two item tags are the ordered pair
// (first happens before second); the clause shapes are deliberately
// asymmetric ("sound begins" vs "noise follows") so clause inversion
// produces bigrams never seen in training.
Tokens ordered_caption(const std::string& first, const std::string& second,
                       std::mt19937_64& rng) {
  switch (draw_below(rng, 4)) {
    case 0:
      return {"the", first, "sound", "begins", "then",
              "a",   second, "noise", "follows"};
    case 1:
      return {"the", first, "sound", "begins", "and", "then",
              "a",   second, "noise", "follows"};
    case 2:
      return {"the", first, "sound", "begins", "before",
              "a",   second, "noise", "follows"};
    default:
      return {"a",   second, "noise", "follows", "after",
              "the", first,  "sound", "begins"};
  }
}

}  // namespace

Corpus synth_corpus(const SynthParams& p) {
  if (p.n_audio < 2 || p.tags_per_audio < 1 || p.captions_per_audio < 1 ||
      p.tag_vocab_size < 1 || p.tags_per_audio > p.tag_vocab_size ||
      (p.ordered_events && p.tag_vocab_size < 2)) {
    throw Error(ErrorCode::InvalidArgument, "InvalidParams for synth_corpus");
  }

  std::mt19937_64 rng(p.seed);
  std::vector<CorpusItem> items;
  std::set<Tokens> seen_tag_sets;

  const std::size_t max_attempts = 1000 * p.n_audio + 1000;
  std::size_t attempts = 0;
  while (items.size() < p.n_audio) {
    if (++attempts > max_attempts) {
      throw Error(ErrorCode::InvalidArgument,
                  "InvalidParams: cannot draw " + std::to_string(p.n_audio) +
                      " distinct tag sets from vocabulary of " +
                      std::to_string(p.tag_vocab_size));
    }
    // Partial Fisher-Yates over the vocabulary indices.
    std::vector<std::size_t> pool(p.tag_vocab_size);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::size_t want = p.ordered_events ? std::max<std::size_t>(p.tags_per_audio, 2)
                                        : p.tags_per_audio;
    if (want > pool.size()) want = pool.size();
    Tokens tags;
    for (std::size_t i = 0; i < want; ++i) {
      std::size_t j = i + draw_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      tags.push_back(tag_name(pool[i]));
    }
    Tokens key = tags;
    std::sort(key.begin(), key.end());
    if (!seen_tag_sets.insert(key).second) continue;

    CorpusItem item;
    item.audio_id = "audio" + std::to_string(items.size());
    item.tags = tags;
    for (std::size_t c = 0; c < p.captions_per_audio; ++c) {
      item.captions.push_back(p.ordered_events
                                  ? ordered_caption(tags[0], tags[1], rng)
                                  : plain_caption(tags, rng));
    }
    items.push_back(std::move(item));
  }
  return Corpus(std::move(items));
}

}  // namespace atr
