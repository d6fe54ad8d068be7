#include "perturb.hpp"

#include <algorithm>
#include <random>

#include "error.hpp"
#include "rng.hpp"

namespace atr {

const std::vector<Tokens>& bat_words() {
  static const std::vector<Tokens> words = {{"before"}, {"after"}};
  return words;
}

const std::vector<Tokens>& seq_words() {
  static const std::vector<Tokens> words = {
      {"followed", "by"}, {"and", "then"}, {"then"}, {"before"}, {"after"}};
  return words;
}

const std::vector<Tokens>& sup_words() {
  static const std::vector<Tokens> words = {{"as"}, {"while"}};
  return words;
}

namespace {

const std::vector<Tokens>& trigger_words(WordSet set) {
  switch (set) {
    case WordSet::Bat: return bat_words();
    case WordSet::Seq2Sup: return seq_words();
    case WordSet::Sup2Seq: return sup_words();
    case WordSet::Seq: return seq_words();
    case WordSet::Sup: return sup_words();
  }
  throw Error(ErrorCode::InvalidArgument, "bad word set");
}

bool matches_at(const Tokens& caption, std::size_t pos, const Tokens& conn) {
  if (pos + conn.size() > caption.size()) return false;
  return std::equal(conn.begin(), conn.end(), caption.begin() + pos);
}

std::vector<Tokens> replacement_candidates(const Tokens& trigger, WordSet set) {
  switch (set) {
    case WordSet::Bat:
      return trigger == Tokens{"before"} ? std::vector<Tokens>{{"after"}}
                                         : std::vector<Tokens>{{"before"}};
    case WordSet::Seq2Sup: return sup_words();
    case WordSet::Sup2Seq: return seq_words();
    default:
      throw Error(ErrorCode::InvalidArgument,
                  "replace supports sets bat, seq2sup, sup2seq");
  }
}

std::optional<PerturbationPair> replace_with_rng(const Tokens& caption,
                                                 const PerturbationSpec& spec,
                                                 std::mt19937_64& rng) {
  auto match = find_trigger(caption, spec.set);
  if (!match) return std::nullopt;

  std::vector<Tokens> candidates = replacement_candidates(match->connective, spec.set);
  const Tokens& replacement =
      candidates.size() == 1 ? candidates[0]
                             : candidates[draw_below(rng, candidates.size())];

  Tokens perturbed(caption.begin(), caption.begin() + match->pos);
  perturbed.insert(perturbed.end(), replacement.begin(), replacement.end());
  perturbed.insert(perturbed.end(), caption.begin() + match->pos + match->len,
                   caption.end());
  if (perturbed == caption) return std::nullopt;

  return PerturbationPair{0,          caption,   std::move(perturbed),
                          match->connective, spec.kind, spec.set};
}

}  // namespace

std::optional<TriggerMatch> find_trigger(const Tokens& caption, WordSet set) {
  // Longest connective first so "and then" wins over "then".
  std::vector<Tokens> ordered = trigger_words(set);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Tokens& a, const Tokens& b) {
                     return a.size() > b.size();
                   });
  for (std::size_t pos = 0; pos < caption.size(); ++pos) {
    for (const Tokens& conn : ordered) {
      if (matches_at(caption, pos, conn)) {
        return TriggerMatch{pos, conn.size(), conn};
      }
    }
  }
  return std::nullopt;
}

std::optional<PerturbationPair> replace_perturb(const Tokens& caption,
                                                const PerturbationSpec& spec) {
  std::mt19937_64 rng(spec.rng_seed);
  return replace_with_rng(caption, spec, rng);
}

std::optional<PerturbationPair> invert_perturb(const Tokens& caption,
                                               const PerturbationSpec& spec) {
  if (spec.set == WordSet::Seq2Sup || spec.set == WordSet::Sup2Seq) {
    throw Error(ErrorCode::InvalidArgument,
                "invert supports sets bat, seq, sup");
  }
  auto match = find_trigger(caption, spec.set);
  if (!match) return std::nullopt;

  Tokens before(caption.begin(), caption.begin() + match->pos);
  Tokens after(caption.begin() + match->pos + match->len, caption.end());
  if (before.empty() || after.empty()) return std::nullopt;

  Tokens perturbed = after;
  perturbed.insert(perturbed.end(), match->connective.begin(),
                   match->connective.end());
  perturbed.insert(perturbed.end(), before.begin(), before.end());
  if (perturbed == caption) return std::nullopt;

  return PerturbationPair{0,          caption,   std::move(perturbed),
                          match->connective, spec.kind, spec.set};
}

std::vector<PerturbationPair> generate_pairs(const Corpus& corpus,
                                             const PerturbationSpec& spec) {
  std::mt19937_64 rng(spec.rng_seed);
  std::vector<PerturbationPair> pairs;
  for (const CaptionRef& cap : corpus.caption_index()) {
    std::optional<PerturbationPair> pair =
        spec.kind == PerturbKind::Replace
            ? replace_with_rng(cap.tokens, spec, rng)
            : invert_perturb(cap.tokens, spec);
    if (pair) {
      pair->caption_id = cap.caption_id;
      pairs.push_back(std::move(*pair));
    }
  }
  return pairs;
}

std::string to_string(PerturbKind kind) {
  return kind == PerturbKind::Replace ? "replace" : "invert";
}

std::string to_string(WordSet set) {
  switch (set) {
    case WordSet::Bat: return "bat";
    case WordSet::Seq2Sup: return "seq2sup";
    case WordSet::Sup2Seq: return "sup2seq";
    case WordSet::Seq: return "seq";
    case WordSet::Sup: return "sup";
  }
  return "?";
}

PerturbKind perturb_kind_from_string(const std::string& s) {
  if (s == "replace") return PerturbKind::Replace;
  if (s == "invert") return PerturbKind::Invert;
  throw Error(ErrorCode::InvalidArgument, "unknown perturbation kind: " + s);
}

WordSet word_set_from_string(const std::string& s) {
  if (s == "bat") return WordSet::Bat;
  if (s == "seq2sup") return WordSet::Seq2Sup;
  if (s == "sup2seq") return WordSet::Sup2Seq;
  if (s == "seq") return WordSet::Seq;
  if (s == "sup") return WordSet::Sup;
  throw Error(ErrorCode::InvalidArgument, "unknown word set: " + s);
}

}  // namespace atr
