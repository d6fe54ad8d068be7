#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corpus.hpp"

namespace atr {

enum class PerturbKind { Replace, Invert };

// Replace sets: Bat, Seq2Sup, Sup2Seq. Invert sets: Bat, Seq, Sup.
enum class WordSet { Bat, Seq2Sup, Sup2Seq, Seq, Sup };

struct PerturbationSpec {
  PerturbKind kind = PerturbKind::Replace;
  WordSet set = WordSet::Bat;
  std::uint64_t rng_seed = 0;
};

// Connectives, multi-word entries as token sequences. Exposed so tests can
// pin the exact word lists.
const std::vector<Tokens>& bat_words();      // before, after
const std::vector<Tokens>& seq_words();      // followed by, and then, then, before, after
const std::vector<Tokens>& sup_words();      // as, while

struct TriggerMatch {
  std::size_t pos;     // token offset of the connective
  std::size_t len;     // connective length in tokens
  Tokens connective;
};

struct PerturbationPair {
  std::size_t caption_id = 0;  // filled by generate_pairs
  Tokens original;
  Tokens perturbed;
  Tokens trigger;
  PerturbKind kind;
  WordSet set;
};

// Leftmost occurrence of any connective in the set's trigger list;
// multi-word connectives match before their single-word suffixes.
std::optional<TriggerMatch> find_trigger(const Tokens& caption, WordSet set);

// Substitutes the first trigger; the replacement is drawn uniformly from
// the target list when there is more than one candidate.
std::optional<PerturbationPair> replace_perturb(const Tokens& caption,
                                                const PerturbationSpec& spec);

// Swaps the clauses around the first trigger. None when a side is empty
// or the swap is a no-op.
std::optional<PerturbationPair> invert_perturb(const Tokens& caption,
                                               const PerturbationSpec& spec);

// Applies the spec to every caption in flattened corpus order; captions
// without triggers are skipped. Deterministic for a fixed seed.
std::vector<PerturbationPair> generate_pairs(const Corpus& corpus,
                                             const PerturbationSpec& spec);

std::string to_string(PerturbKind kind);
std::string to_string(WordSet set);
PerturbKind perturb_kind_from_string(const std::string& s);
WordSet word_set_from_string(const std::string& s);

}  // namespace atr
