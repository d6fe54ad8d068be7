#pragma once

#include <string>
#include <vector>

#include "corpus.hpp"
#include "lossmatrix.hpp"
#include "perturb.hpp"

namespace atr {

struct BatReport {
  PerturbKind kind;
  WordSet set;
  std::size_t n_pairs = 0;
  std::size_t n_correct = 0;
  std::size_t n_ties = 0;
  double accuracy = 0.0;  // (n_correct + 0.5 * n_ties) / n_pairs
};

// A pair counts correct iff CE(audio, original) < CE(audio, perturbed);
// exact equality is a tie worth 0.5. Both captions are scored against the
// pair's own audio with raw CE.
BatReport bat_accuracy(const Scorer& scorer, const Corpus& corpus,
                       const std::vector<PerturbationPair>& pairs);

}  // namespace atr
