#include "battest.hpp"

#include "error.hpp"

namespace atr {

BatReport bat_accuracy(const Scorer& scorer, const Corpus& corpus,
                       const std::vector<PerturbationPair>& pairs) {
  if (pairs.empty()) {
    throw Error(ErrorCode::InvalidArgument, "EmptyPairSet");
  }

  BatReport report;
  report.kind = pairs.front().kind;
  report.set = pairs.front().set;
  report.n_pairs = pairs.size();

  for (const PerturbationPair& pair : pairs) {
    if (pair.caption_id >= corpus.num_captions()) {
      throw Error(ErrorCode::NotFound,
                  "UnknownCaption: id " + std::to_string(pair.caption_id));
    }
    const CorpusItem& item = corpus.item_of_caption(pair.caption_id);
    const double ce_original = scorer.score(item.tags, pair.original);
    const double ce_perturbed = scorer.score(item.tags, pair.perturbed);
    if (ce_original < ce_perturbed) {
      ++report.n_correct;
    } else if (ce_original == ce_perturbed) {
      ++report.n_ties;
    }
  }
  report.accuracy =
      (static_cast<double>(report.n_correct) + 0.5 * report.n_ties) /
      static_cast<double>(report.n_pairs);
  return report;
}

}  // namespace atr
