#include <doctest.h>

#include <cmath>

#include "core/baseline.hpp"
#include "core/error.hpp"

using namespace atr;

namespace {

using Docs = std::vector<std::pair<std::string, Tokens>>;

}  // namespace

TEST_CASE("identical caption and query have cosine 1") {
  TfIdfIndex index = TfIdfIndex::build(
      Docs{{"a0", {"dog", "barks", "loudly"}}, {"a1", {"rain", "falls"}}});
  RankedList r = index.rank({"dog", "barks", "loudly"});
  REQUIRE(r.item_ids.size() == 2);
  CHECK(r.item_ids[0] == "a0");
  CHECK(r.scores[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("disjoint vocabularies have cosine 0") {
  TfIdfIndex index =
      TfIdfIndex::build(Docs{{"a0", {"dog", "barks"}}, {"a1", {"rain", "falls"}}});
  RankedList r = index.rank({"engine", "hums"});
  CHECK(r.scores[0] == 0.0);
  CHECK(r.scores[1] == 0.0);
  // all-zero similarities fall back to document order
  CHECK(r.item_ids == std::vector<std::string>{"a0", "a1"});
}

TEST_CASE("terms present in every document carry no weight") {
  // "the" appears in all docs: idf = ln(3/3) = 0, so it cannot break the tie
  TfIdfIndex index = TfIdfIndex::build(Docs{{"a0", {"the", "dog"}},
                                            {"a1", {"the", "cat"}},
                                            {"a2", {"the", "rain"}}});
  RankedList r = index.rank({"the", "cat"});
  CHECK(r.item_ids[0] == "a1");
  CHECK(r.scores[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.scores[1] == 0.0);
  CHECK(r.scores[2] == 0.0);
}

TEST_CASE("cosine matches a hand computation") {
  // docs: d0 = "dog dog cat", d1 = "cat bird"
  // df(dog)=1, df(cat)=2, df(bird)=1; idf: dog=ln2, cat=0, bird=ln2
  // d0 raw = (2 ln2, 0), d1 raw = (0, ln2); both unit after L2 norm.
  // query "dog bird": unit vector (1/sqrt2, 1/sqrt2) over {dog, bird}
  TfIdfIndex index = TfIdfIndex::build(
      Docs{{"d0", {"dog", "dog", "cat"}}, {"d1", {"cat", "bird"}}});
  RankedList r = index.rank({"dog", "bird"});
  CHECK(r.scores[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.scores[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // equal similarity: document order breaks the tie
  CHECK(r.item_ids == std::vector<std::string>{"d0", "d1"});
}

TEST_CASE("ranking is by descending similarity") {
  TfIdfIndex index = TfIdfIndex::build(Docs{{"a0", {"wind", "howls"}},
                                            {"a1", {"dog", "barks", "wind"}},
                                            {"a2", {"dog", "barks"}}});
  RankedList r = index.rank({"dog", "barks"});
  CHECK(r.item_ids[0] == "a2");
  CHECK(r.item_ids[1] == "a1");
  CHECK(r.item_ids[2] == "a0");
  for (std::size_t i = 1; i < r.scores.size(); ++i) {
    CHECK(r.scores[i - 1] >= r.scores[i]);
  }
}

TEST_CASE("empty index is rejected, empty query degrades to zeros") {
  CHECK_THROWS_AS(TfIdfIndex::build(Docs{}), Error);
  TfIdfIndex index = TfIdfIndex::build(Docs{{"a0", {"dog"}}});
  RankedList r = index.rank({});
  REQUIRE(r.scores.size() == 1);
  CHECK(r.scores[0] == 0.0);
}

TEST_CASE("baseline comparison runs both pipelines on one corpus") {
  SynthParams p;
  p.n_audio = 20;
  p.tag_vocab_size = 12;
  p.tags_per_audio = 3;
  p.captions_per_audio = 3;
  p.seed = 7;
  Corpus corpus = synth_corpus(p);
  TagBigramLM lm = TagBigramLM::train(corpus, 0.5, 0.1);
  BaselineComparison cmp = compare_baseline(corpus, lm, 3, 30, {1, 5});

  CHECK(cmp.generate_compare.mode == "t2a_gencompare");
  CHECK(cmp.loss_based.mode == "t2a");
  CHECK(cmp.generate_compare.n_queries == corpus.num_captions());
  CHECK(cmp.loss_based.n_queries == corpus.num_captions());
  for (const auto& eval : {cmp.generate_compare, cmp.loss_based}) {
    REQUIRE(eval.recall_at.count(1) == 1);
    REQUIRE(eval.recall_at.count(5) == 1);
    CHECK(eval.recall_at.at(1) >= 0.0);
    CHECK(eval.recall_at.at(1) <= eval.recall_at.at(5));
    CHECK(eval.recall_at.at(5) <= 1.0);
  }
  // CE ranking should beat generate-then-compare on this corpus
  CHECK(cmp.loss_based.recall_at.at(1) >= cmp.generate_compare.recall_at.at(1));
}
