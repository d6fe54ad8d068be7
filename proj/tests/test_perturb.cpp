#include <doctest.h>

#include <algorithm>
#include <map>

#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/perturb.hpp"

using namespace atr;

namespace {

Tokens toks(std::initializer_list<const char*> words) {
  Tokens out;
  for (const char* w : words) out.emplace_back(w);
  return out;
}

bool in_word_list(const Tokens& connective, const std::vector<Tokens>& words) {
  return std::find(words.begin(), words.end(), connective) != words.end();
}

std::map<std::string, int> multiset_of(const Tokens& tokens) {
  std::map<std::string, int> counts;
  for (const std::string& t : tokens) ++counts[t];
  return counts;
}

}  // namespace

TEST_CASE("connective word sets") {
  CHECK(bat_words() == std::vector<Tokens>{{"before"}, {"after"}});
  CHECK(seq_words() == std::vector<Tokens>{{"followed", "by"},
                                           {"and", "then"},
                                           {"then"},
                                           {"before"},
                                           {"after"}});
  CHECK(sup_words() == std::vector<Tokens>{{"as"}, {"while"}});
}

TEST_CASE("find_trigger locates the leftmost connective") {
  auto m = find_trigger(toks({"a", "dog", "barks", "after", "a", "man", "speaks"}),
                        WordSet::Bat);
  REQUIRE(m.has_value());
  CHECK(m->pos == 3);
  CHECK(m->connective == Tokens{"after"});

  CHECK_FALSE(find_trigger(toks({"rain", "falls"}), WordSet::Bat).has_value());
  CHECK_FALSE(find_trigger(toks({"rain", "falls"}), WordSet::Seq).has_value());
  CHECK_FALSE(find_trigger(toks({"rain", "falls"}), WordSet::Sup).has_value());
}

TEST_CASE("multi-word connectives match before their suffixes") {
  auto m = find_trigger(toks({"x", "and", "then", "y"}), WordSet::Seq);
  REQUIRE(m.has_value());
  CHECK(m->connective == Tokens{"and", "then"});
  CHECK(m->pos == 1);
  CHECK(m->len == 2);

  auto fb = find_trigger(toks({"x", "followed", "by", "y"}), WordSet::Seq);
  REQUIRE(fb.has_value());
  CHECK(fb->connective == Tokens{"followed", "by"});
}

TEST_CASE("replace swaps before and after") {
  PerturbationSpec spec{PerturbKind::Replace, WordSet::Bat, 0};
  auto pair = replace_perturb(
      toks({"a", "dog", "barks", "after", "a", "man", "speaks"}), spec);
  REQUIRE(pair.has_value());
  CHECK(pair->perturbed ==
        toks({"a", "dog", "barks", "before", "a", "man", "speaks"}));

  CHECK_FALSE(replace_perturb(toks({"a", "dog", "barks"}), spec).has_value());
}

TEST_CASE("seq2sup replacement comes from the superposition list") {
  Tokens caption = toks({"a", "man", "speaks", "then", "a", "dog", "barks"});
  bool saw_as = false, saw_while = false;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    PerturbationSpec spec{PerturbKind::Replace, WordSet::Seq2Sup, seed};
    auto pair = replace_perturb(caption, spec);
    REQUIRE(pair.has_value());
    CHECK(pair->trigger == Tokens{"then"});
    // the connective is replaced in place; everything else is untouched
    CHECK(pair->perturbed.size() == 7);
    Tokens replacement = {pair->perturbed[3]};
    CHECK(in_word_list(replacement, sup_words()));
    if (replacement == Tokens{"as"}) saw_as = true;
    if (replacement == Tokens{"while"}) saw_while = true;
    Tokens expect = caption;
    expect[3] = pair->perturbed[3];
    CHECK(pair->perturbed == expect);
  }
  CHECK(saw_as);
  CHECK(saw_while);
}

TEST_CASE("sup2seq can produce multi-word replacements") {
  Tokens caption = toks({"rain", "falls", "while", "wind", "blows"});
  bool saw_multiword = false;
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    PerturbationSpec spec{PerturbKind::Replace, WordSet::Sup2Seq, seed};
    auto pair = replace_perturb(caption, spec);
    REQUIRE(pair.has_value());
    if (pair->perturbed.size() > caption.size()) saw_multiword = true;
    CHECK(pair->original != pair->perturbed);
  }
  CHECK(saw_multiword);
}

TEST_CASE("bat replace is an involution on single-trigger captions") {
  Tokens caption = toks({"a", "dog", "barks", "after", "a", "man", "speaks"});
  PerturbationSpec spec{PerturbKind::Replace, WordSet::Bat, 7};
  auto once = replace_perturb(caption, spec);
  REQUIRE(once.has_value());
  auto twice = replace_perturb(once->perturbed, spec);
  REQUIRE(twice.has_value());
  CHECK(twice->perturbed == caption);
}

TEST_CASE("invert swaps the clauses around the trigger") {
  PerturbationSpec spec{PerturbKind::Invert, WordSet::Seq, 0};
  auto pair = invert_perturb(
      toks({"a", "man", "speaks", "then", "a", "dog", "barks"}), spec);
  REQUIRE(pair.has_value());
  CHECK(pair->perturbed ==
        toks({"a", "dog", "barks", "then", "a", "man", "speaks"}));

  PerturbationSpec sup{PerturbKind::Invert, WordSet::Sup, 0};
  auto wind = invert_perturb(
      toks({"rain", "falls", "while", "wind", "blows"}), sup);
  REQUIRE(wind.has_value());
  CHECK(wind->perturbed == toks({"wind", "blows", "while", "rain", "falls"}));

  // empty left side
  CHECK_FALSE(invert_perturb(toks({"then", "a", "dog", "barks"}), spec)
                  .has_value());
  // empty right side
  CHECK_FALSE(invert_perturb(toks({"a", "dog", "barks", "then"}), spec)
                  .has_value());
  // symmetric clauses: the swap is a no-op, so no pair
  CHECK_FALSE(invert_perturb(toks({"x", "then", "x"}), spec).has_value());
}

TEST_CASE("invert is an involution on single-trigger captions") {
  PerturbationSpec spec{PerturbKind::Invert, WordSet::Seq, 0};
  Tokens caption = toks({"a", "man", "speaks", "then", "a", "dog", "barks"});
  auto once = invert_perturb(caption, spec);
  REQUIRE(once.has_value());
  auto twice = invert_perturb(once->perturbed, spec);
  REQUIRE(twice.has_value());
  CHECK(twice->perturbed == caption);
}

TEST_CASE("invert preserves the token multiset, replace only swaps triggers") {
  PerturbationSpec inv{PerturbKind::Invert, WordSet::Seq, 0};
  Tokens caption = toks({"the", "rain", "pours", "before", "a", "car", "horn"});
  auto pair = invert_perturb(caption, inv);
  REQUIRE(pair.has_value());
  CHECK(multiset_of(pair->original) == multiset_of(pair->perturbed));

  PerturbationSpec rep{PerturbKind::Replace, WordSet::Bat, 3};
  auto swapped = replace_perturb(caption, rep);
  REQUIRE(swapped.has_value());
  auto orig_counts = multiset_of(swapped->original);
  auto pert_counts = multiset_of(swapped->perturbed);
  orig_counts.erase("before");
  pert_counts.erase("after");
  CHECK(orig_counts == pert_counts);
}

TEST_CASE("replace and invert reject the wrong set kind") {
  PerturbationSpec bad_inv{PerturbKind::Invert, WordSet::Seq2Sup, 0};
  CHECK_THROWS_AS(invert_perturb(toks({"x", "then", "y"}), bad_inv), Error);
  PerturbationSpec bad_rep{PerturbKind::Replace, WordSet::Seq, 0};
  CHECK_THROWS_AS(replace_perturb(toks({"x", "then", "y"}), bad_rep), Error);
}

TEST_CASE("generate_pairs walks the corpus deterministically") {
  std::vector<CorpusItem> items;
  items.push_back({"a0",
                   {"speech", "dog"},
                   {{"a", "man", "speaks", "then", "a", "dog", "barks"},
                    {"a", "dog", "barks"}}});
  items.push_back({"a1",
                   {"rain"},
                   {{"rain", "falls", "while", "wind", "blows"}}});
  Corpus corpus(std::move(items));

  PerturbationSpec spec{PerturbKind::Replace, WordSet::Seq2Sup, 42};
  std::vector<PerturbationPair> pairs = generate_pairs(corpus, spec);
  REQUIRE(pairs.size() == 1);  // only the first caption has a seq trigger
  CHECK(pairs[0].caption_id == 0);
  CHECK(pairs[0].original != pairs[0].perturbed);

  std::vector<PerturbationPair> again = generate_pairs(corpus, spec);
  REQUIRE(again.size() == pairs.size());
  CHECK(again[0].perturbed == pairs[0].perturbed);

  // no-trigger corpus yields nothing
  std::vector<CorpusItem> quiet;
  quiet.push_back({"q0", {"rain"}, {{"rain", "falls"}}});
  quiet.push_back({"q1", {"wind"}, {{"wind", "blows"}}});
  CHECK(generate_pairs(Corpus(std::move(quiet)), spec).empty());
}
