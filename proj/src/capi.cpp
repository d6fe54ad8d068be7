#include "atr.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/baseline.hpp"
#include "core/battest.hpp"
#include "core/corpus.hpp"
#include "core/error.hpp"
#include "core/lossmatrix.hpp"
#include "core/perturb.hpp"
#include "core/retrieval.hpp"
#include "core/scorers.hpp"
#include "core/toylm.hpp"

struct atr_corpus {
  atr::Corpus impl;
};
struct atr_matrix {
  atr::LossMatrix impl;
};
struct atr_model {
  std::shared_ptr<const atr::TagBigramLM> impl;
};
struct atr_scorer {
  std::shared_ptr<const atr::Scorer> impl;
};
struct atr_ranking {
  atr::RankedList impl;
};

namespace {

thread_local std::string g_last_error;

atr_status status_of(const atr::Error& e) {
  switch (e.code()) {
    case atr::ErrorCode::InvalidArgument: return ATR_ERR_INVALID_ARG;
    case atr::ErrorCode::Parse: return ATR_ERR_PARSE;
    case atr::ErrorCode::NotFound: return ATR_ERR_NOT_FOUND;
    case atr::ErrorCode::Data: return ATR_ERR_DATA;
    case atr::ErrorCode::Io: return ATR_ERR_IO;
  }
  return ATR_ERR_INVALID_ARG;
}

template <typename Fn>
atr_status guarded(Fn&& fn) {
  try {
    fn();
    return ATR_OK;
  } catch (const atr::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ATR_ERR_INVALID_ARG;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

atr_status require(bool ok, const char* what) {
  if (!ok) {
    g_last_error = what;
    return ATR_ERR_INVALID_ARG;
  }
  return ATR_OK;
}

std::vector<atr::PerturbationPair> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw atr::Error(atr::ErrorCode::NotFound, "cannot open pairs file: " + path);
  }
  std::vector<atr::PerturbationPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      nlohmann::json rec = nlohmann::json::parse(line);
      atr::PerturbationPair pair;
      pair.caption_id = rec.at("caption_id").get<std::size_t>();
      pair.original = atr::normalize_caption(rec.at("original").get<std::string>());
      pair.perturbed = atr::normalize_caption(rec.at("perturbed").get<std::string>());
      pair.trigger = atr::normalize_caption(rec.at("trigger").get<std::string>());
      pair.kind = atr::perturb_kind_from_string(rec.at("kind").get<std::string>());
      pair.set = atr::word_set_from_string(rec.at("set").get<std::string>());
      pairs.push_back(std::move(pair));
    } catch (const nlohmann::json::exception& e) {
      throw atr::Error(atr::ErrorCode::Parse,
                       path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return pairs;
}

nlohmann::json eval_to_json(const atr::RetrievalEval& eval) {
  nlohmann::json ks = nlohmann::json::object();
  for (const auto& [k, v] : eval.recall_at) ks[std::to_string(k)] = v;
  return {{"mode", eval.mode}, {"ks", ks}, {"n_queries", eval.n_queries}};
}

}  // namespace

extern "C" {

const char* atr_last_error(void) { return g_last_error.c_str(); }

void atr_string_free(char* s) { std::free(s); }

atr_status atr_corpus_load(const char* path, atr_corpus** out) {
  if (atr_status s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new atr_corpus{atr::Corpus::load(path)}; });
}

atr_status atr_corpus_save(const atr_corpus* corpus, const char* path) {
  if (atr_status s = require(corpus && path, "null argument")) return s;
  return guarded([&] { corpus->impl.save(path); });
}

atr_status atr_corpus_synth(size_t n_audio, size_t tag_vocab_size,
                            size_t tags_per_audio, size_t captions_per_audio,
                            uint64_t seed, int ordered_events,
                            atr_corpus** out) {
  if (atr_status s = require(out != nullptr, "null argument")) return s;
  return guarded([&] {
    atr::SynthParams params;
    params.n_audio = n_audio;
    params.tag_vocab_size = tag_vocab_size;
    params.tags_per_audio = tags_per_audio;
    params.captions_per_audio = captions_per_audio;
    params.seed = seed;
    params.ordered_events = ordered_events != 0;
    *out = new atr_corpus{atr::synth_corpus(params)};
  });
}

size_t atr_corpus_num_items(const atr_corpus* corpus) {
  return corpus ? corpus->impl.num_items() : 0;
}

size_t atr_corpus_num_captions(const atr_corpus* corpus) {
  return corpus ? corpus->impl.num_captions() : 0;
}

void atr_corpus_free(atr_corpus* corpus) { delete corpus; }

atr_status atr_scorer_mock(const char* name, atr_scorer** out) {
  if (atr_status s = require(name && out, "null argument")) return s;
  return guarded([&] {
    std::unique_ptr<atr::Scorer> scorer = atr::make_mock_scorer(name);
    if (!scorer) {
      throw atr::Error(atr::ErrorCode::NotFound,
                       std::string("unknown mock scorer: ") + name);
    }
    *out = new atr_scorer{std::move(scorer)};
  });
}

void atr_scorer_free(atr_scorer* scorer) { delete scorer; }

atr_status atr_model_train(const atr_corpus* corpus, double lambda,
                           double smooth_k, atr_model** out) {
  if (atr_status s = require(corpus && out, "null argument")) return s;
  return guarded([&] {
    *out = new atr_model{std::make_shared<atr::TagBigramLM>(
        atr::TagBigramLM::train(corpus->impl, lambda, smooth_k))};
  });
}

atr_status atr_model_load(const char* path, atr_model** out) {
  if (atr_status s = require(path && out, "null argument")) return s;
  return guarded([&] {
    *out = new atr_model{
        std::make_shared<atr::TagBigramLM>(atr::TagBigramLM::load(path))};
  });
}

atr_status atr_model_save(const atr_model* model, const char* path) {
  if (atr_status s = require(model && path, "null argument")) return s;
  return guarded([&] { model->impl->save(path); });
}

atr_status atr_model_scorer(const atr_model* model, atr_scorer** out) {
  if (atr_status s = require(model && out, "null argument")) return s;
  *out = new atr_scorer{model->impl};
  return ATR_OK;
}

atr_status atr_model_generate(const atr_model* model, const atr_corpus* corpus,
                              const char* audio_id, size_t beam_width,
                              size_t max_len, char** out_caption) {
  if (atr_status s = require(model && corpus && audio_id && out_caption,
                             "null argument")) {
    return s;
  }
  return guarded([&] {
    std::size_t idx = corpus->impl.item_index_of(audio_id);
    atr::Tokens caption = model->impl->generate(
        corpus->impl.items()[idx].tags, beam_width, max_len);
    *out_caption = dup_string(atr::join_tokens(caption));
  });
}

void atr_model_free(atr_model* model) { delete model; }

atr_status atr_matrix_build(const atr_corpus* corpus, const atr_scorer* scorer,
                            unsigned threads, atr_matrix** out) {
  if (atr_status s = require(corpus && scorer && out, "null argument")) return s;
  return guarded([&] {
    *out = new atr_matrix{
        atr::build_loss_matrix(corpus->impl, *scorer->impl, threads)};
  });
}

atr_status atr_matrix_read(const char* path, atr_matrix** out) {
  if (atr_status s = require(path && out, "null argument")) return s;
  return guarded([&] { *out = new atr_matrix{atr::LossMatrix::read(path)}; });
}

atr_status atr_matrix_write(const atr_matrix* matrix, const char* path) {
  if (atr_status s = require(matrix && path, "null argument")) return s;
  return guarded([&] { matrix->impl.write(path); });
}

atr_status atr_matrix_minmax_scaled(const atr_matrix* matrix,
                                    atr_matrix** out) {
  if (atr_status s = require(matrix && out, "null argument")) return s;
  return guarded(
      [&] { *out = new atr_matrix{atr::minmax_scale_columns(matrix->impl)}; });
}

size_t atr_matrix_rows(const atr_matrix* matrix) {
  return matrix ? matrix->impl.rows() : 0;
}

size_t atr_matrix_cols(const atr_matrix* matrix) {
  return matrix ? matrix->impl.cols() : 0;
}

void atr_matrix_free(atr_matrix* matrix) { delete matrix; }

atr_status atr_rank(const atr_matrix* matrix, atr_mode mode, atr_scale scale,
                    const char* query_id, atr_ranking** out) {
  if (atr_status s = require(matrix && query_id && out, "null argument")) {
    return s;
  }
  return guarded([&] {
    if (mode == ATR_MODE_T2A) {
      *out = new atr_ranking{atr::t2a_rank(matrix->impl, query_id)};
    } else {
      *out = new atr_ranking{atr::a2t_rank(
          matrix->impl, query_id,
          scale == ATR_SCALE_MINMAX ? atr::A2tScale::MinMax : atr::A2tScale::Raw)};
    }
  });
}

size_t atr_ranking_size(const atr_ranking* ranking) {
  return ranking ? ranking->impl.item_ids.size() : 0;
}

const char* atr_ranking_item(const atr_ranking* ranking, size_t index) {
  if (!ranking || index >= ranking->impl.item_ids.size()) return nullptr;
  return ranking->impl.item_ids[index].c_str();
}

double atr_ranking_score(const atr_ranking* ranking, size_t index) {
  if (!ranking || index >= ranking->impl.scores.size()) return 0.0;
  return ranking->impl.scores[index];
}

void atr_ranking_free(atr_ranking* ranking) { delete ranking; }

atr_status atr_eval(const atr_matrix* matrix, const atr_corpus* corpus,
                    atr_mode mode, atr_scale scale, const int* ks, size_t n_ks,
                    uint64_t seed, char** out_json) {
  if (atr_status s = require(matrix && corpus && ks && n_ks > 0 && out_json,
                             "null argument")) {
    return s;
  }
  return guarded([&] {
    std::vector<int> k_list(ks, ks + n_ks);
    atr::RetrievalEval eval = atr::evaluate(
        matrix->impl, corpus->impl,
        mode == ATR_MODE_T2A ? atr::RetrievalMode::T2A : atr::RetrievalMode::A2T,
        scale == ATR_SCALE_MINMAX ? atr::A2tScale::MinMax : atr::A2tScale::Raw,
        k_list);
    nlohmann::json report = eval_to_json(eval);
    report["scale"] = scale == ATR_SCALE_MINMAX ? "minmax" : "raw";
    report["matrix_shape"] = {matrix->impl.rows(), matrix->impl.cols()};
    report["seed"] = seed;
    *out_json = dup_string(report.dump(2));
  });
}

atr_status atr_perturb(const atr_corpus* corpus, const char* kind,
                       const char* set, uint64_t seed, char** out_jsonl) {
  if (atr_status s = require(corpus && kind && set && out_jsonl,
                             "null argument")) {
    return s;
  }
  return guarded([&] {
    atr::PerturbationSpec spec;
    spec.kind = atr::perturb_kind_from_string(kind);
    spec.set = atr::word_set_from_string(set);
    spec.rng_seed = seed;
    std::string out;
    for (const atr::PerturbationPair& pair :
         atr::generate_pairs(corpus->impl, spec)) {
      nlohmann::json rec = {{"caption_id", pair.caption_id},
                            {"original", atr::join_tokens(pair.original)},
                            {"perturbed", atr::join_tokens(pair.perturbed)},
                            {"trigger", atr::join_tokens(pair.trigger)},
                            {"kind", atr::to_string(pair.kind)},
                            {"set", atr::to_string(pair.set)}};
      out += rec.dump();
      out += "\n";
    }
    *out_jsonl = dup_string(out);
  });
}

atr_status atr_battest(const atr_corpus* corpus, const atr_scorer* scorer,
                       const char* pairs_path, char** out_json) {
  if (atr_status s = require(corpus && scorer && pairs_path && out_json,
                             "null argument")) {
    return s;
  }
  return guarded([&] {
    std::vector<atr::PerturbationPair> pairs = read_pairs(pairs_path);
    atr::BatReport report =
        atr::bat_accuracy(*scorer->impl, corpus->impl, pairs);
    nlohmann::json out = {{"kind", atr::to_string(report.kind)},
                          {"set", atr::to_string(report.set)},
                          {"n_pairs", report.n_pairs},
                          {"n_correct", report.n_correct},
                          {"n_ties", report.n_ties},
                          {"accuracy", report.accuracy}};
    *out_json = dup_string(out.dump(2));
  });
}

atr_status atr_baseline_compare(const atr_corpus* corpus,
                                const atr_model* model, size_t beam_width,
                                size_t max_len, const int* ks, size_t n_ks,
                                char** out_json) {
  if (atr_status s = require(corpus && model && ks && n_ks > 0 && out_json,
                             "null argument")) {
    return s;
  }
  return guarded([&] {
    std::vector<int> k_list(ks, ks + n_ks);
    atr::BaselineComparison cmp = atr::compare_baseline(
        corpus->impl, *model->impl, beam_width, max_len, k_list);
    nlohmann::json out = {
        {"generate_compare", eval_to_json(cmp.generate_compare)},
        {"loss_based", eval_to_json(cmp.loss_based)}};
    *out_json = dup_string(out.dump(2));
  });
}

}  // extern "C"
