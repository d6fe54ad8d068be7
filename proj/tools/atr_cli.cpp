// Command-line front end; everything goes through the C API in atr.h.
//
// Exit codes: 0 success, 1 usage error, 2 data/model/file error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atr.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Fail {
  int code;
};

[[noreturn]] void die(const std::string& message, int code = kExitData) {
  std::cerr << "error: " << message << "\n";
  throw Fail{code};
}

void check(atr_status status) {
  if (status != ATR_OK) die(atr_last_error());
}

using CorpusPtr = std::unique_ptr<atr_corpus, decltype(&atr_corpus_free)>;
using MatrixPtr = std::unique_ptr<atr_matrix, decltype(&atr_matrix_free)>;
using ModelPtr = std::unique_ptr<atr_model, decltype(&atr_model_free)>;
using ScorerPtr = std::unique_ptr<atr_scorer, decltype(&atr_scorer_free)>;
using RankingPtr = std::unique_ptr<atr_ranking, decltype(&atr_ranking_free)>;

CorpusPtr load_corpus(const std::string& path) {
  atr_corpus* corpus = nullptr;
  check(atr_corpus_load(path.c_str(), &corpus));
  return CorpusPtr(corpus, atr_corpus_free);
}

MatrixPtr read_matrix(const std::string& path) {
  atr_matrix* matrix = nullptr;
  check(atr_matrix_read(path.c_str(), &matrix));
  return MatrixPtr(matrix, atr_matrix_free);
}

ModelPtr load_model(const std::string& path) {
  atr_model* model = nullptr;
  check(atr_model_load(path.c_str(), &model));
  return ModelPtr(model, atr_model_free);
}

// "mock:<name>" or a toy LM model path.
ScorerPtr resolve_scorer(const std::string& spec, ModelPtr& keep_model) {
  atr_scorer* scorer = nullptr;
  if (spec.rfind("mock:", 0) == 0) {
    check(atr_scorer_mock(spec.substr(5).c_str(), &scorer));
  } else {
    keep_model = load_model(spec);
    check(atr_model_scorer(keep_model.get(), &scorer));
  }
  return ScorerPtr(scorer, atr_scorer_free);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) die("cannot write " + out_path);
  out << text;
  if (!out) die("write failed: " + out_path);
}

std::string take_string(char* owned) {
  std::string s(owned ? owned : "");
  atr_string_free(owned);
  return s;
}

int run(int argc, char** argv) {
  CLI::App app{"Loss-based audio-text retrieval toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  unsigned threads = 1;
  app.add_option("--seed", seed, "global RNG seed")->capture_default_str();
  app.add_option("--threads", threads, "scoring parallelism")
      ->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  std::size_t n_audio = 50, vocab = 20, tags_per = 5, caps_per = 5;
  bool ordered = false;
  std::string synth_out;
  synth->add_option("--n-audio", n_audio)->capture_default_str();
  synth->add_option("--tag-vocab", vocab)->capture_default_str();
  synth->add_option("--tags-per-audio", tags_per)->capture_default_str();
  synth->add_option("--captions-per-audio", caps_per)->capture_default_str();
  synth->add_flag("--ordered-events", ordered,
                  "captions describe two ordered events");
  synth->add_option("--out", synth_out, "output corpus JSONL")->required();

  // score
  auto* score = app.add_subcommand("score", "build a loss matrix");
  std::string score_corpus, score_scorer, score_out;
  score->add_option("--corpus", score_corpus)->required();
  score->add_option("--scorer", score_scorer,
                    "toy LM model path or mock:<constant|overlap>")
      ->required();
  score->add_option("--out", score_out, "output CSV")->required();

  // retrieve
  auto* retrieve = app.add_subcommand("retrieve", "rank one query");
  std::string r_matrix, r_mode = "t2a", r_scale = "raw", r_query;
  std::size_t r_top = 0;
  retrieve->add_option("--matrix", r_matrix)->required();
  retrieve->add_option("--mode", r_mode, "t2a or a2t")
      ->check(CLI::IsMember({"t2a", "a2t"}));
  retrieve->add_option("--scale", r_scale, "raw or minmax")
      ->check(CLI::IsMember({"raw", "minmax"}));
  retrieve->add_option("--query", r_query)->required();
  retrieve->add_option("--top", r_top, "print only the first N rows");

  // eval
  auto* eval = app.add_subcommand("eval", "recall@k evaluation");
  std::string e_matrix, e_corpus, e_mode = "t2a", e_scale = "raw", e_out;
  std::vector<int> e_ks = {1, 5, 10};
  eval->add_option("--matrix", e_matrix)->required();
  eval->add_option("--corpus", e_corpus)->required();
  eval->add_option("--mode", e_mode)->check(CLI::IsMember({"t2a", "a2t"}));
  eval->add_option("--scale", e_scale)
      ->check(CLI::IsMember({"raw", "minmax"}));
  eval->add_option("--k", e_ks, "k values")->delimiter(',');
  eval->add_option("--out", e_out, "write JSON report here");

  // perturb
  auto* perturb = app.add_subcommand("perturb", "generate perturbed captions");
  std::string p_corpus, p_kind, p_set, p_out;
  perturb->add_option("--corpus", p_corpus)->required();
  perturb->add_option("--kind", p_kind)
      ->required()
      ->check(CLI::IsMember({"replace", "invert"}));
  perturb->add_option("--set", p_set)
      ->required()
      ->check(CLI::IsMember({"bat", "seq2sup", "sup2seq", "seq", "sup"}));
  perturb->add_option("--out", p_out, "output pairs JSONL");

  // battest
  auto* battest = app.add_subcommand(
      "battest", "original-vs-perturbed preference accuracy");
  std::string b_corpus, b_scorer, b_pairs, b_out;
  battest->add_option("--corpus", b_corpus)->required();
  battest->add_option("--scorer", b_scorer)->required();
  battest->add_option("--pairs", b_pairs)->required();
  battest->add_option("--out", b_out, "write JSON report here");

  // toylm
  auto* toylm = app.add_subcommand("toylm", "toy language model");
  toylm->require_subcommand(1);
  auto* train = toylm->add_subcommand("train");
  std::string t_corpus, t_out;
  double t_lambda = 0.5, t_smooth = 0.1;
  train->add_option("--corpus", t_corpus)->required();
  train->add_option("--lambda", t_lambda)->capture_default_str();
  train->add_option("--smooth-k", t_smooth)->capture_default_str();
  train->add_option("--out", t_out, "model file")->required();
  auto* generate = toylm->add_subcommand("generate");
  std::string g_model, g_corpus, g_audio;
  std::size_t g_beam = 3, g_max_len = 30;
  generate->add_option("--model", g_model)->required();
  generate->add_option("--corpus", g_corpus)->required();
  generate->add_option("--audio-id", g_audio)->required();
  generate->add_option("--beam", g_beam)->capture_default_str();
  generate->add_option("--max-len", g_max_len)->capture_default_str();

  // baseline
  auto* baseline = app.add_subcommand(
      "baseline", "generate-then-compare vs loss-based T2A");
  std::string bl_corpus, bl_model, bl_out;
  std::vector<int> bl_ks = {1, 5, 10};
  std::size_t bl_beam = 3, bl_max_len = 30;
  baseline->add_option("--corpus", bl_corpus)->required();
  baseline->add_option("--model", bl_model)->required();
  baseline->add_option("--k", bl_ks)->delimiter(',');
  baseline->add_option("--beam", bl_beam)->capture_default_str();
  baseline->add_option("--max-len", bl_max_len)->capture_default_str();
  baseline->add_option("--out", bl_out, "write JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (synth->parsed()) {
    atr_corpus* corpus = nullptr;
    check(atr_corpus_synth(n_audio, vocab, tags_per, caps_per, seed,
                           ordered ? 1 : 0, &corpus));
    CorpusPtr owner(corpus, atr_corpus_free);
    check(atr_corpus_save(corpus, synth_out.c_str()));
    std::cout << "wrote " << atr_corpus_num_items(corpus) << " items, "
              << atr_corpus_num_captions(corpus) << " captions to "
              << synth_out << "\n";
  } else if (score->parsed()) {
    CorpusPtr corpus = load_corpus(score_corpus);
    ModelPtr model(nullptr, atr_model_free);
    ScorerPtr scorer = resolve_scorer(score_scorer, model);
    atr_matrix* matrix = nullptr;
    check(atr_matrix_build(corpus.get(), scorer.get(), threads, &matrix));
    MatrixPtr owner(matrix, atr_matrix_free);
    check(atr_matrix_write(matrix, score_out.c_str()));
    std::cout << "wrote " << atr_matrix_rows(matrix) << "x"
              << atr_matrix_cols(matrix) << " matrix to " << score_out << "\n";
  } else if (retrieve->parsed()) {
    MatrixPtr matrix = read_matrix(r_matrix);
    atr_ranking* ranking = nullptr;
    check(atr_rank(matrix.get(), r_mode == "t2a" ? ATR_MODE_T2A : ATR_MODE_A2T,
                   r_scale == "minmax" ? ATR_SCALE_MINMAX : ATR_SCALE_RAW,
                   r_query.c_str(), &ranking));
    RankingPtr owner(ranking, atr_ranking_free);
    std::size_t n = atr_ranking_size(ranking);
    if (r_top > 0 && r_top < n) n = r_top;
    std::printf("%-6s %-24s %s\n", "rank", "item", "score");
    for (std::size_t i = 0; i < n; ++i) {
      std::printf("%-6zu %-24s %.12g\n", i + 1, atr_ranking_item(ranking, i),
                  atr_ranking_score(ranking, i));
    }
  } else if (eval->parsed()) {
    MatrixPtr matrix = read_matrix(e_matrix);
    CorpusPtr corpus = load_corpus(e_corpus);
    char* json = nullptr;
    check(atr_eval(matrix.get(), corpus.get(),
                   e_mode == "t2a" ? ATR_MODE_T2A : ATR_MODE_A2T,
                   e_scale == "minmax" ? ATR_SCALE_MINMAX : ATR_SCALE_RAW,
                   e_ks.data(), e_ks.size(), seed, &json));
    emit(take_string(json), e_out);
  } else if (perturb->parsed()) {
    CorpusPtr corpus = load_corpus(p_corpus);
    char* jsonl = nullptr;
    check(atr_perturb(corpus.get(), p_kind.c_str(), p_set.c_str(), seed,
                      &jsonl));
    emit(take_string(jsonl), p_out);
  } else if (battest->parsed()) {
    CorpusPtr corpus = load_corpus(b_corpus);
    ModelPtr model(nullptr, atr_model_free);
    ScorerPtr scorer = resolve_scorer(b_scorer, model);
    char* json = nullptr;
    check(atr_battest(corpus.get(), scorer.get(), b_pairs.c_str(), &json));
    emit(take_string(json), b_out);
  } else if (train->parsed()) {
    CorpusPtr corpus = load_corpus(t_corpus);
    atr_model* model = nullptr;
    check(atr_model_train(corpus.get(), t_lambda, t_smooth, &model));
    ModelPtr owner(model, atr_model_free);
    check(atr_model_save(model, t_out.c_str()));
    std::cout << "wrote model to " << t_out << "\n";
  } else if (generate->parsed()) {
    ModelPtr model = load_model(g_model);
    CorpusPtr corpus = load_corpus(g_corpus);
    char* caption = nullptr;
    check(atr_model_generate(model.get(), corpus.get(), g_audio.c_str(),
                             g_beam, g_max_len, &caption));
    std::cout << take_string(caption) << "\n";
  } else if (baseline->parsed()) {
    CorpusPtr corpus = load_corpus(bl_corpus);
    ModelPtr model = load_model(bl_model);
    char* json = nullptr;
    check(atr_baseline_compare(corpus.get(), model.get(), bl_beam, bl_max_len,
                               bl_ks.data(), bl_ks.size(), &json));
    emit(take_string(json), bl_out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Fail& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
