/* C interface to the audio-text retrieval library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return ATR_OK on success; on failure they return an error code
 * and leave a human-readable message in atr_last_error() (thread-local).
 * Strings returned through char** are owned by the caller and must be
 * released with atr_string_free().
 */
#ifndef ATR_H
#define ATR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum atr_status {
  ATR_OK = 0,
  ATR_ERR_INVALID_ARG = 1, /* bad parameters or degenerate shapes */
  ATR_ERR_PARSE = 2,       /* malformed file content */
  ATR_ERR_NOT_FOUND = 3,   /* unknown id or missing file */
  ATR_ERR_DATA = 4,        /* invariant violation in the data */
  ATR_ERR_IO = 5           /* filesystem failure */
} atr_status;

typedef enum atr_mode { ATR_MODE_T2A = 0, ATR_MODE_A2T = 1 } atr_mode;
typedef enum atr_scale { ATR_SCALE_RAW = 0, ATR_SCALE_MINMAX = 1 } atr_scale;

typedef struct atr_corpus atr_corpus;
typedef struct atr_matrix atr_matrix;
typedef struct atr_model atr_model;
typedef struct atr_scorer atr_scorer;
typedef struct atr_ranking atr_ranking;

const char* atr_last_error(void);
void atr_string_free(char* s);

/* corpus */
atr_status atr_corpus_load(const char* path, atr_corpus** out);
atr_status atr_corpus_save(const atr_corpus* corpus, const char* path);
atr_status atr_corpus_synth(size_t n_audio, size_t tag_vocab_size,
                            size_t tags_per_audio, size_t captions_per_audio,
                            uint64_t seed, int ordered_events,
                            atr_corpus** out);
size_t atr_corpus_num_items(const atr_corpus* corpus);
size_t atr_corpus_num_captions(const atr_corpus* corpus);
void atr_corpus_free(atr_corpus* corpus);

/* scorers: either a named mock ("constant", "overlap") or a trained model */
atr_status atr_scorer_mock(const char* name, atr_scorer** out);
void atr_scorer_free(atr_scorer* scorer);

/* toy language model */
atr_status atr_model_train(const atr_corpus* corpus, double lambda,
                           double smooth_k, atr_model** out);
atr_status atr_model_load(const char* path, atr_model** out);
atr_status atr_model_save(const atr_model* model, const char* path);
atr_status atr_model_scorer(const atr_model* model, atr_scorer** out);
atr_status atr_model_generate(const atr_model* model, const atr_corpus* corpus,
                              const char* audio_id, size_t beam_width,
                              size_t max_len, char** out_caption);
void atr_model_free(atr_model* model);

/* loss matrix */
atr_status atr_matrix_build(const atr_corpus* corpus, const atr_scorer* scorer,
                            unsigned threads, atr_matrix** out);
atr_status atr_matrix_read(const char* path, atr_matrix** out);
atr_status atr_matrix_write(const atr_matrix* matrix, const char* path);
atr_status atr_matrix_minmax_scaled(const atr_matrix* matrix,
                                    atr_matrix** out);
size_t atr_matrix_rows(const atr_matrix* matrix);
size_t atr_matrix_cols(const atr_matrix* matrix);
void atr_matrix_free(atr_matrix* matrix);

/* retrieval */
atr_status atr_rank(const atr_matrix* matrix, atr_mode mode, atr_scale scale,
                    const char* query_id, atr_ranking** out);
size_t atr_ranking_size(const atr_ranking* ranking);
const char* atr_ranking_item(const atr_ranking* ranking, size_t index);
double atr_ranking_score(const atr_ranking* ranking, size_t index);
void atr_ranking_free(atr_ranking* ranking);

/* JSON report: {mode, scale, ks, n_queries, matrix_shape, seed} */
atr_status atr_eval(const atr_matrix* matrix, const atr_corpus* corpus,
                    atr_mode mode, atr_scale scale, const int* ks, size_t n_ks,
                    uint64_t seed, char** out_json);

/* perturbation harness; kind: "replace"|"invert",
 * set: "bat"|"seq2sup"|"sup2seq"|"seq"|"sup".
 * Output is JSONL, one {caption_id, original, perturbed, trigger, kind, set}
 * record per perturbed caption. */
atr_status atr_perturb(const atr_corpus* corpus, const char* kind,
                       const char* set, uint64_t seed, char** out_jsonl);

/* accuracy report over perturbation pairs read from a JSONL file */
atr_status atr_battest(const atr_corpus* corpus, const atr_scorer* scorer,
                       const char* pairs_path, char** out_json);

/* generate-then-compare baseline vs loss-based T2A, as one JSON report */
atr_status atr_baseline_compare(const atr_corpus* corpus,
                                const atr_model* model, size_t beam_width,
                                size_t max_len, const int* ks, size_t n_ks,
                                char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* ATR_H */
