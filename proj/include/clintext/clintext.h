/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright 2026 The clintext Authors */

/*
 * C interface to the clintext library.
 *
 * Every fallible call returns a ct_status. On failure a description is
 * available from ct_last_error() on the same thread until the next failing
 * call. Objects are opaque handles released with their matching *_free
 * function; strings returned through char** are released with
 * ct_string_free. Option structs must be initialized with their *_init
 * function before fields are overridden.
 */

#ifndef CLINTEXT_CLINTEXT_H_
#define CLINTEXT_CLINTEXT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(CLINTEXT_BUILDING_LIBRARY)
#define CLINTEXT_API __attribute__((visibility("default")))
#else
#define CLINTEXT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ct_status {
  CT_OK = 0,
  CT_INVALID_ARGUMENT = 1,
  CT_IO_ERROR = 2,
  CT_PARSE_ERROR = 3,
  CT_VALIDATION_ERROR = 4,
  CT_INTERNAL_ERROR = 5
} ct_status;

typedef struct ct_corpus ct_corpus;
typedef struct ct_model ct_model;

CLINTEXT_API const char* ct_version(void);
CLINTEXT_API const char* ct_last_error(void);
CLINTEXT_API void ct_string_free(char* s);

/* ---- Corpus ------------------------------------------------------------ */

typedef struct ct_synth_config {
  size_t n;
  double prevalence;
  double signal_strength;
  double noise_rate;
  size_t min_tokens;
  size_t max_tokens;
  uint64_t seed;
} ct_synth_config;

CLINTEXT_API void ct_synth_config_init(ct_synth_config* cfg);
CLINTEXT_API ct_status ct_corpus_synthesize(const ct_synth_config* cfg, ct_corpus** out);
CLINTEXT_API ct_status ct_corpus_load(const char* path, ct_corpus** out);
CLINTEXT_API ct_status ct_corpus_save(const ct_corpus* corpus, const char* path);
CLINTEXT_API size_t ct_corpus_size(const ct_corpus* corpus);
CLINTEXT_API size_t ct_corpus_positives(const ct_corpus* corpus);
/* Pointers stay valid for the lifetime of the corpus. */
CLINTEXT_API ct_status ct_corpus_note(const ct_corpus* corpus, size_t index, const char** id,
                                      const char** text, int* label);
CLINTEXT_API void ct_corpus_free(ct_corpus* corpus);

/* ---- Preprocessing ----------------------------------------------------- */

typedef struct ct_preprocess_options {
  const char* abbreviations_path; /* NULL: built-in map */
  const char* mask_terms_path;    /* NULL: built-in discharge lexicon */
  int apply_mask;
} ct_preprocess_options;

CLINTEXT_API void ct_preprocess_options_init(ct_preprocess_options* opts);
CLINTEXT_API ct_status ct_preprocess_text(const ct_preprocess_options* opts, const char* raw, char** out);
/* Copy of the corpus with every note text preprocessed. */
CLINTEXT_API ct_status ct_corpus_preprocess(const ct_corpus* corpus, const ct_preprocess_options* opts,
                                            ct_corpus** out);

/* ---- Splits ------------------------------------------------------------ */

/* Writes {"seed", "train", "valid", "test"} with 64/16/20 stratified index lists. */
CLINTEXT_API ct_status ct_split_write(const ct_corpus* corpus, uint64_t seed, const char* path);

/* ---- Training ---------------------------------------------------------- */

typedef struct ct_train_options {
  const char* feature;         /* "tfidf" or "embedding" */
  const char* classifier;      /* "logreg" or "gbdt" */
  const char* embeddings_path; /* required for "embedding" */
  const char* split_path;      /* NULL: use every note */
  const char* params_json;     /* NULL: classifier defaults */
  const char* class_weights;   /* "balanced", "none" or "w0,w1" */
  ct_preprocess_options preprocess;
  size_t max_features;
  int lemmatize;
  uint64_t seed;
} ct_train_options;

CLINTEXT_API void ct_train_options_init(ct_train_options* opts);

/* Fits TF-IDF on the training partition and writes the model JSON. */
CLINTEXT_API ct_status ct_tfidf_fit_write(const ct_corpus* corpus, const ct_train_options* opts,
                                          const char* out_path);

/* Validates the embeddings file against the corpus and writes one
 * {"note_id", "vector"} line per note with its mean-pooled vector. */
CLINTEXT_API ct_status ct_embeddings_pool_write(const ct_corpus* corpus, const char* embeddings_path,
                                                const char* out_path);

CLINTEXT_API ct_status ct_model_train(const ct_corpus* corpus, const ct_train_options* opts, ct_model** out);
CLINTEXT_API ct_status ct_model_save(const ct_model* model, const char* path);
CLINTEXT_API ct_status ct_model_load(const char* path, ct_model** out);
/* Class-1 probability of one raw note. TF-IDF models only. */
CLINTEXT_API ct_status ct_model_predict_text(const ct_model* model, const char* raw, double* probability);
CLINTEXT_API void ct_model_free(ct_model* model);

/* ---- Tuning ------------------------------------------------------------ */

typedef struct ct_tune_options {
  ct_train_options train;
  const char* space_json; /* NULL: default space for the classifier */
  size_t n_iter;
  size_t folds;
} ct_tune_options;

CLINTEXT_API void ct_tune_options_init(ct_tune_options* opts);
/* Randomized search on the training partition; returns the CV table as JSON. */
CLINTEXT_API ct_status ct_tune(const ct_corpus* corpus, const ct_tune_options* opts, char** result_json);

/* ---- Evaluation -------------------------------------------------------- */

/*
 * Scores the test partition of split_path. With auto_threshold set, the
 * threshold is the F1-maximizing point of the validation partition's
 * precision-recall curve; otherwise `threshold` is used. Without a split the
 * whole corpus is scored and auto_threshold is rejected.
 */
CLINTEXT_API ct_status ct_model_evaluate(const ct_model* model, const ct_corpus* corpus, const char* split_path,
                                         const char* embeddings_path, int auto_threshold, double threshold,
                                         char** report_json);

/* ---- Benchmark --------------------------------------------------------- */

/* Runs the grid in config_path, writes table.md and results.json into
 * output_dir (NULL: the config's output_dir) and returns the table. A
 * nonempty seeds array replaces the config's seed list. */
CLINTEXT_API ct_status ct_bench_run(const char* config_path, const char* output_dir, const uint64_t* seeds,
                                    size_t n_seeds, char** table_markdown);

#ifdef __cplusplus
}
#endif

#endif /* CLINTEXT_CLINTEXT_H_ */
