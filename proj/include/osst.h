/*
 * osst: one-shot style transfer scoring for authorship analysis.
 *
 * All functions return a status code:
 *   0  success
 *   2  usage error (bad arguments, malformed request JSON)
 *   3  backend error (model server failures, capability gaps)
 *   4  data error (unreadable or malformed input data)
 *   5  internal error
 *
 * On failure osst_last_error() returns a human-readable message for the
 * calling thread. Output strings (char** parameters) are heap-allocated
 * JSON documents; release them with osst_free_string().
 *
 * Common JSON shapes:
 *   Document  {"id", "text", "author_id"?, "collection_id"?, "lang"?}
 *   Corpus    {"documents": [Document], "authors": {author_id: [doc_id]}}
 *   Styled    {"doc": Document, "rec": {"doc_id", "neutral_text",
 *              "generator_fingerprint"}}
 */

#ifndef OSST_H
#define OSST_H

#ifdef __cplusplus
extern "C" {
#endif

#define OSST_OK 0
#define OSST_ERR_USAGE 2
#define OSST_ERR_BACKEND 3
#define OSST_ERR_DATA 4
#define OSST_ERR_INTERNAL 5

typedef struct osst_backend osst_backend;

const char* osst_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* osst_last_error(void);

void osst_free_string(char* s);

/*
 * Offline character n-gram backend trained on the given texts.
 * corpus_texts_json: JSON array of strings. order: 1..5.
 */
int osst_backend_open_offline(const char* corpus_texts_json, int order, osst_backend** out);

/*
 * Remote completions-protocol backend.
 * config_json: {"model_id", "endpoint", "request_params"?: object,
 *               "max_attempts"?, "initial_backoff_ms"?, "max_in_flight"?}
 * Bearer auth is read from the OSST_API_KEY environment variable.
 */
int osst_backend_open_remote(const char* config_json, osst_backend** out);

void osst_backend_close(osst_backend* backend);

int osst_backend_fingerprint(const osst_backend* backend, char** out);

/*
 * Neutralize every document of a corpus, with resumable caching.
 * corpus_json: Corpus. options_json (nullable): {"cache_dir"?, "concurrency"?}.
 * out: {"records": {doc_id: record}, "failures": [[doc_id, message]],
 *       "batch_failed": bool}
 */
int osst_neutralize_corpus(osst_backend* backend, const char* corpus_json,
                           const char* options_json, char** out);

/*
 * Transfer-score matrix: rows are targets, columns are candidate texts.
 * request_json: {"targets": [Styled], "candidates": [Styled],
 *                "cache_dir"?, "concurrency"?}
 * out: {"targets": [id], "candidates": [id], "values": [[number]]}
 */
int osst_score_table(osst_backend* backend, const char* request_json, char** out);

/*
 * Closed- or open-set attribution over a score table. Pure computation,
 * no backend needed.
 * request_json: {"table": ScoreTable, "corpus": Corpus,
 *                "target_ids": [str], "mode": "closed"|"open",
 *                "threshold"?: number (open mode),
 *                "ground_truth"?: {target_id: author_id}}
 * out: {"results": [AttributionResult], "metrics"?: {"accuracy",
 *       "mean_normalized_rank"}}
 */
int osst_attribute(const char* request_json, char** out);

/*
 * Exact threshold sweep over labeled scores.
 * request_json: {"instances": [{"score", "label"}],
 *                "objective"?: "macro_f1"|"f1_positive"}
 * out: CalibrationResult (threshold may be the strings "inf"/"-inf").
 */
int osst_calibrate(const char* request_json, char** out);

/*
 * Score and decide verification pairs. With "threshold" absent, the
 * threshold is calibrated on the labeled pairs first.
 * request_json: {"pairs": [{"first": Styled, "second": Styled,
 *                "same"?: bool}], "variant": "zs"|"rs",
 *                "anchors"?: [Styled], "threshold"?, "objective"?,
 *                "cache_dir"?, "concurrency"?}
 * out: {"results": [{"first", "second", "score", "decision"}],
 *       "threshold", "calibration"?, "metrics"?}
 */
int osst_verify(osst_backend* backend, const char* request_json, char** out);

/*
 * Anchor-count ablation with per-run threshold recalibration.
 * request_json: {"calibration": [pair], "evaluation": [pair],
 *                "pool": [Styled], "k_values": [int], "repeats": int,
 *                "seed": int, "objective"?, "cache_dir"?, "concurrency"?}
 * out: {"entries": [{"k", "mean_objective", "std_objective", "per_run"}]}
 */
int osst_anchor_ablation(osst_backend* backend, const char* request_json, char** out);

/*
 * Per-position medians of one-shot minus zero-shot token logprobs.
 * request_json: {"pairs": [{"conditioning": Styled, "target": Styled}],
 *                "max_position": int, "cache_dir"?, "concurrency"?}
 * out: {"medians": [number|null], "counts": [int], "skipped_pairs": int}
 */
int osst_position_profile(osst_backend* backend, const char* request_json, char** out);

/*
 * Folder-per-candidate attribution dataset with an unknown/ folder and an
 * optional ground-truth.json.
 * cleaner: "none", "fanfiction", "emails" or "style-change".
 * out: {"corpus": Corpus, "targets": [Document],
 *       "ground_truth": {target_id: author_id}}
 */
int osst_load_attribution_dir(const char* path, const char* cleaner, char** out);

/*
 * JSONL verification dataset, one {"id", "pair": [str, str], "same"?} per
 * line.
 * out: {"instances": [{"first", "second", "same"?}], "documents": [Document]}
 */
int osst_load_verification_jsonl(const char* path, const char* cleaner, char** out);

#ifdef __cplusplus
}
#endif

#endif /* OSST_H */
