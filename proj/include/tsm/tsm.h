// Copyright 2026 The tsm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the tsm library.
 *
 * Every function returns a tsm_status; on failure tsm_last_error() gives a
 * message for the calling thread. Handles are opaque and owned by the caller
 * until passed to the matching *_destroy function. Strings returned through
 * char** are heap allocated and must be released with tsm_string_free.
 * JSON arguments are UTF-8 objects.
 */
#ifndef TSM_TSM_H
#define TSM_TSM_H

#include <stddef.h>
#include <stdint.h>

#if defined(TSM_BUILDING_LIBRARY)
#define TSM_API __attribute__((visibility("default")))
#else
#define TSM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsm_status {
  TSM_OK = 0,
  TSM_ERR_INVALID_ARGUMENT = 1,
  TSM_ERR_SHAPE_MISMATCH = 2,
  TSM_ERR_RANK_INFEASIBLE = 3,
  TSM_ERR_IO = 4,
  TSM_ERR_NUMERIC = 5,
  TSM_ERR_INTERNAL = 6
} tsm_status;

typedef struct tsm_tensor tsm_tensor;
typedef struct tsm_dataset tsm_dataset;
typedef struct tsm_library tsm_library;

TSM_API const char* tsm_version(void);
TSM_API const char* tsm_status_string(tsm_status status);
/* Message of the last failed call on this thread; "" if none. */
TSM_API const char* tsm_last_error(void);
TSM_API void tsm_string_free(char* s);

/* ---- tensors ---------------------------------------------------------- */

/* `data` may be NULL for a zero tensor; otherwise prod(dims) values,
 * row-major with the first axis slowest. */
TSM_API tsm_status tsm_tensor_create(size_t order, const size_t* dims, const double* data,
                                     tsm_tensor** out);
TSM_API void tsm_tensor_destroy(tsm_tensor* t);
TSM_API tsm_status tsm_tensor_order(const tsm_tensor* t, size_t* order);
/* Copies min(order, capacity) dimensions. */
TSM_API tsm_status tsm_tensor_dims(const tsm_tensor* t, size_t* dims, size_t capacity);
TSM_API tsm_status tsm_tensor_size(const tsm_tensor* t, size_t* size);
/* Borrowed pointer, valid until the tensor is destroyed. */
TSM_API tsm_status tsm_tensor_data(const tsm_tensor* t, const double** data);
TSM_API tsm_status tsm_tensor_norm(const tsm_tensor* t, double* norm);
/* Unfolding with `axes` on the rows, written row-major into `out` when it
 * is non-NULL and holds rows * cols values. */
TSM_API tsm_status tsm_tensor_unfold(const tsm_tensor* t, const size_t* axes, size_t axis_count,
                                     double* out, size_t capacity, size_t* rows, size_t* cols);
/* Reads a .pgm or .csv image and reshapes it with the given factors. */
TSM_API tsm_status tsm_tensor_from_image(const char* path, const size_t* row_factors,
                                         size_t row_count, const size_t* col_factors,
                                         size_t col_count, tsm_tensor** out);

/* ---- datasets --------------------------------------------------------- */

/* Directory of <label>/<image> files; factor lists may be empty when the
 * directory has a dataset.json. */
TSM_API tsm_status tsm_dataset_load(const char* root, const size_t* row_factors,
                                    size_t row_count, const size_t* col_factors,
                                    size_t col_count, tsm_dataset** out);
/* Synthetic data from a generator object ("class_count", "shape", "family",
 * "leaf_fraction", "internal_fraction", "ranks", "samples_per_class",
 * "noise", "orthogonal_classes", "seed"). */
TSM_API tsm_status tsm_dataset_generate(const char* synthetic_json, tsm_dataset** out);
/* Dataset named by an experiment configuration. */
TSM_API tsm_status tsm_dataset_from_config(const char* config_json, tsm_dataset** out);
TSM_API tsm_status tsm_dataset_save(const tsm_dataset* ds, const char* root);
TSM_API void tsm_dataset_destroy(tsm_dataset* ds);
TSM_API tsm_status tsm_dataset_size(const tsm_dataset* ds, size_t* count);
/* Borrowed string, valid until the dataset is destroyed. */
TSM_API tsm_status tsm_dataset_label(const tsm_dataset* ds, size_t index, const char** label);
/* New tensor holding a copy of sample `index`. */
TSM_API tsm_status tsm_dataset_sample(const tsm_dataset* ds, size_t index, tsm_tensor** out);

/* ---- class libraries -------------------------------------------------- */

/* Spec object: "family" ("tucker", "ht", "tt"), optional "scheme", "tree",
 * "centering", and "ranks" or "rank_fraction" with "leaf_fraction". */
TSM_API tsm_status tsm_library_train(const tsm_dataset* ds, const char* spec_json,
                                     tsm_library** out);
TSM_API tsm_status tsm_library_save(const tsm_library* lib, const char* path);
TSM_API tsm_status tsm_library_load(const char* path, tsm_library** out);
TSM_API void tsm_library_destroy(tsm_library* lib);
/* Shape, family, scheme, ranks, classes and metadata as JSON. */
TSM_API tsm_status tsm_library_info(const tsm_library* lib, char** json);
TSM_API tsm_status tsm_library_set_scheme(tsm_library* lib, const char* scheme);
/* Reads an image with the reshape factors recorded at training time. */
TSM_API tsm_status tsm_library_read_image(const tsm_library* lib, const char* path,
                                          tsm_tensor** out);
TSM_API tsm_status tsm_library_classify(const tsm_library* lib, const tsm_tensor* x,
                                        char** label);
/* {"label": energy, ...} */
TSM_API tsm_status tsm_library_energies(const tsm_library* lib, const tsm_tensor* x,
                                        char** json);
/* {"error_rate", "total", "misclassified", "confusion": [[true, pred, n]...]} */
TSM_API tsm_status tsm_library_evaluate(const tsm_library* lib, const tsm_dataset* ds,
                                        char** json);

/* ---- experiments and costs -------------------------------------------- */

/* Runs an experiment configuration. Writes `csv_path` plus a JSON sidecar
 * with the same stem when csv_path is non-NULL; returns the CSV text through
 * `csv` when it is non-NULL. `command` is recorded in the sidecar. */
TSM_API tsm_status tsm_run_rank_sweep(const char* config_json, const char* command,
                                      const char* csv_path, char** csv);
TSM_API tsm_status tsm_run_learning_curve(const char* config_json, const char* command,
                                          const char* csv_path, char** csv);

/* Storage and projection counts of every family and scheme as CSV. */
TSM_API tsm_status tsm_cost_table(const size_t* dims, size_t order, size_t leaf_rank,
                                  size_t internal_rank, char** csv);
/* Closed-form counts for an order-4 tensor with all dimensions n. */
TSM_API tsm_status tsm_cost_formula(const char* scheme, uint64_t n, uint64_t leaf_rank,
                                    uint64_t internal_rank, uint64_t* storage,
                                    uint64_t* projection);

#ifdef __cplusplus
}
#endif

#endif /* TSM_TSM_H */
