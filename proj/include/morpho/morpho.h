/**
 * Copyright 2026 The Morpho Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef MORPHO_MORPHO_H_
#define MORPHO_MORPHO_H_

/*
 * C interface to the morpho library: glyph morphometry, morphological
 * perturbations and distribution statistics.
 *
 * Conventions:
 *  - Every fallible function returns a morpho_status. On failure a
 *    thread-local message is available from morpho_last_error().
 *  - Objects are opaque handles created by *_read / *_create / *_build
 *    functions and released with the matching *_free. Passing NULL to a
 *    *_free function is a no-op.
 *  - Images are 8-bit, row-major, height x width.
 *  - Tables of reals are row-major (rows x columns).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MORPHO_API __declspec(dllexport)
#else
#define MORPHO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum morpho_status {
  MORPHO_OK = 0,
  MORPHO_E_INVALID_ARGUMENT = 1,
  MORPHO_E_IO = 2,
  MORPHO_E_BAD_MAGIC = 3,
  MORPHO_E_TRUNCATED = 4,
  MORPHO_E_OVERSIZED = 5,
  MORPHO_E_DIMENSION_MISMATCH = 6,
  MORPHO_E_NON_DIVISIBLE_DIMENSIONS = 7,
  MORPHO_E_FLAT_IMAGE = 8,
  MORPHO_E_NO_BACKGROUND = 9,
  MORPHO_E_EMPTY_FOREGROUND = 10,
  MORPHO_E_EMPTY_SKELETON = 11,
  MORPHO_E_ZERO_MASS = 12,
  MORPHO_E_DEGENERATE_ROW = 13,
  MORPHO_E_EMPTY_RESULT = 14,
  MORPHO_E_NO_CANDIDATE_SITES = 15,
  MORPHO_E_DEGENERATE_COLUMN = 16,
  MORPHO_E_TOO_FEW_SAMPLES = 17,
  MORPHO_E_SINGULAR_COVARIANCE = 18,
  MORPHO_E_DEGENERATE_ATTRIBUTE = 19,
  MORPHO_E_INTERNAL = 20
} morpho_status;

MORPHO_API const char* morpho_version(void);
/* Symbolic name of a status, e.g. "BadMagic". */
MORPHO_API const char* morpho_status_name(morpho_status status);
/* Message of the last failure on the calling thread; "" if none. */
MORPHO_API const char* morpho_last_error(void);

/* ---- IDX datasets ------------------------------------------------------ */

typedef struct morpho_dataset morpho_dataset;
typedef struct morpho_labels morpho_labels;

/* Gzip-compressed input (0x1F 0x8B prefix) is decompressed transparently. */
MORPHO_API morpho_status morpho_dataset_read(const char* path, morpho_dataset** out);
MORPHO_API morpho_status morpho_dataset_read_memory(const uint8_t* bytes, size_t size, morpho_dataset** out);
/* Copies count * height * width bytes. */
MORPHO_API morpho_status morpho_dataset_create(const uint8_t* pixels, size_t count, uint32_t height,
                                               uint32_t width, morpho_dataset** out);
/* Paths ending in ".gz" are written gzip-compressed. */
MORPHO_API morpho_status morpho_dataset_write(const morpho_dataset* dataset, const char* path);
/* Serialises to a buffer owned by the caller; release with morpho_buffer_free. */
MORPHO_API morpho_status morpho_dataset_write_memory(const morpho_dataset* dataset, uint8_t** bytes, size_t* size);
MORPHO_API size_t morpho_dataset_count(const morpho_dataset* dataset);
MORPHO_API uint32_t morpho_dataset_height(const morpho_dataset* dataset);
MORPHO_API uint32_t morpho_dataset_width(const morpho_dataset* dataset);
/* Pointer to image `index`, valid for the lifetime of the dataset; NULL if out of range. */
MORPHO_API const uint8_t* morpho_dataset_image(const morpho_dataset* dataset, size_t index);
MORPHO_API void morpho_dataset_free(morpho_dataset* dataset);

MORPHO_API morpho_status morpho_labels_read(const char* path, morpho_labels** out);
MORPHO_API morpho_status morpho_labels_read_memory(const uint8_t* bytes, size_t size, morpho_labels** out);
MORPHO_API morpho_status morpho_labels_create(const uint8_t* labels, size_t count, morpho_labels** out);
MORPHO_API morpho_status morpho_labels_write(const morpho_labels* labels, const char* path);
MORPHO_API morpho_status morpho_labels_write_memory(const morpho_labels* labels, uint8_t** bytes, size_t* size);
MORPHO_API size_t morpho_labels_count(const morpho_labels* labels);
MORPHO_API const uint8_t* morpho_labels_data(const morpho_labels* labels);
MORPHO_API void morpho_labels_free(morpho_labels* labels);

MORPHO_API void morpho_buffer_free(void* buffer);

/* ---- Morphometry ------------------------------------------------------- */

/* Lengths in original-resolution pixels, slant in radians (positive = forward). */
typedef struct morpho_record {
  double length;
  double thickness;
  double slant;
  double width;
  double height;
} morpho_record;

MORPHO_API morpho_status morpho_measure(const uint8_t* pixels, uint32_t height, uint32_t width, uint32_t scale,
                                        morpho_record* out);

/*
 * Measures every image. `records` and `statuses` must hold count entries.
 * Per-image failures are reported in `statuses` (records zeroed) and do not
 * fail the call. `workers` >= 1; results do not depend on it.
 */
MORPHO_API morpho_status morpho_measure_dataset(const morpho_dataset* dataset, uint32_t scale, uint32_t workers,
                                                morpho_record* records, morpho_status* statuses);

/* ---- Perturbations ----------------------------------------------------- */

typedef enum morpho_perturb_kind {
  MORPHO_PERTURB_IDENTITY = 0,
  MORPHO_PERTURB_THIN = 1,
  MORPHO_PERTURB_THICKEN = 2,
  MORPHO_PERTURB_SWELL = 3,
  MORPHO_PERTURB_FRACTURE = 4
} morpho_perturb_kind;

/* Lengths in original-resolution pixels. */
typedef struct morpho_perturb_spec {
  int kind;            /* morpho_perturb_kind */
  double amount;       /* thin / thicken */
  double strength;     /* swell gamma */
  double radius_coef;  /* swell R = radius_coef * sqrt(thickness) */
  int count;           /* fracture */
  double brush;
  double min_distance;
  double window;
  double extension;
} morpho_perturb_spec;

/* Fills `spec` with the default parameters of `kind`. */
MORPHO_API morpho_status morpho_perturb_spec_default(int kind, morpho_perturb_spec* spec);

/*
 * Perturbs one image through the full pipeline. `out_pixels` receives
 * height * width bytes. If `outcome_json` is non-NULL it receives a
 * caller-owned JSON description (release with morpho_buffer_free).
 * Failed perturbations fall back to the plain pipeline image and are
 * recorded in the outcome rather than returned as an error.
 */
MORPHO_API morpho_status morpho_perturb_image(const uint8_t* pixels, uint32_t height, uint32_t width,
                                              const morpho_perturb_spec* spec, uint32_t scale, uint64_t seed,
                                              uint8_t* out_pixels, char** outcome_json);

typedef struct morpho_mixed morpho_mixed;

/*
 * Assigns every image one menu entry uniformly at random and applies it.
 * `labels` may be NULL. All randomness derives from (master_seed, index).
 */
MORPHO_API morpho_status morpho_mixed_build(const morpho_dataset* dataset, const morpho_labels* labels,
                                            const morpho_perturb_spec* menu, size_t menu_size, uint64_t master_seed,
                                            uint32_t scale, uint32_t workers, morpho_mixed** out);
/* Borrowed views, valid until morpho_mixed_free. */
MORPHO_API const morpho_dataset* morpho_mixed_images(const morpho_mixed* mixed);
MORPHO_API const morpho_labels* morpho_mixed_labels(const morpho_mixed* mixed);
MORPHO_API const morpho_labels* morpho_mixed_perturbation_labels(const morpho_mixed* mixed);
/* JSON line for image `index` (no trailing newline); NULL if out of range. */
MORPHO_API const char* morpho_mixed_outcome(const morpho_mixed* mixed, size_t index);
MORPHO_API size_t morpho_mixed_failures(const morpho_mixed* mixed);
MORPHO_API void morpho_mixed_free(morpho_mixed* mixed);

/* Seed used for image `index` of a mixed dataset (as recorded in its outcome). */
MORPHO_API uint64_t morpho_perturbation_seed(uint64_t master_seed, size_t index);

/* ---- Statistics -------------------------------------------------------- */

typedef struct morpho_mmd_result {
  double statistic;
  double std_error;
  double p_value;
  size_t n;
} morpho_mmd_result;

/*
 * Linear-time MMD test between x (nx x dims) and y (ny x dims).
 * `bandwidths` may be NULL; otherwise it receives dims kernel bandwidths.
 */
MORPHO_API morpho_status morpho_mmd_linear(const double* x, size_t nx, const double* y, size_t ny, size_t dims,
                                           morpho_mmd_result* out, double* bandwidths);

/* Scott's rule bandwidths of an n x dims table. */
MORPHO_API morpho_status morpho_scott_bandwidths(const double* table, size_t n, size_t dims, double* out);

typedef enum morpho_code_type {
  MORPHO_CODE_CONTINUOUS = 0,
  MORPHO_CODE_CATEGORICAL = 1,
  MORPHO_CODE_BINARY = 2
} morpho_code_type;

typedef struct morpho_code_kind {
  int type;             /* morpho_code_type */
  uint32_t categories;  /* categorical only */
} morpho_code_kind;

/* Number of columns after one-hot expansion of categorical codes. */
MORPHO_API size_t morpho_expanded_code_count(const morpho_code_kind* kinds, size_t n_codes);

/*
 * Partial correlations of each attribute (n x n_attr) with each expanded
 * code given the others; codes is n x n_codes. `out` holds
 * n_attr * morpho_expanded_code_count(...) values, row-major by attribute.
 */
MORPHO_API morpho_status morpho_partial_correlations(const double* attributes, size_t n, size_t n_attr,
                                                     const double* codes, const morpho_code_kind* kinds,
                                                     size_t n_codes, double* out);

/*
 * Mutual information gap. `per_attribute` holds n_attr values; `mutual_information`
 * (may be NULL) holds n_attr * n_codes values in nats.
 */
MORPHO_API morpho_status morpho_mig(const double* attributes, size_t n, size_t n_attr, const double* codes,
                                    const morpho_code_kind* kinds, size_t n_codes, uint32_t bins,
                                    double* per_attribute, double* overall, double* mutual_information);

#ifdef __cplusplus
}
#endif

#endif  // MORPHO_MORPHO_H_
