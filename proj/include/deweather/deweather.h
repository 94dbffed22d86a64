/* Copyright 2026 The deweather Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * deweather: weather-return removal for LiDAR point clouds.
 *
 * C API of the shared library. All objects are opaque handles created and
 * destroyed through these functions; every fallible call returns a dw_status
 * and reports DW_OK on success. On failure, dw_last_error() returns a
 * human-readable message for the calling thread and no out-parameter is
 * modified. Handles are immutable after creation and may be shared across
 * threads for reads.
 */

#ifndef DEWEATHER_DEWEATHER_H_
#define DEWEATHER_DEWEATHER_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DW_API __declspec(dllexport)
#else
#define DW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dw_status {
  DW_OK = 0,
  DW_E_INVALID_ARGUMENT = 1,
  DW_E_FORMAT = 2,          /* malformed file contents */
  DW_E_VALIDATION = 3,      /* non-finite/negative point data */
  DW_E_ALIGNMENT = 4,       /* cloud/mask/label length mismatch */
  DW_E_CONFIG = 5,          /* bad filter or run configuration */
  DW_E_FIT = 6,             /* distribution fit impossible */
  DW_E_IO = 7,              /* file system failure */
  DW_E_UNKNOWN_FILTER = 8,
  DW_E_UNKNOWN_KEY = 9,
} dw_status;

/* Stable name of a status code, e.g. "DW_E_FORMAT". */
DW_API const char* dw_status_name(dw_status status);

/* Message describing the most recent failure on this thread. Never NULL. */
DW_API const char* dw_last_error(void);

typedef struct dw_cloud dw_cloud;
typedef struct dw_mask dw_mask;
typedef struct dw_labels dw_labels;

/* ------------------------------------------------------------------ */
/* Point clouds                                                       */
/* ------------------------------------------------------------------ */

/* Reads a scan; the format is inferred from the extension (.bin for KITTI
 * binary, .ply for ASCII PLY). */
DW_API dw_status dw_cloud_read(const char* path, dw_cloud** out);

/* Builds a cloud from n records of (x, y, z, intensity) float quadruples. */
DW_API dw_status dw_cloud_create(const float* xyzi, size_t n, dw_cloud** out);

DW_API size_t dw_cloud_size(const dw_cloud* cloud);

/* Copies point i into xyzi[0..3]. */
DW_API dw_status dw_cloud_get(const dw_cloud* cloud, size_t i, float xyzi[4]);

/* Writes the cloud, keeping only points with mask verdict 1 when mask is
 * non-NULL. Format by extension as in dw_cloud_read. The write is atomic:
 * either the complete file appears at `path` or nothing does. */
DW_API dw_status dw_cloud_write(const dw_cloud* cloud, const dw_mask* mask,
                                const char* path);

DW_API void dw_cloud_free(dw_cloud* cloud);

/* ------------------------------------------------------------------ */
/* Masks                                                              */
/* ------------------------------------------------------------------ */

DW_API size_t dw_mask_size(const dw_mask* mask);
DW_API size_t dw_mask_kept(const dw_mask* mask);

/* Verdict for point i: 1 = kept (inlier), 0 = removed. */
DW_API int dw_mask_get(const dw_mask* mask, size_t i);

/* Sidecar format: one raw byte per point, 0 or 1, same order as the scan. */
DW_API dw_status dw_mask_write(const dw_mask* mask, const char* path);
DW_API dw_status dw_mask_read(const char* path, size_t expected_n,
                              dw_mask** out);

/* Reconstructs the mask mapping `cloud` onto `filtered`, which must be a
 * subsequence of cloud's points (bit-exact match, original order). */
DW_API dw_status dw_mask_from_subsequence(const dw_cloud* cloud,
                                          const dw_cloud* filtered,
                                          dw_mask** out);

DW_API void dw_mask_free(dw_mask* mask);

/* ------------------------------------------------------------------ */
/* Labels                                                             */
/* ------------------------------------------------------------------ */

/* Reads a KITTI-style label file (uint32 little endian per point; low 16
 * bits semantic class). expected_n must equal the companion scan's size.
 * positive[] lists the class ids that count as weather returns. */
DW_API dw_status dw_labels_read(const char* path, const uint32_t* positive,
                                size_t n_positive, size_t expected_n,
                                dw_labels** out);

DW_API dw_status dw_labels_create(const uint32_t* labels, size_t n,
                                  const uint32_t* positive, size_t n_positive,
                                  dw_labels** out);

DW_API size_t dw_labels_size(const dw_labels* labels);

DW_API dw_status dw_labels_write(const dw_labels* labels, const char* path);

DW_API void dw_labels_free(dw_labels* labels);

/* ------------------------------------------------------------------ */
/* Filters                                                            */
/* ------------------------------------------------------------------ */

/* Registered filter names as a comma-separated list, e.g.
 * "sor,dsor,dror,idsor,idsor-dror-prior". `experimental` additionally
 * registers the ddior baseline. The returned string is owned by the library. */
DW_API const char* dw_filter_names(int experimental);

/* Accepted "key=default" parameters of a filter, space separated. Returns
 * NULL for an unknown name. */
DW_API const char* dw_filter_parameters(const char* name, int experimental);

/* Runs a filter by name. params holds nkv "key=value" strings layered over
 * the filter's defaults (later entries win). */
DW_API dw_status dw_filter_apply(const dw_cloud* cloud, const char* name,
                                 const char* const* params, size_t nkv,
                                 int experimental, dw_mask** out);

/* Extra information from the most recent dw_filter_apply on this thread
 * (e.g. the fitted gamma parameters of idsor-dror-prior). Empty string when
 * there is nothing to report. */
DW_API const char* dw_filter_notes(void);

/* ------------------------------------------------------------------ */
/* Evaluation                                                         */
/* ------------------------------------------------------------------ */

/* precision/recall are NaN when undefined (nothing removed / no positive
 * labels in the scan). */
typedef struct dw_report {
  uint64_t tp, fp, tn, fn;
  double precision;
  double recall;
} dw_report;

DW_API dw_status dw_evaluate(const dw_mask* mask, const dw_labels* labels,
                             dw_report* out);

/* format is "csv" or "json"; fields in order tp, fp, tn, fn, precision,
 * recall, with undefined ratios as "nan"/null. */
DW_API dw_status dw_report_write(const dw_report* report, const char* path,
                                 const char* format);

/* Sweeps filter `name` over a parameter grid and writes the ranked CSV
 * (best recall first, precision as tiebreak). Grid axes are "key=v1,v2,..."
 * strings in declared order; fixed holds "key=value" strings applied to
 * every cell. */
DW_API dw_status dw_sweep_run(const dw_cloud* cloud, const dw_labels* labels,
                              const char* name, const char* const* grid,
                              size_t n_axes, const char* const* fixed,
                              size_t n_fixed, int experimental,
                              const char* out_csv);

/* ------------------------------------------------------------------ */
/* Weather model                                                      */
/* ------------------------------------------------------------------ */

typedef struct dw_gamma {
  double shape; /* k */
  double scale; /* theta, meters */
} dw_gamma;

/* Gamma density of weather-return range r. */
DW_API dw_status dw_gamma_pdf(dw_gamma params, double r, double* out);

/* Method-of-moments fit over n range samples. */
DW_API dw_status dw_gamma_fit(const double* ranges, size_t n, dw_gamma* out);

/* Euclidean ranges of every point; out must hold dw_cloud_size values.
 * When mask is non-NULL, only points with the given verdict are written and
 * *n_out receives how many (kept != 0 selects inliers, kept == 0 outliers). */
DW_API dw_status dw_cloud_ranges(const dw_cloud* cloud, const dw_mask* mask,
                                 int kept, double* out, size_t* n_out);

/* Histogram CSV (bin_start, count, normalized_density) over range samples. */
DW_API dw_status dw_histogram_write(const double* ranges, size_t n,
                                    double bin_width, const char* path);

/* ------------------------------------------------------------------ */
/* Synthetic scenes                                                   */
/* ------------------------------------------------------------------ */

typedef struct dw_synth_config {
  size_t total_points;
  double weather_fraction;      /* weather / total, default 0.2 */
  double surface_weather_share; /* weather placed on structure, default 0.12 */
  dw_gamma weather;             /* range distribution, default {2.15, 2.38} */
  uint32_t weather_label;       /* label id written for weather, default 110 */
  uint64_t seed;
} dw_synth_config;

/* Fills cfg with the documented defaults. */
DW_API void dw_synth_config_init(dw_synth_config* cfg);

/* Generates a labeled scene; both outputs are aligned to each other. */
DW_API dw_status dw_synth_scene(const dw_synth_config* cfg, dw_cloud** cloud,
                                dw_labels** labels);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DEWEATHER_DEWEATHER_H_ */
