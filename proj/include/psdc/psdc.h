/* Copyright 2026 The psdc Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef PSDC_PSDC_H_
#define PSDC_PSDC_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PSDC_API __declspec(dllexport)
#else
#define PSDC_API __attribute__((visibility("default")))
#endif

typedef enum psdc_status {
  PSDC_OK = 0,
  PSDC_ERR_PARAMETER = 1,
  PSDC_ERR_CONFIG = 2,
  PSDC_ERR_DIVERGENCE = 3,
  PSDC_ERR_NUMERICAL = 4,
  PSDC_ERR_VALIDATION = 5,
  PSDC_ERR_IO = 6,
  PSDC_ERR_BOOTSTRAP = 7,
  PSDC_ERR_INTERNAL = 8
} psdc_status;

typedef struct psdc_problem psdc_problem;
typedef struct psdc_stepper psdc_stepper;

typedef struct psdc_counters {
  uint64_t n_explicit;
  uint64_t n_implicit;
  uint64_t n_solve;
} psdc_counters;

typedef struct psdc_step_report {
  double wall_s;
  double init_s;
  double sweeps_s;
  double last_node_s;
  psdc_counters counts;
} psdc_step_report;

typedef struct psdc_swe_params {
  int n;
  double length;
  double phi_bar;
  double f0;
  double nu;
  int dealias;
  unsigned space_threads;
} psdc_swe_params;

typedef struct psdc_jet_params {
  double u0;
  double y0;
  double width;
  double epsilon;
  int k_pert;
} psdc_jet_params;

typedef enum psdc_scheme {
  PSDC_SCHEME_SDC = 0,
  PSDC_SCHEME_DSDC = 1,
  PSDC_SCHEME_IMEX_O2 = 2,
  PSDC_SCHEME_AB2_SI = 3
} psdc_scheme;

typedef struct psdc_stepper_params {
  psdc_scheme scheme;
  int num_nodes;
  int sweeps; /* 0: same as num_nodes */
  int implicit_euler_precond; /* 0: MIN-SR-FLEX */
  int conventional_dtau;      /* 0: as written */
  unsigned time_threads;
} psdc_stepper_params;

typedef struct psdc_bench_options {
  const char* out_dir;    /* NULL: value from the config */
  unsigned space_threads; /* 0: value from the config */
  unsigned time_threads;  /* 0: value from the config */
  int reps;               /* 0: value from the config */
  const char* metric;     /* "rel", "abs" or NULL */
} psdc_bench_options;

/* Message of the last failing call on this thread. */
PSDC_API const char* psdc_last_error(void);

PSDC_API void psdc_swe_params_default(psdc_swe_params* out);
PSDC_API void psdc_jet_params_default(psdc_jet_params* out, double length);
PSDC_API void psdc_stepper_params_default(psdc_stepper_params* out);

/* Dahlquist test problem; lambdas are (re, im) pairs. The state holds
 * `width` interleaved complex values. */
PSDC_API psdc_status psdc_dahlquist_create(double li_re, double li_im, double le_re, double le_im,
                                           size_t width, psdc_problem** out);
PSDC_API psdc_status psdc_swe_create(const psdc_swe_params* params, psdc_problem** out);
PSDC_API void psdc_problem_destroy(psdc_problem* problem);
PSDC_API size_t psdc_problem_size(const psdc_problem* problem);
PSDC_API psdc_status psdc_problem_counters(const psdc_problem* problem, psdc_counters* out);
PSDC_API void psdc_problem_reset_counters(psdc_problem* problem);

/* Writes psdc_problem_size() doubles. */
PSDC_API psdc_status psdc_swe_jet_state(const psdc_problem* problem, const psdc_jet_params* jet,
                                        double* state);

PSDC_API psdc_status psdc_stepper_create(const psdc_stepper_params* params, psdc_stepper** out);
PSDC_API void psdc_stepper_destroy(psdc_stepper* stepper);
PSDC_API psdc_status psdc_stepper_step(psdc_stepper* stepper, const psdc_problem* problem,
                                       double* state, double dt, psdc_step_report* report);
PSDC_API psdc_status psdc_stepper_reset(psdc_stepper* stepper);

/* Advances `state` in place by n_steps; on divergence `failed_step` (if not
 * NULL) receives the 1-based step. */
PSDC_API psdc_status psdc_integrate(psdc_stepper* stepper, const psdc_problem* problem,
                                    double* state, double dt, size_t n_steps,
                                    size_t* failed_step);

PSDC_API psdc_status psdc_radau_right_nodes(int num_nodes, double* nodes);
/* Row-major num_nodes x num_nodes. */
PSDC_API psdc_status psdc_quadrature_matrix(int num_nodes, double* q);

PSDC_API psdc_status psdc_perf_step_costs(int num_nodes, int sweeps, double c_explicit,
                                          double c_solve, double c_extra, double* sequential,
                                          double* parallel);
PSDC_API psdc_status psdc_theoretical_speedup(int num_nodes, double ratio, double* out);

PSDC_API psdc_status psdc_snapshot_write(const char* path, const psdc_problem* problem,
                                         const double* state, double time);
/* Reads a snapshot. With state == NULL only params, time and size are
 * filled; otherwise `*size` must hold the buffer length. */
PSDC_API psdc_status psdc_snapshot_read(const char* path, psdc_swe_params* params, double* time,
                                        double* state, size_t* size);

/* Runs one benchmark command: "run", "work-precision", "scaling", "speedup"
 * or "perf-model". */
PSDC_API psdc_status psdc_bench_execute(const char* command, const char* config_path,
                                        const psdc_bench_options* options);

#ifdef __cplusplus
}
#endif

#endif /* PSDC_PSDC_H_ */
