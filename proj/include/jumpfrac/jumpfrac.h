#ifndef JUMPFRAC_H
#define JUMPFRAC_H

#include <stddef.h>
#include <stdint.h>

#if defined(JUMPFRAC_BUILDING_LIBRARY)
#define JF_API __attribute__((visibility("default")))
#else
#define JF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jf_status {
  JF_OK = 0,
  JF_ERR_VALIDATION = 1,
  JF_ERR_NUMERICAL = 2,
  JF_ERR_PARSE = 3,
  JF_ERR_IO = 4,
  JF_ERR_ARGUMENT = 5,
  JF_ERR_INTERNAL = 6
} jf_status;

typedef struct jf_config jf_config;
typedef struct jf_expr jf_expr;
typedef struct jf_points jf_points;
typedef struct jf_model jf_model;
typedef struct jf_path jf_path;

/* Message of the last failing call on this thread; empty after success. */
JF_API const char* jf_last_error(void);

JF_API uint64_t jf_derive_seed(uint64_t master, const char* label, uint64_t index);

/* Configuration. */
JF_API jf_status jf_config_default(jf_config** out);
JF_API jf_status jf_config_load(const char* path, jf_config** out);
JF_API jf_status jf_config_parse(const char* text, jf_config** out);
JF_API jf_status jf_config_set_seed(jf_config* cfg, uint64_t seed);
JF_API jf_status jf_config_set_output_dir(jf_config* cfg, const char* dir);
JF_API jf_status jf_config_set_option(jf_config* cfg, const char* dotted_key, const char* value);
/* Canonical text. With buf == NULL only *needed is filled in. */
JF_API jf_status jf_config_serialize(const jf_config* cfg, char* buf, size_t len, size_t* needed);
JF_API void jf_config_free(jf_config* cfg);

/* Runs a subcommand. threads = 0 picks the hardware count. *exit_code gets
   0, 1 (validation) or 2 (numerical); the summary is truncated to len. */
JF_API jf_status jf_run_subcommand(const jf_config* cfg, const char* name, unsigned threads, int* exit_code,
                                   char* summary, size_t len);

/* Expressions in x (and z when allow_z is nonzero). */
JF_API jf_status jf_expr_parse(const char* text, int allow_z, jf_expr** out);
JF_API jf_status jf_expr_eval(const jf_expr* e, double x, double z, double* out);
JF_API void jf_expr_free(jf_expr* e);

/* Poisson point systems. */
JF_API jf_status jf_points_sample(double horizon, double z_min, uint64_t seed, jf_points** out);
JF_API size_t jf_points_count(const jf_points* ps);
JF_API jf_status jf_points_get(const jf_points* ps, size_t i, double* t, double* z);
JF_API jf_status jf_points_write_csv(const jf_points* ps, const char* path);
JF_API jf_status jf_points_approx_rate(const jf_points* ps, double t, double delta_max, double* out);
JF_API void jf_points_free(jf_points* ps);

/* Models and sample paths. sigma may be NULL or "ZERO". */
JF_API jf_status jf_model_create_builtin(const char* sigma, const char* b, const char* beta_tilde, double x0,
                                         jf_model** out);
JF_API jf_status jf_model_create_custom(const char* sigma, const char* b, const char* g, double x0,
                                        jf_model** out);
JF_API void jf_model_free(jf_model* m);

JF_API jf_status jf_path_simulate(const jf_model* m, const jf_points* ps, double dt, uint64_t brownian_seed,
                                  jf_path** out);
JF_API size_t jf_path_size(const jf_path* p);
JF_API jf_status jf_path_get(const jf_path* p, size_t i, double* t, double* value, double* left_value,
                             int* is_jump);
JF_API jf_status jf_path_write_csv(const jf_path* p, const char* path);
JF_API void jf_path_free(jf_path* p);

/* Pointwise theory. */
JF_API jf_status jf_theoretical_exponent(double beta_t, double delta_t, int sigma_zero, double* out);
JF_API jf_status jf_pointwise_spectrum(int sigma_zero, double beta_t, double beta_t_minus, double delta_t,
                                       int is_jump_time, int lm_plus, int lm_minus, double h, double* out);

JF_API jf_status jf_ks_two_sample(const double* a, size_t na, const double* b, size_t nb, double* statistic,
                                  double* p_value);

#ifdef __cplusplus
}
#endif

#endif
