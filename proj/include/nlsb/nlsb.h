/* C interface to the solver. Every call returns an nlsb_status; on failure
 * nlsb_last_error() holds a message for the calling thread. Handles are
 * opaque and owned by the caller, who releases them with the matching
 * *_free function. Passing NULL to a *_free function is allowed. */
#ifndef NLSB_NLSB_H
#define NLSB_NLSB_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(NLSB_BUILDING)
#define NLSB_API __declspec(dllexport)
#else
#define NLSB_API __declspec(dllimport)
#endif
#else
#define NLSB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlsb_status {
  NLSB_OK = 0,
  NLSB_DOMAIN = 1,
  NLSB_INVALID_SPEC = 2,
  NLSB_OUT_OF_SCOPE = 3,
  NLSB_NUMERICAL = 4,
  NLSB_SWEEP_DEGENERATE = 5,
  NLSB_PREDICTION_UNMET = 6,
  NLSB_IO = 7,
  NLSB_INVALID_ARGUMENT = 8,
  NLSB_INTERNAL = 9
} nlsb_status;

typedef struct nlsb_spec nlsb_spec;
typedef struct nlsb_profile nlsb_profile;
typedef struct nlsb_ground_state nlsb_ground_state;
typedef struct nlsb_curve nlsb_curve;
typedef struct nlsb_case_report nlsb_case_report;

typedef struct nlsb_controls {
  double step_tolerance;
  double max_scaled_radius;
  double amplitude_tolerance;
  double decay_threshold;
  double cone_width;
  double divergence_threshold;
  double node_spacing;
  double launch_scale;
} nlsb_controls;

typedef struct nlsb_sweep_options {
  double lambda_min;
  double lambda_max;
  int points_per_decade;
  int jobs;
  int warm_start;
  double max_failure_fraction;
  nlsb_controls controls;
} nlsb_sweep_options;

typedef struct nlsb_exponents {
  double alpha;
  double mu1;
  double beta;
  double mu2;
} nlsb_exponents;

typedef struct nlsb_hypotheses {
  int g1_ok;
  int g2_ok;
  nlsb_exponents exponents;
  /* "proved-by-dimension", "proved-by-exponent", ...; static storage. */
  const char* g3_status;
  double sobolev_exponent;
  int alpha_subcritical;
  int beta_subcritical;
} nlsb_hypotheses;

typedef struct nlsb_tail {
  double radius;
  double amplitude;
  double rate;
  double power;
} nlsb_tail;

typedef struct nlsb_branch_point {
  double lambda;
  double mass;
  double kinetic;
  double sup;
  double potential;
  double action;
  double pohozaev_residual;
  double nehari_residual;
  double mp_gap;
  int valid;
} nlsb_branch_point;

typedef struct nlsb_exponent_fit {
  int has_e0;
  double e0;
  int has_einf;
  double einf;
  double theory_e0;
  double theory_einf;
} nlsb_exponent_fit;

typedef struct nlsb_extremum {
  double lambda;
  double mass;
  int maximum;
} nlsb_extremum;

/* Called once per acceptance criterion, in order. */
typedef void (*nlsb_criterion_callback)(int id, const char* title, int passed, void* user);

NLSB_API const char* nlsb_version(void);
NLSB_API const char* nlsb_status_string(nlsb_status status);
NLSB_API const char* nlsb_last_error(void);
/* 0 for OK, 1 for caller errors, 2 for numerical and I/O failures,
 * 3 for an unmet prediction. */
NLSB_API int nlsb_exit_code(nlsb_status status);

NLSB_API void nlsb_controls_default(nlsb_controls* out);
NLSB_API void nlsb_sweep_options_default(nlsb_sweep_options* out);

/* Nonlinearity ------------------------------------------------------------ */
NLSB_API nlsb_status nlsb_spec_parse(const char* text, nlsb_spec** out);
NLSB_API void nlsb_spec_free(nlsb_spec* spec);
/* Canonical text; valid until the handle is freed. */
NLSB_API const char* nlsb_spec_string(const nlsb_spec* spec);
NLSB_API nlsb_status nlsb_spec_eval_g(const nlsb_spec* spec, double s, double* out);
NLSB_API nlsb_status nlsb_spec_exponents(const nlsb_spec* spec, nlsb_exponents* out);
NLSB_API nlsb_status nlsb_check_hypotheses(const nlsb_spec* spec, int dimension,
                                           nlsb_hypotheses* out);
/* Case label such as "iv-1" (static storage); NLSB_OUT_OF_SCOPE when an
 * exponent reaches the Sobolev bound. */
NLSB_API nlsb_status nlsb_classify_case(const nlsb_spec* spec, int dimension,
                                        const char** label);
NLSB_API nlsb_status nlsb_write_check_report(const nlsb_spec* spec, int dimension,
                                             const char* path);

/* Single shoot ------------------------------------------------------------ */
/* controls may be NULL for the defaults. */
NLSB_API nlsb_status nlsb_shoot(const nlsb_spec* spec, int dimension, double lambda,
                                const nlsb_controls* controls, nlsb_profile** out);
NLSB_API void nlsb_profile_free(nlsb_profile* profile);
NLSB_API size_t nlsb_profile_size(const nlsb_profile* profile);
NLSB_API nlsb_status nlsb_profile_node(const nlsb_profile* profile, size_t index, double* r,
                                       double* u, double* du);
NLSB_API double nlsb_profile_amplitude(const nlsb_profile* profile);
NLSB_API double nlsb_profile_residual(const nlsb_profile* profile);
NLSB_API nlsb_status nlsb_profile_value_at(const nlsb_profile* profile, double r, double* out);
NLSB_API nlsb_status nlsb_profile_tail(const nlsb_profile* profile, nlsb_tail* out);
NLSB_API nlsb_status nlsb_profile_diagnostics(const nlsb_profile* profile,
                                              nlsb_branch_point* out);
NLSB_API size_t nlsb_profile_warning_count(const nlsb_profile* profile);
NLSB_API const char* nlsb_profile_warning(const nlsb_profile* profile, size_t index);
NLSB_API nlsb_status nlsb_write_profile_csv(const nlsb_profile* profile, const char* path);
NLSB_API nlsb_status nlsb_write_shoot_report(const nlsb_profile* profile, const char* path);

/* Pure-power ground states ------------------------------------------------ */
NLSB_API nlsb_status nlsb_ground_state_compute(int dimension, double exponent,
                                               double coefficient,
                                               const nlsb_controls* controls,
                                               nlsb_ground_state** out);
NLSB_API void nlsb_ground_state_free(nlsb_ground_state* state);
NLSB_API double nlsb_ground_state_mass(const nlsb_ground_state* state);
NLSB_API double nlsb_ground_state_central_value(const nlsb_ground_state* state);
/* Borrowed view of the profile; lives as long as the state. */
NLSB_API const nlsb_profile* nlsb_ground_state_profile(const nlsb_ground_state* state);
NLSB_API nlsb_status nlsb_write_ground_state_report(const nlsb_ground_state* state,
                                                    const char* path);

/* Mass curve -------------------------------------------------------------- */
/* On NLSB_SWEEP_DEGENERATE *out still receives the partial curve. */
NLSB_API nlsb_status nlsb_sweep(const nlsb_spec* spec, int dimension,
                                const nlsb_sweep_options* options, nlsb_curve** out);
NLSB_API void nlsb_curve_free(nlsb_curve* curve);
NLSB_API size_t nlsb_curve_size(const nlsb_curve* curve);
NLSB_API nlsb_status nlsb_curve_point(const nlsb_curve* curve, size_t index,
                                      nlsb_branch_point* out);
NLSB_API nlsb_status nlsb_curve_exponents(const nlsb_curve* curve, nlsb_exponent_fit* out);
/* *found is 0 when the extremum sits on the grid boundary. The result is
 * cached on the handle. */
NLSB_API nlsb_status nlsb_curve_extremum(nlsb_curve* curve, nlsb_extremum* out, int* found);
NLSB_API nlsb_status nlsb_write_branch_csv(const nlsb_curve* curve, const char* path);
NLSB_API nlsb_status nlsb_write_branch_report(nlsb_curve* curve, const char* path);

/* Normalized solutions ---------------------------------------------------- */
NLSB_API nlsb_status nlsb_solve_normalized(const nlsb_spec* spec, int dimension, double a,
                                           const nlsb_sweep_options* options,
                                           nlsb_case_report** out);
NLSB_API void nlsb_case_report_free(nlsb_case_report* report);
NLSB_API const char* nlsb_case_report_label(const nlsb_case_report* report);
NLSB_API int nlsb_case_report_prediction_met(const nlsb_case_report* report);
NLSB_API size_t nlsb_case_report_root_count(const nlsb_case_report* report);
NLSB_API nlsb_status nlsb_case_report_root(const nlsb_case_report* report, size_t index,
                                           nlsb_branch_point* out);
/* Writes dir/report.json and dir/profile_root_<k>.csv for every root. */
NLSB_API nlsb_status nlsb_write_case_report(const nlsb_case_report* report, const char* dir);

/* Acceptance suite -------------------------------------------------------- */
/* Runs every criterion, writes dir/report.json. callback may be NULL. */
NLSB_API nlsb_status nlsb_verify(const char* dir, int jobs, nlsb_criterion_callback callback,
                                 void* user, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
