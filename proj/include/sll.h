/* Stationary social-learning laboratory: C API for libsoclearn.
 *
 * Every function returns an sll_status; results come back through out
 * parameters. On failure the thread-local message from sll_last_error()
 * describes what went wrong. Handles are opaque and must be released with
 * their destroy function.
 */
#ifndef SLL_H
#define SLL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sll_status {
    SLL_OK = 0,
    SLL_ERR_INVALID = 1,     /* bad argument or parameter range */
    SLL_ERR_DOMAIN = 2,      /* operation undefined for these inputs */
    SLL_ERR_CONVERGENCE = 3, /* solver gave up; message has diagnostics */
    SLL_ERR_IO = 4,
    SLL_ERR_INTERNAL = 5
} sll_status;

const char* sll_last_error(void);
const char* sll_version(void);

/* ------------------------------------------------------------------ */
/* Environment                                                         */

typedef struct sll_env sll_env;

sll_status sll_env_create_binary(double lambda, double rho, double cost, int n, double pi,
                                 sll_env** out);
/* atoms: q[i] with unconditional mass m[i]; must be symmetric under q -> 1-q. */
sll_status sll_env_create_tabulated(double lambda, double rho, double cost, int n,
                                    const double* q, const double* mass, int n_atoms,
                                    sll_env** out);
void sll_env_destroy(sll_env* env);

sll_status sll_env_to_json(const sll_env* env, char* buf, size_t cap, size_t* len);
sll_status sll_env_from_json(const char* json, sll_env** out);

sll_status sll_p_hat(const sll_env* env, double* out);
sll_status sll_effective_lambda(const sll_env* env, double* out);
sll_status sll_value_informed(const sll_env* env, double p, double* out);
sll_status sll_value_uninformed(double p, double* out);
sll_status sll_posterior(double p, double q, double* out);

/* ------------------------------------------------------------------ */
/* Small samples                                                       */

typedef struct sll_n1_result {
    int full_acquisition;
    double beta;
    double p1;
    double welfare;
    double lambda_star;
} sll_n1_result;

sll_status sll_solve_n1(const sll_env* env, sll_n1_result* out);

typedef struct sll_n2_result {
    double absorption_fraction;
    double drift;
    double beta_star;
    double p2;
    double p2_se;
    double welfare;
    double welfare_se;
    int full_acquisition;
    double bracket_lo;
    double bracket_hi;
} sll_n2_result;

sll_status sll_n2_absorption(const sll_env* env, double phi1, double eps, int64_t paths,
                             int64_t horizon, uint64_t seed, sll_n2_result* out);
sll_status sll_solve_n2(const sll_env* env, int64_t sim_budget, uint64_t seed,
                        sll_n2_result* out);

/* ------------------------------------------------------------------ */
/* Equilibrium steady states on the discretized measure                */

typedef struct sll_ess sll_ess;

typedef struct sll_ess_params {
    int grid_size;   /* 0 -> 4096 */
    double damping;  /* <= 0 -> 0.3 */
    int budget;      /* 0 -> 600 outer iterations */
} sll_ess_params;

sll_status sll_solve_ess(const sll_env* env, const sll_ess_params* params, sll_ess** out);
void sll_ess_destroy(sll_ess* ess);

typedef struct sll_ess_summary {
    double welfare;
    double match_rate;
    double info_rate;
    double consensus;
    double residual;
    int converged;
    int regular;
    int iterations;
} sll_ess_summary;

sll_status sll_ess_get_summary(const sll_ess* ess, sll_ess_summary* out);
/* Arrays of length n+1; *len reports how much was written. */
sll_status sll_ess_get_beliefs(const sll_ess* ess, double* buf, int cap, int* len);
sll_status sll_ess_get_beta(const sll_ess* ess, double* buf, int cap, int* len);
/* Measure weights per state; arrays of length grid_size. */
sll_status sll_ess_get_measure(const sll_ess* ess, double* w0, double* w1, int cap, int* len);

sll_status sll_consensus_condition(const sll_env* env, int* holds, double* value);

/* ------------------------------------------------------------------ */
/* Continuous-time three-sample game                                   */

typedef struct sll_pdmp sll_pdmp;

sll_status sll_pdmp_create(double lambda, double pi, double b, int grid_points, sll_pdmp** out);
void sll_pdmp_destroy(sll_pdmp* d);

sll_status sll_pdmp_drift(double pi, double b, int theta, double x, double* out);
sll_status sll_pdmp_size(const sll_pdmp* d, int* out);
sll_status sll_pdmp_copy(const sll_pdmp* d, double* x, double* f0, double* f1, int cap, int* len);
sll_status sll_pdmp_norm_info(const sll_pdmp* d, int* normalized, double* norm_constant,
                              double* tail_exponent);
sll_status sll_pdmp_lr(const sll_pdmp* d, int k, double* out);
/* Event-driven simulation against the analytic density. */
sll_status sll_pdmp_sim_l1(const sll_pdmp* d, double total_time, int bins, uint64_t seed,
                           double* l1_out);
sll_status sll_pdmp_discretize(const sll_pdmp* d, const double* eps, int n_eps,
                               int64_t sim_budget, uint64_t seed, double* tv_out);

typedef struct sll_bstar_result {
    double b_star;
    double p_hat;
    double beliefs[4];
    double welfare;
    double info_rate;
} sll_bstar_result;

sll_status sll_pdmp_find_bstar(double lambda, double pi, double cost, int grid_points,
                               sll_bstar_result* out, sll_pdmp** density_out);

/* ------------------------------------------------------------------ */
/* Dictated near-optimal rule                                          */

typedef struct sll_planner_report {
    double welfare;
    double welfare_se;
    double match_rate;      /* against the current cohort */
    double match_rate_pool; /* against the sampling pool */
    double info_rate;
    double info_rate_se;
    double mean_gap;
    int64_t m_hit;
    double bound_k;
    double bound_a;
    double bound_eps;
    double gap_bound;
    double aux_gap;
    double welfare_lower_bound;
    double fitted_a;
} sll_planner_report;

sll_status sll_planner_beta(const sll_env* env, double* buf, int cap, int* len);
sll_status sll_planner_hitting(const sll_env* env, double x, double y, int64_t* out);
sll_status sll_planner_welfare(const sll_env* env, int64_t sim_budget, uint64_t seed,
                               sll_planner_report* out);

#ifdef __cplusplus
}
#endif

#endif /* SLL_H */
