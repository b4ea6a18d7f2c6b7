#include "sll.h"

#include <cstring>
#include <exception>
#include <string>

#include "sll/ess.hpp"
#include "sll/numeric.hpp"
#include "sll/pdmp.hpp"
#include "sll/planner.hpp"
#include "sll/serialize.hpp"
#include "sll/smallsample.hpp"
#include "sll/values.hpp"

namespace {

thread_local std::string g_last_error;

sll_status fail(sll_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
sll_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const sll::ConvergenceError& e) {
        return fail(SLL_ERR_CONVERGENCE, e.what());
    } catch (const std::domain_error& e) {
        return fail(SLL_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(SLL_ERR_INVALID, e.what());
    } catch (const std::exception& e) {
        return fail(SLL_ERR_INTERNAL, e.what());
    }
}

sll_status copy_out(const std::vector<double>& v, double* buf, int cap, int* len) {
    if (!buf || cap < static_cast<int>(v.size()))
        return fail(SLL_ERR_INVALID, "output buffer too small");
    std::memcpy(buf, v.data(), v.size() * sizeof(double));
    if (len) *len = static_cast<int>(v.size());
    return SLL_OK;
}

}  // namespace

struct sll_env {
    sll::Environment env;
};

struct sll_ess {
    sll::EssResult result;
};

struct sll_pdmp {
    sll::PdmpDensity density;
};

extern "C" {

const char* sll_last_error(void) { return g_last_error.c_str(); }

const char* sll_version(void) { return "0.1.0"; }

sll_status sll_env_create_binary(double lambda, double rho, double cost, int n, double pi,
                                 sll_env** out) {
    return guarded([&]() -> sll_status {
        if (!out) return fail(SLL_ERR_INVALID, "null output handle");
        *out = new sll_env{sll::Environment(lambda, rho, cost, n, sll::SignalModel::binary(pi))};
        return SLL_OK;
    });
}

sll_status sll_env_create_tabulated(double lambda, double rho, double cost, int n, const double* q,
                                    const double* mass, int n_atoms, sll_env** out) {
    return guarded([&]() -> sll_status {
        if (!out || !q || !mass || n_atoms <= 0)
            return fail(SLL_ERR_INVALID, "null or empty atom arrays");
        std::vector<sll::SignalModel::Atom> atoms;
        atoms.reserve(static_cast<std::size_t>(n_atoms));
        for (int i = 0; i < n_atoms; ++i) atoms.push_back({q[i], mass[i]});
        *out = new sll_env{
            sll::Environment(lambda, rho, cost, n, sll::SignalModel::tabulated(std::move(atoms)))};
        return SLL_OK;
    });
}

void sll_env_destroy(sll_env* env) { delete env; }

sll_status sll_env_to_json(const sll_env* env, char* buf, size_t cap, size_t* len) {
    return guarded([&]() -> sll_status {
        if (!env || !buf) return fail(SLL_ERR_INVALID, "null argument");
        std::string s = sll::environment_to_json(env->env);
        if (len) *len = s.size();
        if (s.size() + 1 > cap) return fail(SLL_ERR_INVALID, "output buffer too small");
        std::memcpy(buf, s.c_str(), s.size() + 1);
        return SLL_OK;
    });
}

sll_status sll_env_from_json(const char* json, sll_env** out) {
    return guarded([&]() -> sll_status {
        if (!json || !out) return fail(SLL_ERR_INVALID, "null argument");
        *out = new sll_env{sll::environment_from_json(json)};
        return SLL_OK;
    });
}

sll_status sll_p_hat(const sll_env* env, double* out) {
    return guarded([&]() -> sll_status {
        if (!env || !out) return fail(SLL_ERR_INVALID, "null argument");
        *out = env->env.p_hat();
        return SLL_OK;
    });
}

sll_status sll_effective_lambda(const sll_env* env, double* out) {
    return guarded([&]() -> sll_status {
        if (!env || !out) return fail(SLL_ERR_INVALID, "null argument");
        *out = env->env.effective_lambda();
        return SLL_OK;
    });
}

sll_status sll_value_informed(const sll_env* env, double p, double* out) {
    return guarded([&]() -> sll_status {
        if (!env || !out) return fail(SLL_ERR_INVALID, "null argument");
        *out = sll::value_informed(p, env->env.signals());
        return SLL_OK;
    });
}

sll_status sll_value_uninformed(double p, double* out) {
    return guarded([&]() -> sll_status {
        if (!out) return fail(SLL_ERR_INVALID, "null argument");
        if (p < 0.0 || p > 1.0) return fail(SLL_ERR_INVALID, "belief outside [0,1]");
        *out = sll::value_uninformed(p);
        return SLL_OK;
    });
}

sll_status sll_posterior(double p, double q, double* out) {
    return guarded([&]() -> sll_status {
        if (!out) return fail(SLL_ERR_INVALID, "null argument");
        *out = sll::posterior(p, q);
        return SLL_OK;
    });
}

sll_status sll_solve_n1(const sll_env* env, sll_n1_result* out) {
    return guarded([&]() -> sll_status {
        if (!env || !out) return fail(SLL_ERR_INVALID, "null argument");
        sll::N1Equilibrium eq = sll::solve_n1(env->env);
        out->full_acquisition = eq.full_acquisition ? 1 : 0;
        out->beta = eq.beta;
        out->p1 = eq.p1;
        out->welfare = eq.welfare;
        out->lambda_star = eq.lambda_star;
        return SLL_OK;
    });
}

namespace {

void fill_n2(const sll::N2Diagnostics& d, sll_n2_result* out) {
    out->absorption_fraction = d.absorption_fraction;
    out->drift = d.drift;
    out->beta_star = d.beta_star;
    out->p2 = d.p2;
    out->p2_se = d.p2_se;
    out->welfare = d.welfare;
    out->welfare_se = d.welfare_se;
    out->full_acquisition = d.full_acquisition ? 1 : 0;
    out->bracket_lo = d.bracket_lo;
    out->bracket_hi = d.bracket_hi;
}

}  // namespace

sll_status sll_n2_absorption(const sll_env* env, double phi1, double eps, int64_t paths,
                             int64_t horizon, uint64_t seed, sll_n2_result* out) {
    return guarded([&]() -> sll_status {
        if (!env || !out) return fail(SLL_ERR_INVALID, "null argument");
        fill_n2(sll::n2_absorption_test(env->env, phi1, eps, paths, horizon, seed), out);
        return SLL_OK;
    });
}

sll_status sll_solve_n2(const sll_env* env, int64_t sim_budget, uint64_t seed,
                        sll_n2_result* out) {
    return guarded([&]() -> sll_status {
        if (!env || !out) return fail(SLL_ERR_INVALID, "null argument");
        fill_n2(sll::solve_n2(env->env, sim_budget, seed), out);
        return SLL_OK;
    });
}

sll_status sll_solve_ess(const sll_env* env, const sll_ess_params* params, sll_ess** out) {
    return guarded([&]() -> sll_status {
        if (!env || !out) return fail(SLL_ERR_INVALID, "null argument");
        sll::EssOptions opt;
        if (params) {
            if (params->grid_size > 0) opt.grid_size = params->grid_size;
            if (params->damping > 0.0) opt.damping = params->damping;
            if (params->budget > 0) opt.budget = params->budget;
        }
        *out = new sll_ess{sll::solve_ess(env->env, opt)};
        return SLL_OK;
    });
}

void sll_ess_destroy(sll_ess* ess) { delete ess; }

sll_status sll_ess_get_summary(const sll_ess* ess, sll_ess_summary* out) {
    return guarded([&]() -> sll_status {
        if (!ess || !out) return fail(SLL_ERR_INVALID, "null argument");
        const sll::EssResult& r = ess->result;
        out->welfare = r.welfare;
        out->match_rate = r.match_rate;
        out->info_rate = r.info_rate;
        out->consensus = r.consensus;
        out->residual = r.residual;
        out->converged = r.converged ? 1 : 0;
        out->regular = r.regular ? 1 : 0;
        out->iterations = r.iterations;
        return SLL_OK;
    });
}

sll_status sll_ess_get_beliefs(const sll_ess* ess, double* buf, int cap, int* len) {
    return guarded([&]() -> sll_status {
        if (!ess) return fail(SLL_ERR_INVALID, "null handle");
        return copy_out(ess->result.beliefs.p, buf, cap, len);
    });
}

sll_status sll_ess_get_beta(const sll_ess* ess, double* buf, int cap, int* len) {
    return guarded([&]() -> sll_status {
        if (!ess) return fail(SLL_ERR_INVALID, "null handle");
        return copy_out(ess->result.strategy.beta, buf, cap, len);
    });
}

sll_status sll_ess_get_measure(const sll_ess* ess, double* w0, double* w1, int cap, int* len) {
    return guarded([&]() -> sll_status {
        if (!ess) return fail(SLL_ERR_INVALID, "null handle");
        sll_status s = copy_out(ess->result.measure.w0, w0, cap, len);
        if (s != SLL_OK) return s;
        return copy_out(ess->result.measure.w1, w1, cap, len);
    });
}

sll_status sll_consensus_condition(const sll_env* env, int* holds, double* value) {
    return guarded([&]() -> sll_status {
        if (!env || !holds) return fail(SLL_ERR_INVALID, "null argument");
        double v = 0.0;
        *holds = sll::theorem_consensus_condition(env->env, &v) ? 1 : 0;
        if (value) *value = v;
        return SLL_OK;
    });
}

sll_status sll_pdmp_create(double lambda, double pi, double b, int grid_points, sll_pdmp** out) {
    return guarded([&]() -> sll_status {
        if (!out) return fail(SLL_ERR_INVALID, "null argument");
        sll::PdmpConfig c{lambda, pi, b};
        *out = new sll_pdmp{sll::invariant_density(c, grid_points > 0 ? grid_points : 16384)};
        return SLL_OK;
    });
}

void sll_pdmp_destroy(sll_pdmp* d) { delete d; }

sll_status sll_pdmp_drift(double pi, double b, int theta, double x, double* out) {
    return guarded([&]() -> sll_status {
        if (!out) return fail(SLL_ERR_INVALID, "null argument");
        if (theta != 0 && theta != 1) return fail(SLL_ERR_INVALID, "theta must be 0 or 1");
        // The drift is defined for any lambda; pass a placeholder.
        sll::PdmpConfig c{1.0, pi, b};
        *out = sll::pdmp_drift(c, theta == 1 ? sll::Theta::one : sll::Theta::zero, x);
        return SLL_OK;
    });
}

sll_status sll_pdmp_size(const sll_pdmp* d, int* out) {
    return guarded([&]() -> sll_status {
        if (!d || !out) return fail(SLL_ERR_INVALID, "null argument");
        *out = static_cast<int>(d->density.x.size());
        return SLL_OK;
    });
}

sll_status sll_pdmp_copy(const sll_pdmp* d, double* x, double* f0, double* f1, int cap, int* len) {
    return guarded([&]() -> sll_status {
        if (!d) return fail(SLL_ERR_INVALID, "null handle");
        sll_status s = copy_out(d->density.x, x, cap, len);
        if (s != SLL_OK) return s;
        s = copy_out(d->density.f0, f0, cap, len);
        if (s != SLL_OK) return s;
        return copy_out(d->density.f1, f1, cap, len);
    });
}

sll_status sll_pdmp_norm_info(const sll_pdmp* d, int* normalized, double* norm_constant,
                              double* tail_exponent) {
    return guarded([&]() -> sll_status {
        if (!d) return fail(SLL_ERR_INVALID, "null handle");
        if (normalized) *normalized = d->density.normalized ? 1 : 0;
        if (norm_constant) *norm_constant = d->density.norm_constant;
        if (tail_exponent) *tail_exponent = d->density.tail_exponent;
        return SLL_OK;
    });
}

sll_status sll_pdmp_lr(const sll_pdmp* d, int k, double* out) {
    return guarded([&]() -> sll_status {
        if (!d || !out) return fail(SLL_ERR_INVALID, "null argument");
        *out = sll::likelihood_ratio(d->density, k);
        return SLL_OK;
    });
}

sll_status sll_pdmp_sim_l1(const sll_pdmp* d, double total_time, int bins, uint64_t seed,
                           double* l1_out) {
    return guarded([&]() -> sll_status {
        if (!d || !l1_out) return fail(SLL_ERR_INVALID, "null argument");
        *l1_out = sll::simulate_pdmp(d->density, total_time, bins, seed).l1_distance;
        return SLL_OK;
    });
}

sll_status sll_pdmp_discretize(const sll_pdmp* d, const double* eps, int n_eps, int64_t sim_budget,
                               uint64_t seed, double* tv_out) {
    return guarded([&]() -> sll_status {
        if (!d || !eps || !tv_out || n_eps <= 0) return fail(SLL_ERR_INVALID, "null argument");
        std::vector<double> eps_list(eps, eps + n_eps);
        std::vector<double> tv = sll::discretization_check(d->density, eps_list, sim_budget, seed);
        for (int i = 0; i < n_eps; ++i) tv_out[i] = tv[static_cast<std::size_t>(i)];
        return SLL_OK;
    });
}

sll_status sll_pdmp_find_bstar(double lambda, double pi, double cost, int grid_points,
                               sll_bstar_result* out, sll_pdmp** density_out) {
    return guarded([&]() -> sll_status {
        if (!out) return fail(SLL_ERR_INVALID, "null argument");
        sll::BStarResult r = sll::find_b_star(lambda, pi, cost, grid_points > 0 ? grid_points : 16384);
        out->b_star = r.b_star;
        out->p_hat = r.p_hat;
        for (int k = 0; k < 4; ++k) out->beliefs[k] = r.beliefs[k];
        out->welfare = r.welfare;
        out->info_rate = r.info_rate;
        if (density_out) *density_out = new sll_pdmp{std::move(r.density)};
        return SLL_OK;
    });
}

sll_status sll_planner_beta(const sll_env* env, double* buf, int cap, int* len) {
    return guarded([&]() -> sll_status {
        if (!env) return fail(SLL_ERR_INVALID, "null handle");
        sll::PlannerStrategy ps = sll::build_sigma_lambda(env->env);
        return copy_out(ps.beta, buf, cap, len);
    });
}

sll_status sll_planner_hitting(const sll_env* env, double x, double y, int64_t* out) {
    return guarded([&]() -> sll_status {
        if (!env || !out) return fail(SLL_ERR_INVALID, "null argument");
        sll::PlannerStrategy ps = sll::build_sigma_lambda(env->env);
        auto m = sll::hitting_iterations(ps, env->env, x, y);
        *out = m ? *m : INT64_MAX;
        return SLL_OK;
    });
}

sll_status sll_planner_welfare(const sll_env* env, int64_t sim_budget, uint64_t seed,
                               sll_planner_report* out) {
    return guarded([&]() -> sll_status {
        if (!env || !out) return fail(SLL_ERR_INVALID, "null argument");
        sll::PlannerReport r = sll::planner_welfare(env->env, sim_budget, seed);
        out->welfare = r.welfare;
        out->welfare_se = r.welfare_se;
        out->match_rate = r.match_rate;
        out->match_rate_pool = r.match_rate_pool;
        out->info_rate = r.info_rate;
        out->info_rate_se = r.info_rate_se;
        out->mean_gap = r.mean_gap;
        out->m_hit = r.m_hit;
        out->bound_k = r.bound_K;
        out->bound_a = r.bound_a;
        out->bound_eps = r.bound_eps;
        out->gap_bound = r.gap_bound;
        out->aux_gap = r.aux_gap;
        out->welfare_lower_bound = r.welfare_lower_bound;
        out->fitted_a = r.fitted_A;
        return SLL_OK;
    });
}

}  // extern "C"
