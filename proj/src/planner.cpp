#include "sll/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sll/dynamics.hpp"
#include "sll/numeric.hpp"
#include "sll/rng.hpp"

namespace sll {

namespace {

// Response tables phi_theta(k) for the dictated rule: minority samples play
// the majority action 0 when uninformed, so only acquirers contribute; the
// mirror holds above n/2.
void planner_phi(const Environment& env, const std::vector<double>& beta, std::vector<double>& phi0,
                 std::vector<double>& phi1) {
    const int n = env.n();
    double follow1_in_1 = env.signals().prob_above(Theta::one, 0.5, 0.5);
    double follow1_in_0 = env.signals().prob_above(Theta::zero, 0.5, 0.5);
    phi0.assign(static_cast<std::size_t>(n) + 1, 0.0);
    phi1.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        std::size_t ks = static_cast<std::size_t>(k);
        double b = beta[ks];
        double uninformed;
        if (2 * k < n)
            uninformed = 0.0;
        else if (2 * k > n)
            uninformed = 1.0;
        else
            uninformed = 0.5;
        phi1[ks] = b * follow1_in_1 + (1.0 - b) * uninformed;
        phi0[ks] = b * follow1_in_0 + (1.0 - b) * uninformed;
    }
}

double dynamics_derivative(const Dynamics& dyn, Theta theta, double x) {
    const int n = dyn.n();
    double pmf[32];
    binomial_pmf(n - 1, x, {pmf, static_cast<std::size_t>(n)});
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
        acc += pmf[k] * (dyn.phi(theta, k + 1) - dyn.phi(theta, k));
    return (1.0 - dyn.rho()) + dyn.rho() * n * acc;
}

}  // namespace

PlannerStrategy build_sigma_lambda(const Environment& env) {
    const int n = env.n();
    if (n < 2) throw std::invalid_argument("the dictated rule needs a sample size of at least 2");
    PlannerStrategy ps;
    ps.lambda = env.lambda();
    ps.n = n;
    ps.h = 1.0 - env.signals().cdf_mid(Theta::one, 0.5);
    if (!(ps.lambda < ps.h))
        throw std::invalid_argument("switch probability must stay below the informed accuracy h");

    const double floor = ps.lambda / ps.h;
    const int mid = n / 2;
    ps.beta.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        int m = std::min(k, n - k);
        ps.beta[static_cast<std::size_t>(k)] =
            floor + (1.0 - floor) * static_cast<double>(m) / static_cast<double>(mid);
    }

    // Strategy view: majority-following beliefs just off 1/2 reproduce the
    // rule exactly for signal distributions with no atom at 1/2.
    ps.strategy.beta = ps.beta;
    ps.strategy.beliefs.assign(static_cast<std::size_t>(n) + 1, 0.5);
    ps.strategy.tie.assign(static_cast<std::size_t>(n) + 1, 0.5);
    for (int k = 0; k <= n; ++k) {
        double side = 2 * k < n ? -1e-9 : (2 * k > n ? 1e-9 : 0.0);
        ps.strategy.beliefs[static_cast<std::size_t>(k)] = 0.5 + side;
    }
    return ps;
}

std::optional<std::int64_t> hitting_iterations(const PlannerStrategy& strategy,
                                               const Environment& env, double x, double y) {
    if (x < 0.0 || y > 1.0 || x > 1.0 || y < 0.0)
        throw std::invalid_argument("prevalence outside [0,1]");
    if (x >= y) return 0;
    std::vector<double> phi0, phi1;
    planner_phi(env, strategy.beta, phi0, phi1);
    Dynamics dyn(env.n(), env.rho(), std::move(phi0), std::move(phi1));
    double v = x;
    for (std::int64_t l = 1; l <= 100000000; ++l) {
        v = dyn.g(Theta::one, v);
        if (v >= y) return l;
    }
    return std::nullopt;
}

PlannerReport planner_welfare(const Environment& env, std::int64_t sim_budget, std::uint64_t seed) {
    PlannerStrategy ps = build_sigma_lambda(env);
    const int n = env.n();
    const double lambda = env.lambda();
    const double rho = env.rho();
    const double c = env.cost();
    const double h = ps.h;

    std::vector<double> phi0, phi1;
    planner_phi(env, ps.beta, phi0, phi1);
    Dynamics dyn(n, rho, phi0, phi1);

    // Constants (a, eps, K) for the drift bounds, located on the vanishing-
    // switching limit of the dynamics: beta floor 0, same linear profile.
    std::vector<double> beta0(ps.beta.size());
    const int mid = n / 2;
    for (int k = 0; k <= n; ++k)
        beta0[static_cast<std::size_t>(k)] =
            static_cast<double>(std::min(k, n - k)) / static_cast<double>(mid);
    std::vector<double> lphi0, lphi1;
    planner_phi(env, beta0, lphi0, lphi1);
    Dynamics limit_dyn(n, rho, std::move(lphi0), std::move(lphi1));

    PlannerReport rep;
    {
        double best_score = -1.0;
        for (int ia = 1; ia <= 18; ++ia) {
            double a = (2.0 * h - 1.0) / 2.0 * (ia / 20.0);
            double eps = 0.0;
            for (int ix = 1; ix <= 400; ++ix) {
                double x = 0.5 * ix / 400.0;
                if (dynamics_derivative(limit_dyn, Theta::one, x) > 1.0 + 2.0 * a &&
                    dynamics_derivative(limit_dyn, Theta::zero, x) < 1.0 - 2.0 * a)
                    eps = x;
                else
                    break;
            }
            if (a * eps > best_score) {
                best_score = a * eps;
                rep.bound_a = a;
                rep.bound_eps = eps;
            }
        }
        rep.bound_K = 1.0 / (2.0 * rep.bound_a * h);
    }

    auto m_of = [&](double from, double to) -> std::int64_t {
        double v = from;
        for (std::int64_t l = 1; l <= 100000000; ++l) {
            v = dyn.g(Theta::one, v);
            if (v >= to) return l;
        }
        return -1;
    };
    rep.m_hit = m_of(0.0, 1.0 - rep.bound_K * lambda);
    if (rep.m_hit < 0) throw ConvergenceError("planner: hitting iteration cap exceeded");
    rep.gap_bound = lambda * (rep.bound_K + static_cast<double>(rep.m_hit));

    // Exact gap of the auxiliary chain that restarts at the wrong consensus
    // on every switch and climbs through g_1 in between.
    {
        double aux = 0.0;
        double v = 0.0;
        double wl = lambda;  // lambda (1-lambda)^l
        for (std::int64_t l = 0; wl > 1e-16; ++l) {
            aux += wl * (1.0 - v);
            v = dyn.g(Theta::one, v);
            wl *= 1.0 - lambda;
        }
        rep.aux_gap = aux;
    }

    const double beta_floor = ps.beta[0];
    double lb = 1.0 - rep.aux_gap * (1.0 + c * std::tgamma(n + 2.0)) - 2.0 * c * beta_floor;
    if (rho < 1.0) lb -= 2.0 * lambda * (1.0 - rho) / rho;
    rep.welfare_lower_bound = lb;

    // Direct long-run simulation, scored per period against the current
    // cohort's action share.
    const std::int64_t burnin = static_cast<std::int64_t>(10.0 / lambda);
    const std::int64_t horizon =
        std::max<std::int64_t>(std::max<std::int64_t>(sim_budget, 1000000),
                               static_cast<std::int64_t>(100.0 / lambda));
    const int batches = 64;
    const std::int64_t batch_len = std::max<std::int64_t>(horizon / batches, 1);
    std::vector<double> w_batch, info_batch;
    double sum_match1 = 0.0, sum_match0 = 0.0, sum_info = 0.0, sum_gap = 0.0;
    double bw = 0.0, binfo = 0.0;
    std::int64_t bcount = 0, count = 0;
    double prev_x = 0.0;
    double x_min = 1.0, x_max = 0.0;
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1);

    simulate_chain_visit(dyn, lambda, 0.0, Theta::zero, burnin + horizon, seed,
                         [&](std::int64_t t, const PopulationState& s) {
                             if (t <= burnin) {
                                 prev_x = s.x;
                                 return;
                             }
                             double chi = (s.x - (1.0 - rho) * prev_x) / rho;
                             double m1 = s.theta == Theta::one ? chi : 1.0 - chi;
                             double m0 = s.theta == Theta::one ? s.x : 1.0 - s.x;
                             binomial_pmf(n, prev_x, pmf);
                             double info = 0.0;
                             for (int k = 0; k <= n; ++k)
                                 info += pmf[static_cast<std::size_t>(k)] *
                                         ps.beta[static_cast<std::size_t>(k)];
                             sum_match1 += m1;
                             sum_match0 += m0;
                             sum_info += info;
                             sum_gap += 1.0 - m0;
                             bw += m1 - c * info;
                             binfo += info;
                             ++bcount;
                             ++count;
                             x_min = std::min(x_min, s.x);
                             x_max = std::max(x_max, s.x);
                             if (bcount == batch_len) {
                                 w_batch.push_back(bw / static_cast<double>(bcount));
                                 info_batch.push_back(binfo / static_cast<double>(bcount));
                                 bw = binfo = 0.0;
                                 bcount = 0;
                             }
                             prev_x = s.x;
                         });

    if (x_max - x_min < 1e-3)
        throw ConvergenceError("planner: prevalence did not move despite state switches");

    rep.match_rate = sum_match1 / static_cast<double>(count);
    rep.match_rate_pool = sum_match0 / static_cast<double>(count);
    rep.info_rate = sum_info / static_cast<double>(count);
    rep.mean_gap = sum_gap / static_cast<double>(count);
    rep.welfare = rep.match_rate - c * rep.info_rate;
    BatchStats wstats = batch_means(w_batch);
    rep.welfare_se = wstats.se;
    BatchStats istats = batch_means(info_batch);
    rep.info_rate_se = istats.se;
    rep.fitted_A = (1.0 - rep.welfare) / (lambda * (1.0 - std::log(lambda)));
    return rep;
}

}  // namespace sll
