#include "sll/smallsample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sll/dynamics.hpp"
#include "sll/numeric.hpp"
#include "sll/parallel.hpp"
#include "sll/rng.hpp"
#include "sll/values.hpp"

namespace sll {

namespace {

constexpr int kBins = 4096;
constexpr int kBatches = 64;

int bin_of(double x) {
    int b = static_cast<int>(x * kBins);
    return std::clamp(b, 0, kBins - 1);
}

// Expected per-period payoff components for an agent sampling from pool x
// under current state theta.
struct PeriodScore {
    double match;
    double info;
};

PeriodScore score_period(const Dynamics& dyn, Theta theta, double pool_x,
                         const std::vector<double>& beta) {
    const int n = dyn.n();
    double pmf[32];
    binomial_pmf(n, pool_x, {pmf, static_cast<std::size_t>(n) + 1});
    PeriodScore s{0.0, 0.0};
    for (int k = 0; k <= n; ++k) {
        double m = theta == Theta::one ? dyn.phi(Theta::one, k) : 1.0 - dyn.phi(Theta::zero, k);
        s.match += pmf[k] * m;
        s.info += pmf[k] * beta[static_cast<std::size_t>(k)];
    }
    return s;
}

// Long-run estimate of the unanimous-sample belief and welfare under the
// strategy, via a binned histogram of (theta_t, x_t) and the exact
// likelihood-ratio statistic on the bins.
struct N2Estimate {
    double p2, p2_se;
    double welfare, welfare_se;
};

N2Estimate estimate_n2(const Environment& env, const Strategy& strategy, std::int64_t periods,
                       std::uint64_t seed) {
    Dynamics dyn(strategy, env);
    const double lambda = env.lambda();
    const std::int64_t burnin = std::max<std::int64_t>(100000, static_cast<std::int64_t>(10.0 / lambda));
    const std::int64_t batch_len = std::max<std::int64_t>(periods / kBatches, 1);

    std::vector<double> hist[2];
    hist[0].assign(kBins, 0.0);
    hist[1].assign(kBins, 0.0);
    std::vector<double> bhist[2];
    std::vector<double> p2_batches, w_batches;
    double w_sum = 0.0;
    std::int64_t w_count = 0;
    double bw_sum = 0.0;
    std::int64_t bw_count = 0;
    bhist[0].assign(kBins, 0.0);
    bhist[1].assign(kBins, 0.0);

    auto p2_from = [&](const std::vector<double>* h) {
        double num = 0.0, den = 0.0;
        for (int i = 0; i < kBins; ++i) {
            double x = (i + 0.5) / kBins;
            double w = x * x;
            num += h[1][static_cast<std::size_t>(i)] * w;
            den += h[0][static_cast<std::size_t>(i)] * w;
        }
        if (num + den <= 0.0) return 0.5;
        double cond = num / (num + den);
        return (1.0 - lambda) * cond + lambda * (1.0 - cond);
    };

    double prev_x = 0.5;
    bool past_burnin = false;
    simulate_chain_visit(dyn, lambda, 0.5, Theta::one, burnin + periods, seed,
                         [&](std::int64_t t, const PopulationState& s) {
                             if (t <= burnin) {
                                 prev_x = s.x;
                                 if (t == burnin) past_burnin = true;
                                 return;
                             }
                             (void)past_burnin;
                             PeriodScore sc = score_period(dyn, s.theta, prev_x, strategy.beta);
                             double payoff = sc.match - env.cost() * sc.info;
                             w_sum += payoff;
                             ++w_count;
                             bw_sum += payoff;
                             ++bw_count;
                             int b = bin_of(s.x);
                             int th = s.theta == Theta::one ? 1 : 0;
                             hist[th][static_cast<std::size_t>(b)] += 1.0;
                             bhist[th][static_cast<std::size_t>(b)] += 1.0;
                             if ((t - burnin) % batch_len == 0) {
                                 p2_batches.push_back(p2_from(bhist));
                                 w_batches.push_back(bw_sum / static_cast<double>(bw_count));
                                 bhist[0].assign(kBins, 0.0);
                                 bhist[1].assign(kBins, 0.0);
                                 bw_sum = 0.0;
                                 bw_count = 0;
                             }
                             prev_x = s.x;
                         });

    N2Estimate est;
    est.p2 = p2_from(hist);
    BatchStats ps = batch_means(p2_batches);
    est.p2_se = ps.se;
    est.welfare = w_sum / static_cast<double>(w_count);
    BatchStats ws = batch_means(w_batches);
    est.welfare_se = ws.se;
    return est;
}

}  // namespace

N1Equilibrium solve_n1(const Environment& env) {
    if (env.n() != 1) throw std::invalid_argument("solve_n1 requires n = 1");
    const double c = env.cost();
    const double ph = env.p_hat();
    const double L = env.effective_lambda();

    N1Equilibrium eq;
    eq.lambda_star = c > 0.0 ? c / (2.0 * (ph + c) - 1.0) : 0.0;

    if (c > 0.0 && L <= eq.lambda_star) {
        eq.full_acquisition = false;
        eq.beta = L * (2.0 * ph - 1.0) / (c * (1.0 - 2.0 * L));
        eq.p1 = ph;
        eq.welfare = ph;
    } else {
        eq.full_acquisition = true;
        eq.beta = 1.0;
        // p1 = (1-L) v(p1) + L (1 - v(p1)) has a unique root in [1/2, p_hat).
        auto f = [&](double p) {
            double v = value_informed(p, env.signals());
            return (1.0 - L) * v + L * (1.0 - v) - p;
        };
        eq.p1 = bisect_root(f, 0.5, ph, 1e-13, 200);
        eq.welfare = value_informed(eq.p1, env.signals()) - c;
    }
    return eq;
}

Strategy n1_strategy(const Environment& env, const N1Equilibrium& eq) {
    (void)env;
    Strategy s;
    s.beta = {eq.beta, eq.beta};
    s.beliefs = {1.0 - eq.p1, eq.p1};
    s.tie = {0.5, 0.5};
    return s;
}

Strategy n2_strategy(const Environment& env, double beta_unanimous, double p2) {
    (void)env;
    Strategy s;
    s.beta = {beta_unanimous, 1.0, beta_unanimous};
    s.beliefs = {1.0 - p2, 0.5, p2};
    s.tie = {0.5, 0.5, 0.5};
    return s;
}

N2Diagnostics n2_absorption_test(const Environment& env, double phi1, double eps,
                                 std::int64_t paths, std::int64_t horizon, std::uint64_t seed) {
    if (env.n() != 2) throw std::invalid_argument("n2_absorption_test requires n = 2");
    if (phi1 < 0.0 || phi1 > 1.0) throw std::invalid_argument("phi1 outside [0,1]");
    const double phi0 = 1.0 - phi1;
    const double rho = env.rho();
    const double lambda = env.lambda();

    N2Diagnostics d;
    d.drift = std::log(2.0 * phi1) + std::log(2.0 * phi0);

    const int nblocks = 64;
    std::vector<std::int64_t> absorbed(nblocks, 0);
    parallel_blocks(nblocks, [&](int b) {
        std::int64_t lo = paths * b / nblocks, hi = paths * (b + 1) / nblocks;
        std::int64_t count = 0;
        for (std::int64_t p = lo; p < hi; ++p) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
            double x = 0.5;
            Theta theta = rng.bernoulli(0.5) ? Theta::one : Theta::zero;
            for (std::int64_t t = 0; t < horizon; ++t) {
                if (rng.bernoulli(lambda)) theta = flip(theta);
                double ph = theta == Theta::one ? phi1 : phi0;
                x = (1.0 - rho) * x + rho * (x * x + 2.0 * x * (1.0 - x) * ph);
            }
            if (x <= eps || x >= 1.0 - eps) ++count;
        }
        absorbed[static_cast<std::size_t>(b)] = count;
    });
    std::int64_t total = 0;
    for (std::int64_t c : absorbed) total += c;
    d.absorption_fraction = static_cast<double>(total) / static_cast<double>(paths);
    return d;
}

N2Diagnostics solve_n2(const Environment& env, std::int64_t sim_budget, std::uint64_t seed) {
    if (env.n() != 2) throw std::invalid_argument("solve_n2 requires n = 2");
    const double ph = env.p_hat();
    const std::uint64_t eval_seed = derive_seed(seed, 1);  // common random numbers

    auto evaluate = [&](double beta_u, double belief) {
        return estimate_n2(env, n2_strategy(env, beta_u, belief), sim_budget, eval_seed);
    };

    N2Diagnostics d;
    {
        Dynamics dyn(n2_strategy(env, 0.0, ph), env);
        d.drift = std::log(2.0 * dyn.phi(Theta::one, 1)) + std::log(2.0 * dyn.phi(Theta::zero, 1));
    }

    // Full-acquisition check first: if unanimous beliefs stay interior even
    // at beta = 1, that is the equilibrium.
    N2Estimate at_one = evaluate(1.0, ph);
    if (at_one.p2 <= ph) {
        double belief = at_one.p2;
        N2Estimate est = at_one;
        for (int it = 0; it < 3; ++it) {  // self-consistent informed cutoffs
            est = evaluate(1.0, belief);
            if (std::abs(est.p2 - belief) < 1e-4) break;
            belief = est.p2;
        }
        d.full_acquisition = true;
        d.beta_star = 1.0;
        d.p2 = est.p2;
        d.p2_se = est.p2_se;
        d.welfare = est.welfare;
        d.welfare_se = est.welfare_se;
        d.bracket_lo = d.bracket_hi = 1.0;
        return d;
    }

    // Interior regime: the unanimous-sample belief increases with beta over
    // the practical range, so bracket downward from 1.
    double hi = 1.0, hi_p2 = at_one.p2;
    double lo = 0.02;
    N2Estimate at_lo = evaluate(lo, ph);
    while (at_lo.p2 > ph && lo > 2e-4) {
        lo *= 0.25;
        at_lo = evaluate(lo, ph);
    }
    if (at_lo.p2 > ph) {
        ConvergenceError err(
            "solve_n2: belief exceeds the indifference threshold across the whole beta bracket");
        err.residuals = {lo, at_lo.p2, hi, hi_p2};
        throw err;
    }

    N2Estimate best = at_lo;
    double beta = lo;
    for (int it = 0; it < 40 && hi - lo > 1e-5; ++it) {
        beta = 0.5 * (lo + hi);
        N2Estimate est = evaluate(beta, ph);
        best = est;
        if (std::abs(est.p2 - ph) <= 1e-4) break;
        if (est.p2 > ph)
            hi = beta;
        else
            lo = beta;
    }

    d.full_acquisition = false;
    d.beta_star = beta;
    d.p2 = best.p2;
    d.p2_se = best.p2_se;
    d.welfare = best.welfare;
    d.welfare_se = best.welfare_se;
    d.bracket_lo = lo;
    d.bracket_hi = hi;
    return d;
}

}  // namespace sll
