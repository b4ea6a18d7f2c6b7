#include "sll/ess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "sll/numeric.hpp"
#include "sll/values.hpp"

namespace sll {

double StateMeasure::total_mass() const {
    double s = 0.0;
    for (double v : w0) s += v;
    for (double v : w1) s += v;
    return s;
}

void StateMeasure::symmetrize() {
    const int M = grid_size;
    for (int i = 0; i < M; ++i) {
        int j = M - 1 - i;
        double a = w0[static_cast<std::size_t>(i)], b = w1[static_cast<std::size_t>(j)];
        double avg = 0.5 * (a + b);
        w0[static_cast<std::size_t>(i)] = avg;
        w1[static_cast<std::size_t>(j)] = avg;
    }
    double m = total_mass();
    if (m > 0.0) {
        for (double& v : w0) v /= m;
        for (double& v : w1) v /= m;
    }
}

StateMeasure StateMeasure::uniform(int grid_size) {
    StateMeasure mu;
    mu.grid_size = grid_size;
    mu.w0.assign(static_cast<std::size_t>(grid_size), 0.5 / grid_size);
    mu.w1.assign(static_cast<std::size_t>(grid_size), 0.5 / grid_size);
    return mu;
}

namespace {

// Pushforward targets for one state: every bin center maps to a pair of
// destination bins with linear mass splitting. Mass is conserved exactly.
struct PushMap {
    std::vector<int> lo;
    std::vector<double> frac;  // share deposited at lo+1
};

PushMap build_push_map(const Dynamics& dyn, Theta theta, int M) {
    PushMap pm;
    pm.lo.resize(static_cast<std::size_t>(M));
    pm.frac.resize(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        double y = dyn.g(theta, (i + 0.5) / M);
        double u = y * M - 0.5;
        int j = static_cast<int>(std::floor(u));
        double f = u - j;
        if (j < 0) {
            j = 0;
            f = 0.0;
        } else if (j >= M - 1) {
            j = M - 2;
            f = 1.0;
        }
        pm.lo[static_cast<std::size_t>(i)] = j;
        pm.frac[static_cast<std::size_t>(i)] = f;
    }
    return pm;
}

void apply_push(const PushMap& pm, std::span<const double> in, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t M = in.size();
    for (std::size_t i = 0; i < M; ++i) {
        double m = in[i];
        if (m == 0.0) continue;
        std::size_t j = static_cast<std::size_t>(pm.lo[i]);
        double f = pm.frac[i];
        out[j] += m * (1.0 - f);
        out[j + 1] += m * f;
    }
}

}  // namespace

StateMeasure psi1_invariant(const Strategy& strategy, const Environment& env, int grid_size,
                            const StateMeasure* warm_start, double tol, std::int64_t max_iter) {
    if (!strategy.symmetric())
        throw std::invalid_argument("psi1_invariant requires a symmetric strategy");
    const int M = grid_size;
    Dynamics dyn(strategy, env);
    PushMap push[2] = {build_push_map(dyn, Theta::zero, M), build_push_map(dyn, Theta::one, M)};
    const double lambda = env.lambda();

    StateMeasure mu = (warm_start && warm_start->grid_size == M) ? *warm_start
                                                                 : StateMeasure::uniform(M);
    std::vector<double> mix0(static_cast<std::size_t>(M)), mix1(static_cast<std::size_t>(M));
    std::vector<double> next0(static_cast<std::size_t>(M)), next1(static_cast<std::size_t>(M));

    double residual = 0.0;
    for (std::int64_t it = 0; it < max_iter; ++it) {
        for (int i = 0; i < M; ++i) {
            std::size_t s = static_cast<std::size_t>(i);
            mix0[s] = (1.0 - lambda) * mu.w0[s] + lambda * mu.w1[s];
            mix1[s] = (1.0 - lambda) * mu.w1[s] + lambda * mu.w0[s];
        }
        apply_push(push[0], mix0, next0);
        apply_push(push[1], mix1, next1);
        residual = 0.0;
        for (int i = 0; i < M; ++i) {
            std::size_t s = static_cast<std::size_t>(i);
            residual = std::max(residual, std::abs(next0[s] - mu.w0[s]));
            residual = std::max(residual, std::abs(next1[s] - mu.w1[s]));
        }
        mu.w0.swap(next0);
        mu.w1.swap(next1);
        if (residual <= tol) {
            mu.symmetrize();
            return mu;
        }
    }
    ConvergenceError err("psi1_invariant: power iteration did not reach tolerance");
    err.residuals = {residual};
    throw err;
}

BeliefSystem psi2_beliefs(const StateMeasure& measure, const Environment& env) {
    const int n = env.n();
    const int M = measure.grid_size;
    const double lambda = env.lambda();
    BeliefSystem bs;
    bs.p.assign(static_cast<std::size_t>(n) + 1, 0.5);
    bs.off_path.assign(static_cast<std::size_t>(n) + 1, false);

    std::vector<double> num(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> den(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < M; ++i) {
        double x = measure.bin_center(i);
        binomial_pmf(n, x, pmf);
        std::size_t s = static_cast<std::size_t>(i);
        for (int k = 0; k <= n; ++k) {
            std::size_t ks = static_cast<std::size_t>(k);
            num[ks] += measure.w1[s] * pmf[ks];
            den[ks] += measure.w0[s] * pmf[ks];
        }
    }
    for (int k = 0; k <= n; ++k) {
        std::size_t ks = static_cast<std::size_t>(k);
        double tot = num[ks] + den[ks];
        if (tot <= 1e-300) {
            bs.off_path[ks] = true;  // zero-probability sample: symmetric default
            bs.p[ks] = 0.5;
            continue;
        }
        double cond = num[ks] / tot;
        bs.p[ks] = (1.0 - lambda) * cond + lambda * (1.0 - cond);
    }
    return bs;
}

Strategy psi3_best_response(const BeliefSystem& beliefs, const Environment& env,
                            const Strategy& incumbent) {
    const double ph = env.p_hat();
    const double tol = 1e-9;
    Strategy s = incumbent;
    s.beliefs = beliefs.p;
    for (std::size_t k = 0; k < s.beta.size(); ++k) {
        double p = beliefs.p[k];
        if (std::abs(p - ph) <= tol || std::abs(p - (1.0 - ph)) <= tol)
            continue;  // indifferent: keep the incumbent acquisition probability
        s.beta[k] = (p > 1.0 - ph && p < ph) ? 1.0 : 0.0;
    }
    return s;
}

double consensus_metric(const StateMeasure& measure) {
    double acc = 0.0;
    for (int i = 0; i < measure.grid_size; ++i) {
        double x = measure.bin_center(i);
        std::size_t s = static_cast<std::size_t>(i);
        acc += (measure.w0[s] + measure.w1[s]) * x * (1.0 - x);
    }
    return acc;
}

bool theorem_consensus_condition(const Environment& env, double* value_out) {
    const double ph = env.p_hat();
    if (ph >= 1.0 - 1e-9)
        throw std::domain_error(
            "consensus condition requires bounded-strength or costly signals (p_hat < 1)");
    const double rho = env.rho();
    const double n = env.n();
    double h0 = env.signals().cdf_mid(Theta::zero, 1.0 - ph);
    double h1 = env.signals().cdf_mid(Theta::one, 1.0 - ph);
    double value = (1.0 - rho + n * rho * h0) * (1.0 - rho + n * rho * h1);
    if (value_out) *value_out = value;
    return value < 1.0;
}

WelfareBreakdown welfare_on_measure(const StateMeasure& measure, const Strategy& strategy,
                                    const Environment& env) {
    const int n = env.n();
    const int M = measure.grid_size;
    const double lambda = env.lambda();
    Dynamics dyn(strategy, env);

    std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
    double match = 0.0, info = 0.0;
    for (int i = 0; i < M; ++i) {
        double x = measure.bin_center(i);
        binomial_pmf(n, x, pmf);
        double match1 = 0.0, match0 = 0.0, acq = 0.0;
        for (int k = 0; k <= n; ++k) {
            std::size_t ks = static_cast<std::size_t>(k);
            match1 += pmf[ks] * dyn.phi(Theta::one, k);
            match0 += pmf[ks] * (1.0 - dyn.phi(Theta::zero, k));
            acq += pmf[ks] * strategy.beta[ks];
        }
        std::size_t s = static_cast<std::size_t>(i);
        // The match term pairs the sampling pool with the next state.
        double m1 = (1.0 - lambda) * measure.w1[s] + lambda * measure.w0[s];
        double m0 = (1.0 - lambda) * measure.w0[s] + lambda * measure.w1[s];
        match += m1 * match1 + m0 * match0;
        info += (measure.w0[s] + measure.w1[s]) * acq;
    }
    return {match - env.cost() * info, match, info};
}

StateMeasure simulate_histogram(const Strategy& strategy, const Environment& env, int grid_size,
                                std::int64_t periods, std::uint64_t seed) {
    Dynamics dyn(strategy, env);
    StateMeasure mu;
    mu.grid_size = grid_size;
    mu.w0.assign(static_cast<std::size_t>(grid_size), 0.0);
    mu.w1.assign(static_cast<std::size_t>(grid_size), 0.0);
    const std::int64_t burnin =
        std::max<std::int64_t>(100000, static_cast<std::int64_t>(10.0 / env.lambda()));
    simulate_chain_visit(dyn, env.lambda(), 0.5, Theta::one, burnin + periods, seed,
                         [&](std::int64_t t, const PopulationState& s) {
                             if (t <= burnin) return;
                             int b = std::clamp(static_cast<int>(s.x * grid_size), 0, grid_size - 1);
                             (s.theta == Theta::one ? mu.w1 : mu.w0)[static_cast<std::size_t>(b)] += 1.0;
                         });
    double tot = mu.total_mass();
    for (double& v : mu.w0) v /= tot;
    for (double& v : mu.w1) v /= tot;
    return mu;
}

double total_variation(const StateMeasure& a, const StateMeasure& b) {
    if (a.grid_size != b.grid_size)
        throw std::invalid_argument("total_variation: grid sizes differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.w0.size(); ++i)
        acc += std::abs(a.w0[i] - b.w0[i]) + std::abs(a.w1[i] - b.w1[i]);
    return 0.5 * acc;
}

// ---------------------------------------------------------------------------
// Equilibrium solver.
//
// Symmetric equilibria are searched over threshold regimes: samples outside a
// frontier pair herd on the majority action, samples strictly inside acquire,
// and the frontier pair's acquisition probability is bisected until its
// stationary belief pins to the indifference threshold. The sweep runs from
// the outermost frontier inward and returns the first regime whose solved
// beliefs satisfy the optimality conditions everywhere; non-threshold
// (irregular) equilibria are reported as non-convergence rather than forced.

namespace {

struct PairSpec {
    int k_lo, k_hi;
};

struct Evaluation {
    StateMeasure mu;
    BeliefSystem beliefs;
};

class EssSweep {
  public:
    EssSweep(const Environment& env, const EssOptions& options)
        : env_(env), opt_(options), ph_(env.p_hat()), n_(env.n()) {
        for (int k_hi = n_; 2 * k_hi > n_; --k_hi) pairs_.push_back({n_ - k_hi, k_hi});
        psi1_tol_ = std::clamp(1e-10 * env.lambda(), 1e-15, 1e-13);
        warm_ = StateMeasure::uniform(opt_.grid_size);
    }

    EssResult run() {
        // Frontier n_+1 means no herding at all (full acquisition).
        for (int frontier = n_ + 1; 2 * frontier > n_; --frontier) {
            std::optional<EssResult> r = try_frontier(frontier);
            if (r) return *r;
            if (calls_ >= opt_.budget) break;
        }
        ConvergenceError err(
            "solve_ess: no threshold regime satisfies the optimality conditions within budget (" +
            std::to_string(calls_) + " measure solves; best residual " +
            std::to_string(best_residual_) + ")");
        err.residuals = residual_history_;
        throw err;
    }

  private:
    // Strategy for a frontier regime: herd outside, acquire inside, beta_f at
    // the frontier pair. Herding pairs carry majority-side placeholder
    // beliefs; the frontier carries the pin hypothesis. Acquiring pairs use
    // the latest measured beliefs so informed cutoffs stay current.
    Strategy regime_strategy(int frontier, double beta_f) const {
        Strategy s;
        s.beta.assign(static_cast<std::size_t>(n_) + 1, 1.0);
        s.beliefs = last_beliefs_;
        s.tie.assign(static_cast<std::size_t>(n_) + 1, 0.5);
        for (const PairSpec& p : pairs_) {
            double b, belief_hi;
            if (p.k_hi > frontier) {
                b = 0.0;
                belief_hi = 0.99;
            } else if (p.k_hi == frontier) {
                b = beta_f;
                belief_hi = ph_;
            } else {
                b = 1.0;
                belief_hi = std::clamp(last_beliefs_[static_cast<std::size_t>(p.k_hi)],
                                       1.0 - ph_ + 1e-9, ph_ - 1e-9);
            }
            s.beta[static_cast<std::size_t>(p.k_hi)] = b;
            s.beta[static_cast<std::size_t>(p.k_lo)] = b;
            s.beliefs[static_cast<std::size_t>(p.k_hi)] = belief_hi;
            s.beliefs[static_cast<std::size_t>(p.k_lo)] = 1.0 - belief_hi;
        }
        if (n_ % 2 == 0) s.beliefs[static_cast<std::size_t>(n_ / 2)] = 0.5;
        return s;
    }

    Evaluation evaluate(const Strategy& sigma) {
        ++calls_;
        if (calls_ > opt_.budget) {
            ConvergenceError err("solve_ess: measure-solve budget exhausted (" +
                                 std::to_string(opt_.budget) + ")");
            err.residuals = residual_history_;
            throw err;
        }
        Evaluation ev;
        ev.mu = psi1_invariant(sigma, env_, opt_.grid_size, &warm_, psi1_tol_, 2000000);
        warm_ = ev.mu;
        ev.beliefs = psi2_beliefs(ev.mu, env_);
        // Damped refresh of the acquiring pairs' cutoff beliefs.
        for (std::size_t k = 0; k < last_beliefs_.size(); ++k)
            last_beliefs_[k] += opt_.damping * (ev.beliefs.p[k] - last_beliefs_[k]);
        return ev;
    }

    // Optimality-condition residual of a candidate (distance to consistency).
    double residual_of(const Strategy& sigma, const BeliefSystem& beliefs) const {
        double max_viol = 0.0;
        for (const PairSpec& p : pairs_) {
            double beta = sigma.beta[static_cast<std::size_t>(p.k_hi)];
            double pk = beliefs.p[static_cast<std::size_t>(p.k_hi)];
            double inside = std::min(pk - (1.0 - ph_), ph_ - pk);  // > 0 strictly inside
            double viol;
            if (beta >= 1.0 - 1e-12)
                viol = std::max(0.0, -inside);
            else if (beta <= 1e-12)
                viol = std::max(0.0, inside);
            else
                viol = std::min(std::abs(pk - ph_), std::abs(pk - (1.0 - ph_)));
            max_viol = std::max(max_viol, viol);
        }
        return max_viol;
    }

    std::optional<EssResult> finalize(Strategy sigma, Evaluation ev) {
        // Re-evaluate with the measured beliefs wired into the strategy, so
        // the returned object is self-consistent; repeat while the informed
        // cutoffs keep reclassifying signal atoms.
        for (int pass = 0; pass < 5; ++pass) {
            Strategy candidate = sigma;
            candidate.beliefs = ev.beliefs.p;
            Evaluation ev2 = evaluate(candidate);
            double shift = 0.0;
            for (std::size_t k = 0; k < ev2.beliefs.p.size(); ++k)
                shift = std::max(shift, std::abs(ev2.beliefs.p[k] - ev.beliefs.p[k]));
            sigma = candidate;
            ev = std::move(ev2);
            if (shift <= 1e-10) break;
        }
        double resid = residual_of(sigma, ev.beliefs);
        residual_history_.push_back(resid);
        best_residual_ = std::min(best_residual_, resid);
        if (resid > opt_.residual_target) return std::nullopt;

        EssResult r;
        sigma.beliefs = ev.beliefs.p;
        r.strategy = sigma;
        r.measure = ev.mu;
        r.beliefs = ev.beliefs;
        r.residual = resid;
        r.converged = true;
        r.iterations = calls_;
        WelfareBreakdown wb = welfare_on_measure(ev.mu, sigma, env_);
        r.welfare = wb.welfare;
        r.match_rate = wb.match_rate;
        r.info_rate = wb.info_rate;
        r.consensus = consensus_metric(ev.mu);
        r.regular = ev.beliefs.p[static_cast<std::size_t>(n_ - 1)] >= 1.0 - ph_ - 1e-9;
        r.residual_history = residual_history_;
        return r;
    }

    std::optional<EssResult> try_frontier(int frontier) {
        if (frontier == n_ + 1) {
            // Full acquisition everywhere; finalize iterates the measured
            // beliefs (hence the informed cutoffs) to their fixed point.
            Strategy sigma = Strategy::full_acquisition(n_);
            sigma.beliefs = last_beliefs_;
            return finalize(sigma, evaluate(sigma));
        }

        auto gap_at = [&](double b) {
            Evaluation ev = evaluate(regime_strategy(frontier, b));
            double g = ev.beliefs.p[static_cast<std::size_t>(frontier)] - ph_;
            return std::make_pair(g, std::move(ev));
        };

        auto [gap_hi, ev_hi] = gap_at(1.0);
        if (gap_hi <= 0.0) {
            // Acquiring at the frontier keeps its belief inside the band:
            // candidate without an interior pin.
            std::optional<EssResult> r = finalize(regime_strategy(frontier, 1.0), std::move(ev_hi));
            if (r) return r;
        }
        auto [gap_lo, ev_lo] = gap_at(0.0);
        if (gap_lo > 0.0 && gap_hi > 0.0) {
            // Strict herding at the frontier is consistent for this pair; see
            // whether the inner pairs line up as-is, otherwise move the
            // frontier inward and re-check there.
            std::optional<EssResult> r = finalize(regime_strategy(frontier, 0.0), std::move(ev_lo));
            if (r) return r;
            return std::nullopt;
        }
        if (gap_lo <= 0.0 && gap_hi <= 0.0) return std::nullopt;

        // Bracketed: bisect the frontier acquisition probability to pin the
        // frontier belief at the threshold.
        double b_neg = gap_lo <= 0.0 ? 0.0 : 1.0;  // endpoint with gap <= 0
        double b_pos = gap_lo <= 0.0 ? 1.0 : 0.0;
        Evaluation ev = gap_lo <= 0.0 ? std::move(ev_hi) : std::move(ev_lo);
        double b_mid = 0.5;
        for (int it = 0; it < 60; ++it) {
            b_mid = 0.5 * (b_neg + b_pos);
            auto [g, ev_mid] = gap_at(b_mid);
            ev = std::move(ev_mid);
            if (std::abs(g) <= opt_.pin_tol || std::abs(b_pos - b_neg) < 1e-13) break;
            (g <= 0.0 ? b_neg : b_pos) = b_mid;
        }
        return finalize(regime_strategy(frontier, b_mid), std::move(ev));
    }

    const Environment& env_;
    EssOptions opt_;
    double ph_;
    int n_;
    double psi1_tol_ = 1e-13;
    std::vector<PairSpec> pairs_;
    StateMeasure warm_;
    std::vector<double> last_beliefs_ = std::vector<double>(static_cast<std::size_t>(n_) + 1, 0.5);
    std::vector<double> residual_history_;
    double best_residual_ = 1.0;
    int calls_ = 0;
};

}  // namespace

EssResult solve_ess(const Environment& env, const EssOptions& options) {
    EssOptions opt = options;
    if (opt.init) {
        opt.init->validate();
        if (opt.init->n() != env.n())
            throw std::invalid_argument("solve_ess: init strategy size mismatch");
    }
    EssSweep sweep(env, opt);
    return sweep.run();
}

}  // namespace sll
