#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sll/dynamics.hpp"
#include "sll/strategy.hpp"

namespace sll {

// Discretized symmetric distribution over (theta, x): M equispaced bins with
// centers (i + 1/2) / M and one weight row per state.
struct StateMeasure {
    int grid_size = 0;
    std::vector<double> w0, w1;  // mass per bin, states 0 and 1

    double bin_center(int i) const { return (i + 0.5) / grid_size; }
    double total_mass() const;
    void symmetrize();  // average with the (theta,x) -> (1-theta,1-x) image
    static StateMeasure uniform(int grid_size);
};

struct BeliefSystem {
    std::vector<double> p;              // p_k, length n+1
    std::vector<bool> off_path;         // true where the sample has zero probability
};

struct EssResult {
    Strategy strategy;
    StateMeasure measure;
    BeliefSystem beliefs;
    double welfare = 0.0;     // w* = match rate - cost * info rate
    double match_rate = 0.0;  // kappa*
    double info_rate = 0.0;
    double consensus = 0.0;   // integral of x(1-x) d mu
    double residual = 0.0;    // equilibrium-condition gap at exit
    bool converged = false;
    bool regular = true;      // p_{n-1} >= 1 - p_hat
    int iterations = 0;
    std::vector<double> residual_history;
};

// Invariant measure of the bin-level transition operator induced by the
// strategy: mix states with lambda, push bin centers through g, deposit mass
// by linear interpolation between neighboring bins. Power iteration to the
// given sup-norm residual, then symmetrization.
StateMeasure psi1_invariant(const Strategy& strategy, const Environment& env, int grid_size,
                            const StateMeasure* warm_start = nullptr, double tol = 1e-12,
                            std::int64_t max_iter = 1000000);

// Exact Bayes on the binned measure: p_k from the likelihood ratio of the
// sample-count integrals, mixed one period ahead with lambda. Zero-probability
// samples fall back to 1/2 and are flagged.
BeliefSystem psi2_beliefs(const StateMeasure& measure, const Environment& env);

// Optimal response to a belief system: acquire strictly inside the
// indifference band, herd strictly outside, keep the incumbent acquisition
// probability at exact indifference.
Strategy psi3_best_response(const BeliefSystem& beliefs, const Environment& env,
                            const Strategy& incumbent);

struct EssOptions {
    int grid_size = 4096;
    double damping = 0.3;
    int budget = 800;              // invariant-measure solves
    double pin_tol = 1e-9;         // belief gap at pinned samples
    double residual_target = 1e-8;
    std::optional<Strategy> init;
};

// Damped fixed-point iteration over (measure, beliefs, strategy); samples at
// the boundary of the indifference band get their acquisition probability
// bisected until the stationary belief pins to the threshold.
EssResult solve_ess(const Environment& env, const EssOptions& options = {});

double consensus_metric(const StateMeasure& measure);

// Evaluates (1 - rho + n rho H0(1-p_hat)) (1 - rho + n rho H1(1-p_hat)) < 1
// with the mid-value cdf convention. Requires p_hat < 1.
bool theorem_consensus_condition(const Environment& env, double* value_out = nullptr);

struct WelfareBreakdown {
    double welfare;
    double match_rate;
    double info_rate;
};

// Welfare integrals on the grid, with the one-period state mixing applied to
// the match term.
WelfareBreakdown welfare_on_measure(const StateMeasure& measure, const Strategy& strategy,
                                    const Environment& env);

// Binned histogram of a long simulation run; comparison oracle for psi1.
StateMeasure simulate_histogram(const Strategy& strategy, const Environment& env, int grid_size,
                                std::int64_t periods, std::uint64_t seed);

double total_variation(const StateMeasure& a, const StateMeasure& b);

}  // namespace sll
