#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sll/strategy.hpp"

namespace sll {

// Dictated strategy: acquisition probability rises linearly from lambda/h at
// unanimous samples to 1 at balanced samples; uninformed agents copy the
// sample majority, informed agents follow their signal regardless of the
// sample. h is the informed accuracy 1 - H_1(1/2) under the mid-value
// convention. Requires lambda < h.
struct PlannerStrategy {
    double lambda = 0.0;
    int n = 0;
    double h = 0.0;
    std::vector<double> beta;
    Strategy strategy;  // full strategy object (majority-following beliefs)
};

PlannerStrategy build_sigma_lambda(const Environment& env);

// Iterations of the favorable-state map g_1 needed to lift the prevalence
// from x to at least y; nullopt when the cap (1e8) is exceeded.
std::optional<std::int64_t> hitting_iterations(const PlannerStrategy& strategy,
                                               const Environment& env, double x, double y);

struct PlannerReport {
    double welfare = 0.0;        // simulated, matched against chi
    double welfare_se = 0.0;
    double match_rate = 0.0;     // I1: scored against the current cohort
    double match_rate_pool = 0.0;  // I0: scored against the sampling pool
    double info_rate = 0.0;
    double info_rate_se = 0.0;
    double mean_gap = 0.0;       // simulated E|theta - x|
    std::int64_t m_hit = 0;      // iterations from 0 to 1 - K lambda
    double bound_K = 0.0, bound_a = 0.0, bound_eps = 0.0;
    double gap_bound = 0.0;      // lambda (K + m)
    double aux_gap = 0.0;        // exact geometric-chain gap (sharper than gap_bound)
    double welfare_lower_bound = 0.0;
    double fitted_A = 0.0;       // (1 - W) / (lambda (1 - ln lambda))
};

PlannerReport planner_welfare(const Environment& env, std::int64_t sim_budget, std::uint64_t seed);

}  // namespace sll
