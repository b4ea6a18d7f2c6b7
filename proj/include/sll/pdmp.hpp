#pragma once

#include <cstdint>
#include <vector>

#include "sll/environment.hpp"

namespace sll {

// Continuous-time three-sample game at unit replacement rate: herding at
// unanimous samples, acquisition with probability b at mixed samples,
// signal-following when informed. The drift of the prevalence is the cubic
// h_theta(x) = x(1-x)(x(2-3b) + 3b pi_theta - 1).
struct PdmpConfig {
    double lambda;  // state switch rate per unit time
    double pi;      // binary signal precision
    double b;       // acquisition probability at mixed samples

    // Valid density branch: h0 < 0 < h1 on (0,1), i.e. b in [2/3, 1/(3(1-pi))).
    double b_max() const { return 1.0 / (3.0 * (1.0 - pi)); }
    void validate() const;
};

double pdmp_drift(const PdmpConfig& config, Theta theta, double x);

// Invariant densities of the prevalence in each state, from the closed-form
// solution of the stationary mass balance. The exponent integral is evaluated
// by exact partial fractions over the roots of the two cubics, and the
// normalization handles the power-law endpoint tails analytically. At
// b = 2/3 the pair is not normalizable; the unnormalized pair (f0 = f1) is
// returned with normalized == false.
struct PdmpDensity {
    PdmpConfig config;
    std::vector<double> x;   // symmetric grid, geometric refinement near 0 and 1
    std::vector<double> f0;
    std::vector<double> f1;
    double norm_constant = 1.0;
    double tail_exponent = 0.0;  // lambda * c: f ~ t^(lambda c - 1) at the endpoints
    bool normalized = true;
};

PdmpDensity invariant_density(const PdmpConfig& config, int grid_points = 16384);

// Stationary likelihood ratio for state 1 given k ones in a three-sample.
double likelihood_ratio(const PdmpDensity& density, int k);

struct BStarResult {
    double b_star;
    double p_hat;
    double beliefs[4];  // p_0..p_3
    double welfare;
    double info_rate;
    PdmpDensity density;
};

// Bisection on b for LR_2(b) = p_hat / (1 - p_hat); verifies the belief
// ordering p_0 < 1 - p_hat < p_hat < p_3 and that welfare exceeds p_hat.
BStarResult find_b_star(double lambda, double pi, double cost, int grid_points = 16384);

// Event-driven simulation of the jump-drift process: exponential switching
// times, adaptive fourth-order integration of x' = h_theta(x) between jumps,
// time-weighted histogram of (theta, x).
struct PdmpSimResult {
    std::vector<double> mass0, mass1;  // per histogram bin, sums to 1
    double l1_distance;                // against the analytic density
};

PdmpSimResult simulate_pdmp(const PdmpDensity& density, double total_time, int bins,
                            std::uint64_t seed);

// Simulates the discrete game at scale eps (switch probability lambda*eps,
// renewal share eps) under the same strategy and reports the total-variation
// distance between the empirical histogram and the analytic density, for each
// eps. Distances should fall as eps does.
std::vector<double> discretization_check(const PdmpDensity& density, const std::vector<double>& eps_list,
                                         std::int64_t sim_budget, std::uint64_t seed, int bins = 64);

}  // namespace sll
