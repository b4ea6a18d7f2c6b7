#pragma once

#include <cstdint>

#include "sll/strategy.hpp"

namespace sll {

// Closed-form equilibrium for a single sampled action.
struct N1Equilibrium {
    bool full_acquisition = false;  // regime
    double beta = 0.0;              // acquisition probability
    double p1 = 0.0;                // interim belief after sampling a 1
    double welfare = 0.0;
    double lambda_star = 0.0;       // regime threshold on the recency-adjusted rate
};

N1Equilibrium solve_n1(const Environment& env);

// Equilibrium strategy object for the n = 1 solution (used by simulators).
Strategy n1_strategy(const Environment& env, const N1Equilibrium& eq);

// Diagnostics for the two-action sample: consensus absorption and the
// acquisition probability at unanimous samples.
struct N2Diagnostics {
    double absorption_fraction = 0.0;  // paths ending within eps of {0,1}
    double drift = 0.0;                // log-step drift ln(2 phi1) + ln(2 phi0)
    double beta_star = 0.0;            // acquisition probability at unanimous samples
    double p2 = 0.0;                   // stationary belief at a unanimous sample
    double p2_se = 0.0;
    double welfare = 0.0;
    double welfare_se = 0.0;
    bool full_acquisition = false;
    double bracket_lo = 0.0, bracket_hi = 0.0;  // final bisection bracket on beta
};

// Simulates the herding-at-unanimity dynamics (beta(0)=beta(2)=0, beta(1)=1)
// with the given balanced-sample response phi1 in state 1, and reports the
// fraction of paths inside [0,eps] u [1-eps,1] at the horizon.
N2Diagnostics n2_absorption_test(const Environment& env, double phi1, double eps,
                                 std::int64_t paths, std::int64_t horizon, std::uint64_t seed);

// Finds the acquisition probability at unanimous samples that pins the
// stationary unanimous-sample belief to the indifference threshold, by
// bisection against a simulated long-run estimate. Falls back to the
// full-acquisition equilibrium when even beta = 1 leaves the belief interior.
N2Diagnostics solve_n2(const Environment& env, std::int64_t sim_budget, std::uint64_t seed);

// Strategy object for a given unanimous-sample acquisition probability, with
// unanimous-sample beliefs pinned at p2 (balanced sample stays at 1/2).
Strategy n2_strategy(const Environment& env, double beta_unanimous, double p2);

}  // namespace sll
